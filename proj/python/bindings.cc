//
// Copyright 2026 The FedFreq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fedfreq/datasets.h"
#include "fedfreq/errors.h"
#include "fedfreq/experiment.h"
#include "fedfreq/hashing.h"
#include "fedfreq/multiround.h"
#include "fedfreq/privacy.h"
#include "fedfreq/securesum.h"
#include "fedfreq/sizing.h"
#include "fedfreq/sketch.h"

namespace py = pybind11;

namespace fedfreq {
namespace {

std::vector<std::int64_t> Counts(const SketchMatrix& sketch) {
  return {sketch.counts().begin(), sketch.counts().end()};
}

SketchMatrix SketchFromCounts(int rows, int width,
                              const std::vector<std::int64_t>& counts,
                              std::int64_t scale, std::uint64_t seed,
                              std::uint64_t family_tag) {
  SketchMatrix sketch(rows, width, seed, family_tag);
  if (counts.size() != sketch.counts().size()) {
    throw ArgumentError("counts must have rows * width entries");
  }
  std::copy(counts.begin(), counts.end(), sketch.mutable_counts().begin());
  sketch.set_scale(scale);
  return sketch;
}

ExperimentConfig ConfigFromDict(const py::dict& options) {
  ExperimentConfig config;
  for (const auto& [key, value] : options) {
    std::string text;
    if (py::isinstance<py::bool_>(value)) {
      text = value.cast<bool>() ? "true" : "false";
    } else if (py::isinstance<py::list>(value) ||
               py::isinstance<py::tuple>(value)) {
      std::ostringstream joined;
      bool first = true;
      for (const auto& entry : value) {
        if (!first) joined << ",";
        joined << py::str(entry).cast<std::string>();
        first = false;
      }
      text = joined.str();
    } else {
      text = py::str(value).cast<std::string>();
    }
    config.Set(key.cast<std::string>(), text);
  }
  return config;
}

py::dict RowToDict(const MetricsRow& row) {
  py::dict out;
  out["strategy"] = std::string(StrategyName(row.strategy));
  out["seed"] = row.seed;
  out["repeat"] = row.repeat;
  out["L"] = row.rows;
  out["W"] = row.width;
  out["tau_target"] = row.tau_target;
  out["linf_error"] = row.linf_error;
  out["items_over_threshold"] = row.items_over_threshold;
  out["threshold"] = row.threshold;
  out["bits_per_client"] = row.bits_per_client;
  out["total_bits"] = row.total_bits;
  out["sigma"] = row.sigma;
  out["dp_term"] = row.dp_term;
  out["bound"] = row.bound;
  out["wall_time"] = row.wall_time;
  return out;
}

}  // namespace
}  // namespace fedfreq

PYBIND11_MODULE(_core, m) {
  using namespace fedfreq;
  m.doc() = "Count-sketch frequency estimation across federated rounds.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<InvalidStateError>(m, "InvalidStateError", base.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError",
                                             base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<ProtocolError>(m, "ProtocolError", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<OutOfRegimeError>(m, "OutOfRegimeError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  py::enum_<SignMode>(m, "SignMode")
      .value("SHARED", SignMode::kShared)
      .value("PER_ROUND", SignMode::kPerRound);

  py::class_<HashFamily>(m, "HashFamily")
      .def(py::init<std::uint64_t, int, int, ItemId, int, SignMode>(),
           py::arg("seed"), py::arg("rows"), py::arg("width"),
           py::arg("domain_size"), py::arg("rounds") = 1,
           py::arg("sign_mode") = SignMode::kShared)
      .def("bucket", &HashFamily::Bucket, py::arg("row"), py::arg("item"))
      .def("sign", &HashFamily::Sign, py::arg("row"), py::arg("round"),
           py::arg("item"))
      .def_property_readonly("seed", &HashFamily::master_seed)
      .def_property_readonly("rows", &HashFamily::num_rows)
      .def_property_readonly("width", &HashFamily::width)
      .def_property_readonly("rounds", &HashFamily::num_rounds)
      .def_property_readonly("domain_size", &HashFamily::domain_size)
      .def_property_readonly("sign_mode", &HashFamily::mode);

  m.def("fresh_families", &MakeFreshFamilies, py::arg("seed"), py::arg("rows"),
        py::arg("width"), py::arg("domain_size"), py::arg("rounds"));

  py::class_<SketchMatrix>(m, "Sketch")
      .def(py::init(&SketchFromCounts), py::arg("rows"), py::arg("width"),
           py::arg("counts"), py::arg("scale") = 0, py::arg("seed") = 0,
           py::arg("family_tag") = 0)
      .def_property_readonly("rows", &SketchMatrix::rows)
      .def_property_readonly("width", &SketchMatrix::width)
      .def_property_readonly("scale", &SketchMatrix::scale)
      .def_property_readonly("seed", &SketchMatrix::seed)
      .def_property_readonly("family_tag", &SketchMatrix::family_tag)
      .def_property_readonly("counts", &Counts)
      .def("__getitem__",
           [](const SketchMatrix& s, std::pair<int, int> index) {
             if (index.first < 0 || index.first >= s.rows() ||
                 index.second < 0 || index.second >= s.width()) {
               throw py::index_error("sketch index out of range");
             }
             return s.at(index.first, index.second);
           })
      .def("__iadd__", &SketchMatrix::operator+=)
      .def(py::self == py::self);

  py::enum_<Strategy>(m, "Strategy")
      .value("SINGLE", Strategy::kSingleRound)
      .value("SHARED", Strategy::kShared)
      .value("FRESH", Strategy::kFresh)
      .value("HYBRID", Strategy::kHybrid);

  py::class_<FrequencyEstimate>(m, "FrequencyEstimate")
      .def_readonly("values", &FrequencyEstimate::values)
      .def_readonly("strategy", &FrequencyEstimate::strategy)
      .def_readonly("rows", &FrequencyEstimate::rows)
      .def_readonly("width", &FrequencyEstimate::width)
      .def_readonly("rounds", &FrequencyEstimate::rounds)
      .def_readonly("seed", &FrequencyEstimate::seed);

  m.def("encode_item", &EncodeItem, py::arg("family"), py::arg("round"),
        py::arg("item"));
  m.def(
      "encode_clients",
      [](const HashFamily& family, int round,
         const std::vector<ItemId>& items) {
        return EncodeClients(family, round, items);
      },
      py::arg("family"), py::arg("round"), py::arg("items"));
  m.def(
      "aggregate",
      [](const std::vector<SketchMatrix>& sketches) {
        return Aggregate(sketches);
      },
      py::arg("sketches"));
  m.def("decode", &DecodeSingleRound, py::arg("sketch"), py::arg("family"),
        py::arg("round") = 0);
  m.def(
      "linf_error",
      [](const std::vector<double>& estimate,
         const std::vector<double>& truth) {
        return LinfError(estimate, truth);
      },
      py::arg("estimate"), py::arg("truth"));

  py::class_<RoundPlan>(m, "RoundPlan")
      .def(py::init([](const std::vector<std::vector<ItemId>>& rounds,
                       ItemId domain_size) {
             RoundPlan plan;
             plan.rounds = rounds;
             plan.domain_size = domain_size;
             plan.Validate();
             return plan;
           }),
           py::arg("rounds"), py::arg("domain_size"))
      .def_static(
          "from_items",
          [](const std::vector<ItemId>& items, int rounds, ItemId domain_size) {
            return RoundPlan::FromItems(items, rounds, domain_size);
          },
          py::arg("items"), py::arg("rounds"), py::arg("domain_size"))
      .def_readonly("rounds", &RoundPlan::rounds)
      .def_readonly("domain_size", &RoundPlan::domain_size)
      .def_property_readonly("num_rounds", &RoundPlan::num_rounds)
      .def_property_readonly("clients_per_round",
                             &RoundPlan::clients_per_round);

  m.def("run_shared", &RunShared, py::arg("plan"), py::arg("family"));
  m.def(
      "run_fresh",
      [](const RoundPlan& plan, const std::vector<HashFamily>& families) {
        return RunFresh(plan, families);
      },
      py::arg("plan"), py::arg("families"));
  m.def("run_hybrid", &RunHybrid, py::arg("plan"), py::arg("family"));
  m.def(
      "heterogeneity",
      [](const RoundPlan& plan) { return Heterogeneity(plan).values; },
      py::arg("plan"));
  m.def(
      "exact_frequencies",
      [](const RoundPlan& plan) { return ExactOracle(plan).global; },
      py::arg("plan"));

  m.def("zipf_frequencies", &ZipfFrequencies, py::arg("domain_size"),
        py::arg("exponent"));
  m.def("generate_zipf", &GenerateZipf, py::arg("domain_size"),
        py::arg("num_clients"), py::arg("exponent"), py::arg("seed"));

  py::class_<GroupParams>(m, "GroupParams")
      .def_static("for_clients", &GroupParams::ForClients,
                  py::arg("max_clients"), py::arg("max_abs_entry") = 1)
      .def_static("with_bits", &GroupParams::WithBits, py::arg("bits"),
                  py::arg("max_clients"), py::arg("max_abs_entry") = 1)
      .def_property_readonly("bits", &GroupParams::bits)
      .def_property_readonly("modulus", &GroupParams::modulus);
  m.def(
      "secure_round_aggregate",
      [](const HashFamily& family, int round, const std::vector<ItemId>& items,
         const GroupParams& params, std::uint64_t seed) {
        return SecureRoundAggregate(family, round, items, params, seed);
      },
      py::arg("family"), py::arg("round"), py::arg("items"), py::arg("params"),
      py::arg("seed"));
  m.def("comm_cost_bits", &CommCostBits, py::arg("rows"), py::arg("width"),
        py::arg("params"));

  m.def("rows_for_domain", &RowsForDomain, py::arg("domain_size"),
        py::arg("p") = 0.1);
  m.def(
      "tail_error",
      [](const std::vector<double>& freqs, std::int64_t width) {
        return TailError(SortedDescending(freqs), width);
      },
      py::arg("freqs"), py::arg("width"));
  m.def(
      "oracle_width",
      [](const std::vector<double>& freqs, double tau, std::int64_t n, double p,
         double constant) {
        return OracleWidth(freqs, TargetSpec{tau, p, constant}, n);
      },
      py::arg("freqs"), py::arg("tau"), py::arg("num_clients"),
      py::arg("p") = 0.1, py::arg("constant") = 2.0);
  m.def(
      "worst_case_width",
      [](double tau, std::int64_t n, double p, double constant) {
        return WorstCaseWidth(TargetSpec{tau, p, constant}, n);
      },
      py::arg("tau"), py::arg("num_clients"), py::arg("p") = 0.1,
      py::arg("constant") = 2.0);

  py::class_<PowerLawFit>(m, "PowerLawFit")
      .def_readonly("alpha", &PowerLawFit::alpha)
      .def_readonly("beta", &PowerLawFit::beta)
      .def_readonly("i_star", &PowerLawFit::i_star)
      .def_readonly("k_top", &PowerLawFit::k_top)
      .def_readonly("residual", &PowerLawFit::residual);
  m.def(
      "fit_power_law",
      [](const std::vector<double>& estimates, int k_top, double floor) {
        return FitPowerLaw(estimates, k_top, floor);
      },
      py::arg("estimates"), py::arg("k_top") = 20, py::arg("floor") = 0.0);

  py::class_<SizingReport>(m, "SizingReport")
      .def_readonly("tau", &SizingReport::tau)
      .def_readonly("rows", &SizingReport::rows)
      .def_readonly("width", &SizingReport::width)
      .def_readonly("worst_width", &SizingReport::worst_width)
      .def_readonly("oracle_width", &SizingReport::oracle_width)
      .def_readonly("predicted_bits", &SizingReport::predicted_bits)
      .def_readonly("fit", &SizingReport::fit)
      .def_readonly("fell_back", &SizingReport::fell_back)
      .def_readonly("warning", &SizingReport::warning);
  m.def(
      "two_phase_plan",
      [](const std::vector<ItemId>& pilot_items, ItemId domain_size, double tau,
         std::int64_t n, std::uint64_t seed, double p, double constant) {
        return TwoPhasePlan(pilot_items, domain_size,
                            TargetSpec{tau, p, constant}, PilotConfig{}, n,
                            seed);
      },
      py::arg("pilot_items"), py::arg("domain_size"), py::arg("tau"),
      py::arg("num_clients"), py::arg("seed"), py::arg("p") = 0.1,
      py::arg("constant") = 2.0);

  m.def(
      "calibrate_sigma",
      [](double epsilon, double delta, int rows, std::int64_t n,
         std::optional<double> c0) {
        PrivacyParams params{epsilon, delta};
        if (c0) params.c0 = *c0;
        return CalibrateSigma(params, rows, n);
      },
      py::arg("epsilon"), py::arg("delta"), py::arg("rows"),
      py::arg("clients_per_round"), py::arg("c0") = py::none());
  m.def("run_hybrid_private", &RunHybridPrivate, py::arg("plan"),
        py::arg("family"), py::arg("sigma"), py::arg("seed"));

  m.def(
      "run_experiment",
      [](const py::dict& options) {
        const ExperimentConfig config = ConfigFromDict(options);
        config.Validate();
        const ExperimentResult result = RunExperiment(config);
        py::list rows;
        for (const MetricsRow& row : result.rows) rows.append(RowToDict(row));
        return rows;
      },
      py::arg("options"),
      "Runs an experiment from config keys and returns one dict per row.");
  m.def("config_keys", [] { return ExperimentConfig::Keys(); });
}
