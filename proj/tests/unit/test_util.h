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

#ifndef FEDFREQ_TESTS_UNIT_TEST_UTIL_H_
#define FEDFREQ_TESTS_UNIT_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <vector>

namespace fedfreq::testing {

// Wilson-Hilferty approximation of the chi-square quantile with `dof`
// degrees of freedom at the standard normal quantile `z`.
inline double ChiSquareQuantile(double dof, double z) {
  const double c = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - c + z * std::sqrt(c), 3.0);
}

// Standard normal quantile at 0.999.
inline constexpr double kZ999 = 3.090232306167813;

inline double ChiSquareStatistic(const std::vector<std::int64_t>& observed) {
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  const double expected = total / static_cast<double>(observed.size());
  double stat = 0.0;
  for (auto o : observed) {
    const double diff = static_cast<double>(o) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

}  // namespace fedfreq::testing

#endif  // FEDFREQ_TESTS_UNIT_TEST_UTIL_H_
