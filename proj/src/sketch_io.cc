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

#include "fedfreq/sketch_io.h"

#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "fedfreq/errors.h"

namespace fedfreq {
namespace {

template <typename T>
void PutLittleEndian(std::ostream& out, T value) {
  using U = std::make_unsigned_t<T>;
  U bits = static_cast<U>(value);
  std::array<char, sizeof(U)> buf;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<char>(bits & 0xff);
    bits = static_cast<U>(bits >> 8);
  }
  out.write(buf.data(), buf.size());
}

template <typename T>
T GetLittleEndian(std::istream& in) {
  using U = std::make_unsigned_t<T>;
  std::array<unsigned char, sizeof(U)> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw ParseError("sketch file truncated", 0);
  }
  U bits = 0;
  for (std::size_t i = sizeof(U); i-- > 0;) {
    bits = static_cast<U>((bits << 8) | buf[i]);
  }
  return static_cast<T>(bits);
}

template <typename T>
T ParseNumber(std::string_view field, long line) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("invalid number '" + std::string(field) + "'", line);
  }
  return value;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

void WriteSketchBinary(std::ostream& out, const SketchMatrix& sketch) {
  out.write(kSketchMagic, sizeof(kSketchMagic));
  PutLittleEndian<std::uint32_t>(out, kSketchFormatVersion);
  PutLittleEndian<std::uint32_t>(out,
                                 static_cast<std::uint32_t>(sketch.rows()));
  PutLittleEndian<std::uint32_t>(out,
                                 static_cast<std::uint32_t>(sketch.width()));
  PutLittleEndian<std::uint64_t>(out, sketch.seed());
  PutLittleEndian<std::uint64_t>(out, sketch.family_tag());
  PutLittleEndian<std::int64_t>(out, sketch.scale());
  for (std::int64_t c : sketch.counts()) PutLittleEndian<std::int64_t>(out, c);
}

SketchMatrix ReadSketchBinary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kSketchMagic, sizeof(magic)) != 0) {
    throw ParseError("not a sketch file (bad magic)", 0);
  }
  const auto version = GetLittleEndian<std::uint32_t>(in);
  if (version != kSketchFormatVersion) {
    throw ParseError(
        "unsupported sketch format version " + std::to_string(version), 0);
  }
  const auto rows = GetLittleEndian<std::uint32_t>(in);
  const auto width = GetLittleEndian<std::uint32_t>(in);
  if (rows == 0 || width == 0 || rows > (1u << 20) || width > (1u << 30)) {
    throw ParseError("implausible sketch shape", 0);
  }
  const auto seed = GetLittleEndian<std::uint64_t>(in);
  const auto tag = GetLittleEndian<std::uint64_t>(in);
  SketchMatrix sketch(static_cast<int>(rows), static_cast<int>(width), seed,
                      tag);
  sketch.set_scale(GetLittleEndian<std::int64_t>(in));
  for (std::int64_t& c : sketch.mutable_counts()) {
    c = GetLittleEndian<std::int64_t>(in);
  }
  return sketch;
}

void WriteSketchCsv(std::ostream& out, const SketchMatrix& sketch) {
  out << "rows,width,seed,family_tag,scale\n";
  out << sketch.rows() << ',' << sketch.width() << ',' << sketch.seed() << ','
      << sketch.family_tag() << ',' << sketch.scale() << '\n';
  for (int l = 0; l < sketch.rows(); ++l) {
    const auto row = sketch.row(l);
    for (int k = 0; k < sketch.width(); ++k) {
      if (k > 0) out << ',';
      out << row[k];
    }
    out << '\n';
  }
}

SketchMatrix ReadSketchCsv(std::istream& in) {
  std::string line;
  long line_no = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) {
      throw ParseError("sketch CSV truncated", line_no + 1);
    }
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next_line();
  if (line != "rows,width,seed,family_tag,scale") {
    throw ParseError("unexpected sketch CSV header", line_no);
  }
  next_line();
  const auto header = SplitCommas(line);
  if (header.size() != 5) throw ParseError("expected 5 header fields", line_no);
  const int rows = ParseNumber<int>(header[0], line_no);
  const int width = ParseNumber<int>(header[1], line_no);
  if (rows < 1 || width < 1) throw ParseError("invalid sketch shape", line_no);
  SketchMatrix sketch(rows, width,
                      ParseNumber<std::uint64_t>(header[2], line_no),
                      ParseNumber<std::uint64_t>(header[3], line_no));
  sketch.set_scale(ParseNumber<std::int64_t>(header[4], line_no));
  for (int l = 0; l < rows; ++l) {
    next_line();
    const auto fields = SplitCommas(line);
    if (static_cast<int>(fields.size()) != width) {
      throw ParseError("expected " + std::to_string(width) + " counts",
                       line_no);
    }
    for (int k = 0; k < width; ++k) {
      sketch.at(l, k) = ParseNumber<std::int64_t>(fields[k], line_no);
    }
  }
  return sketch;
}

void SaveSketch(const std::string& path, const SketchMatrix& sketch) {
  const bool csv = path.size() >= 4 && path.ends_with(".csv");
  std::ofstream out(path,
                    csv ? std::ios::out : std::ios::out | std::ios::binary);
  if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
  if (csv) {
    WriteSketchCsv(out, sketch);
  } else {
    WriteSketchBinary(out, sketch);
  }
  if (!out) throw ArgumentError("failed writing '" + path + "'");
}

SketchMatrix LoadSketch(const std::string& path) {
  std::ifstream in(path, std::ios::in | std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  char first[4] = {};
  in.read(first, sizeof(first));
  in.clear();
  in.seekg(0);
  if (std::memcmp(first, kSketchMagic, sizeof(first)) == 0) {
    return ReadSketchBinary(in);
  }
  return ReadSketchCsv(in);
}

}  // namespace fedfreq
