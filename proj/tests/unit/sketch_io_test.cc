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

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include "fedfreq/datasets.h"
#include "fedfreq/errors.h"
#include "fedfreq/hashing.h"
#include "fedfreq/sketch.h"
#include "gtest/gtest.h"

namespace fedfreq {
namespace {

SketchMatrix SampleSketch() {
  const HashFamily family(0xfeedULL, 3, 7, 100, 4, SignMode::kPerRound);
  return EncodeClients(family, 2, GenerateZipf(100, 250, 1.3, 4));
}

TEST(SketchIoTest, BinaryRoundTrip) {
  const SketchMatrix sketch = SampleSketch();
  std::stringstream buffer;
  WriteSketchBinary(buffer, sketch);
  // magic + version + rows + width + seed + tag + scale + L * W counts.
  EXPECT_EQ(buffer.str().size(), 4u + 4 + 4 + 4 + 8 + 8 + 8 + 3 * 7 * 8);
  EXPECT_EQ(buffer.str().substr(0, 4), "FFSK");
  EXPECT_EQ(ReadSketchBinary(buffer), sketch);
}

TEST(SketchIoTest, BinaryIsLittleEndian) {
  SketchMatrix sketch(1, 1, 0x0102030405060708ULL, 0);
  sketch.at(0, 0) = -2;
  sketch.set_scale(1);
  std::stringstream buffer;
  WriteSketchBinary(buffer, sketch);
  const std::string bytes = buffer.str();
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1);      // rows
  EXPECT_EQ(static_cast<unsigned char>(bytes[16]), 0x08);  // seed low byte
  EXPECT_EQ(static_cast<unsigned char>(bytes[bytes.size() - 8]), 0xfe);
  EXPECT_EQ(static_cast<unsigned char>(bytes.back()), 0xff);
}

TEST(SketchIoTest, CsvRoundTrip) {
  const SketchMatrix sketch = SampleSketch();
  std::stringstream buffer;
  WriteSketchCsv(buffer, sketch);
  std::string header;
  std::getline(buffer, header);
  EXPECT_EQ(header, "rows,width,seed,family_tag,scale");
  buffer.seekg(0);
  EXPECT_EQ(ReadSketchCsv(buffer), sketch);
}

TEST(SketchIoTest, TruncatedBinaryFails) {
  std::stringstream buffer;
  WriteSketchBinary(buffer, SampleSketch());
  std::string bytes = buffer.str();
  bytes.resize(bytes.size() - 3);
  std::stringstream cut(bytes);
  EXPECT_THROW(ReadSketchBinary(cut), ParseError);
}

TEST(SketchIoTest, BadMagicFails) {
  std::stringstream buffer("NOPE and some more bytes to read here......");
  EXPECT_THROW(ReadSketchBinary(buffer), ParseError);
}

TEST(SketchIoTest, MalformedCsvReportsLine) {
  std::stringstream buffer(
      "rows,width,seed,family_tag,scale\n1,2,3,4,5\n1,x\n");
  try {
    ReadSketchCsv(buffer);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(SketchIoTest, FilesByExtension) {
  const auto dir = std::filesystem::temp_directory_path();
  const SketchMatrix sketch = SampleSketch();
  for (const char* name : {"fedfreq_io_test.sk", "fedfreq_io_test.csv"}) {
    const auto path = (dir / name).string();
    SaveSketch(path, sketch);
    EXPECT_EQ(LoadSketch(path), sketch) << name;
    std::remove(path.c_str());
  }
  EXPECT_THROW(LoadSketch((dir / "fedfreq_missing.sk").string()),
               ArgumentError);
}

}  // namespace
}  // namespace fedfreq
