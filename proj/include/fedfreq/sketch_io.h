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

#ifndef FEDFREQ_SKETCH_IO_H_
#define FEDFREQ_SKETCH_IO_H_

#include <iosfwd>
#include <string>

#include "fedfreq/sketch.h"

namespace fedfreq {

// Binary layout, all fields little-endian:
//
//   offset  size  field
//        0     4  magic "FFSK"
//        4     4  u32 format version (1)
//        8     4  u32 rows L
//       12     4  u32 width W
//       16     8  u64 master seed
//       24     8  u64 family tag
//       32     8  i64 scale (contributing clients)
//       40  8*L*W i64 counts, row-major
inline constexpr char kSketchMagic[4] = {'F', 'F', 'S', 'K'};
inline constexpr std::uint32_t kSketchFormatVersion = 1;

void WriteSketchBinary(std::ostream& out, const SketchMatrix& sketch);
// Throws ParseError on a truncated stream or bad header.
SketchMatrix ReadSketchBinary(std::istream& in);

// Debug CSV: a header line "rows,width,seed,family_tag,scale", one line of
// those values, then L lines of W comma-separated counts.
void WriteSketchCsv(std::ostream& out, const SketchMatrix& sketch);
SketchMatrix ReadSketchCsv(std::istream& in);

void SaveSketch(const std::string& path, const SketchMatrix& sketch);
// Chooses the format from the first bytes of the file.
SketchMatrix LoadSketch(const std::string& path);

}  // namespace fedfreq

#endif  // FEDFREQ_SKETCH_IO_H_
