// Copyright 2026 The PMGA Authors
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

#ifndef PMGA_WIRE_H_
#define PMGA_WIRE_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pmga/qa.h"
#include "pmga/rg.h"

namespace pmga {

// Answer wire format: little-endian packed bitfield, fixed width per user.
// Q&A answers carry the zero-based column index in ceil(log2(2m)) bits; RG
// answers carry ceil(log2(k)) group bits followed by ceil(log2(2m)) value
// bits. Bit j of the stream lives at byte j/8, bit position j%8.

int QaBitsPerUser(int m);
int RgBitsPerUser(int k, int m);

struct PackedAnswers {
  std::vector<std::uint8_t> bytes;
  std::int64_t bit_count = 0;  // exactly n * bits_per_answer
  int bits_per_answer = 0;
};

PackedAnswers PackQaAnswers(std::span<const QaAnswer> answers, int m);
// Columns (1-based) in user order.
std::vector<int> UnpackQaColumns(const PackedAnswers& packed, std::int64_t n,
                                 int m);

PackedAnswers PackRgAnswers(std::span<const RgAnswer> answers, int k, int m);
// (group, value) pairs in user order.
std::vector<std::pair<int, int>> UnpackRgAnswers(const PackedAnswers& packed,
                                                 std::int64_t n, int k, int m);

}  // namespace pmga

#endif  // PMGA_WIRE_H_
