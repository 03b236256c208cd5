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

#include "pmga/wire.h"

#include <bit>

#include "pmga/error.h"

namespace pmga {

namespace {

int BitsFor(unsigned int max_value) {
  // Width needed for values 0..max_value; one value still takes one bit.
  return max_value == 0 ? 1 : std::bit_width(max_value);
}

class BitWriter {
 public:
  void Write(std::uint32_t value, int bits) {
    for (int b = 0; b < bits; ++b) {
      const std::size_t byte = static_cast<std::size_t>(position_ / 8);
      if (byte >= bytes_.size()) bytes_.push_back(0);
      if ((value >> b) & 1u) {
        bytes_[byte] |= static_cast<std::uint8_t>(1u << (position_ % 8));
      }
      ++position_;
    }
  }

  PackedAnswers Finish(int bits_per_answer) && {
    return PackedAnswers{.bytes = std::move(bytes_),
                         .bit_count = position_,
                         .bits_per_answer = bits_per_answer};
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::int64_t position_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const PackedAnswers& packed) : packed_(packed) {}

  std::uint32_t Read(int bits) {
    std::uint32_t value = 0;
    for (int b = 0; b < bits; ++b) {
      if (position_ >= packed_.bit_count) {
        throw ValidationError("bit stream exhausted");
      }
      const std::size_t byte = static_cast<std::size_t>(position_ / 8);
      if ((packed_.bytes[byte] >> (position_ % 8)) & 1u) {
        value |= 1u << b;
      }
      ++position_;
    }
    return value;
  }

 private:
  const PackedAnswers& packed_;
  std::int64_t position_ = 0;
};

}  // namespace

int QaBitsPerUser(int m) { return BitsFor(static_cast<unsigned>(2 * m - 1)); }

int RgBitsPerUser(int k, int m) {
  return BitsFor(static_cast<unsigned>(k - 1)) + QaBitsPerUser(m);
}

PackedAnswers PackQaAnswers(std::span<const QaAnswer> answers, int m) {
  const int bits = QaBitsPerUser(m);
  BitWriter writer;
  for (const QaAnswer& a : answers) {
    if (a.column < 1 || a.column > 2 * m) {
      throw ValidationError("answer column out of range");
    }
    writer.Write(static_cast<std::uint32_t>(a.column - 1), bits);
  }
  return std::move(writer).Finish(bits);
}

std::vector<int> UnpackQaColumns(const PackedAnswers& packed, std::int64_t n,
                                 int m) {
  const int bits = QaBitsPerUser(m);
  BitReader reader(packed);
  std::vector<int> columns(static_cast<std::size_t>(n));
  for (auto& c : columns) c = static_cast<int>(reader.Read(bits)) + 1;
  return columns;
}

PackedAnswers PackRgAnswers(std::span<const RgAnswer> answers, int k, int m) {
  const Alphabet alphabet(m);
  const int group_bits = BitsFor(static_cast<unsigned>(k - 1));
  const int value_bits = QaBitsPerUser(m);
  BitWriter writer;
  for (const RgAnswer& a : answers) {
    if (a.group < 1 || a.group > k) {
      throw ValidationError("answer group out of range");
    }
    writer.Write(static_cast<std::uint32_t>(a.group - 1), group_bits);
    writer.Write(static_cast<std::uint32_t>(alphabet.IndexOf(a.value)),
                 value_bits);
  }
  return std::move(writer).Finish(group_bits + value_bits);
}

std::vector<std::pair<int, int>> UnpackRgAnswers(const PackedAnswers& packed,
                                                 std::int64_t n, int k, int m) {
  const Alphabet alphabet(m);
  const int group_bits = BitsFor(static_cast<unsigned>(k - 1));
  const int value_bits = QaBitsPerUser(m);
  BitReader reader(packed);
  std::vector<std::pair<int, int>> out(static_cast<std::size_t>(n));
  for (auto& [group, value] : out) {
    group = static_cast<int>(reader.Read(group_bits)) + 1;
    value = alphabet.ValueAt(static_cast<int>(reader.Read(value_bits)));
  }
  return out;
}

}  // namespace pmga
