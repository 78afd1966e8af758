// Copyright 2026 The pbihs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pbihs/int.hpp"

#include <algorithm>

namespace pbihs {

namespace {
constexpr Int::Raw kMin = static_cast<Int::Raw>(static_cast<unsigned __int128>(1) << 127);
}  // namespace

int64_t Int::to_int64() const {
  if (!fits_int64()) throw OverflowError("Int does not fit in 64 bits");
  return static_cast<int64_t>(v_);
}

Int Int::operator-() const {
  if (v_ == kMin) throw OverflowError("negation overflow");
  return from_raw(-v_);
}

Int& Int::operator+=(Int o) {
  if (__builtin_add_overflow(v_, o.v_, &v_)) throw OverflowError("addition overflow");
  return *this;
}

Int& Int::operator-=(Int o) {
  if (__builtin_sub_overflow(v_, o.v_, &v_)) throw OverflowError("subtraction overflow");
  return *this;
}

Int& Int::operator*=(Int o) {
  if (__builtin_mul_overflow(v_, o.v_, &v_)) throw OverflowError("multiplication overflow");
  return *this;
}

std::string Int::to_string() const {
  if (v_ == 0) return "0";
  std::string out;
  unsigned __int128 u = v_ < 0 ? static_cast<unsigned __int128>(-(v_ + 1)) + 1
                               : static_cast<unsigned __int128>(v_);
  while (u != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (v_ < 0) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<Int> Int::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  size_t i = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) return std::nullopt;
  Raw acc = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    // Accumulate negatively so that the minimum value round-trips.
    if (__builtin_mul_overflow(acc, 10, &acc)) return std::nullopt;
    if (__builtin_sub_overflow(acc, c - '0', &acc)) return std::nullopt;
  }
  if (!negative) {
    if (acc == kMin) return std::nullopt;
    acc = -acc;
  }
  return from_raw(acc);
}

Int ceil_div(Int num, Int den) {
  if (den <= 0) throw std::invalid_argument("ceil_div: divisor must be positive");
  Int::Raw n = num.raw();
  Int::Raw d = den.raw();
  Int::Raw q = n / d;
  if (n % d != 0 && n > 0) ++q;
  return Int::from_raw(q);
}

Int abs(Int v) { return v < 0 ? -v : v; }

std::ostream& operator<<(std::ostream& os, Int v) { return os << v.to_string(); }

}  // namespace pbihs
