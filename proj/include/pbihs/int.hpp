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

#ifndef PBIHS_INT_HPP_
#define PBIHS_INT_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pbihs {

/// Raised whenever an exact integer operation would leave the 128-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Checked signed 128-bit integer. Every arithmetic operation either yields
/// the exact result or throws OverflowError; nothing wraps silently.
class Int {
 public:
  using Raw = __int128;

  constexpr Int() = default;
  constexpr Int(int v) : v_(v) {}            // NOLINT(google-explicit-constructor)
  constexpr Int(long v) : v_(v) {}           // NOLINT(google-explicit-constructor)
  constexpr Int(long long v) : v_(v) {}      // NOLINT(google-explicit-constructor)
  constexpr Int(unsigned v) : v_(v) {}       // NOLINT(google-explicit-constructor)
  constexpr Int(unsigned long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  static constexpr Int from_raw(Raw v) {
    Int r;
    r.v_ = v;
    return r;
  }

  constexpr Raw raw() const { return v_; }
  bool fits_int64() const { return v_ >= INT64_MIN && v_ <= INT64_MAX; }
  int64_t to_int64() const;

  Int operator-() const;
  Int& operator+=(Int o);
  Int& operator-=(Int o);
  Int& operator*=(Int o);

  friend Int operator+(Int a, Int b) { return a += b; }
  friend Int operator-(Int a, Int b) { return a -= b; }
  friend Int operator*(Int a, Int b) { return a *= b; }

  friend constexpr bool operator==(Int a, Int b) { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(Int a, Int b) {
    return a.v_ <=> b.v_;
  }

  std::string to_string() const;
  /// Parses an optionally signed decimal literal. Returns nullopt on
  /// malformed input or when the value does not fit.
  static std::optional<Int> parse(std::string_view text);

 private:
  Raw v_ = 0;
};

/// Ceiling division for a non-negative divisor > 0.
Int ceil_div(Int num, Int den);
Int abs(Int v);

inline Int min(Int a, Int b) { return a < b ? a : b; }
inline Int max(Int a, Int b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, Int v);

}  // namespace pbihs

template <>
struct std::hash<pbihs::Int> {
  size_t operator()(pbihs::Int v) const noexcept {
    auto u = static_cast<unsigned __int128>(v.raw());
    return std::hash<uint64_t>{}(static_cast<uint64_t>(u) ^
                                 static_cast<uint64_t>(u >> 64) * 0x9E3779B97F4A7C15ull);
  }
};

#endif  // PBIHS_INT_HPP_
