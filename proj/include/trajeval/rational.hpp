/*
 * Copyright 2026 The trajeval Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace trajeval {

/// Exact rational over int64, always normalized (positive denominator,
/// reduced). Metric percentages are kept exact and rounded half-up to two
/// decimals only when formatted for a report.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t numerator, std::int64_t denominator);

  static Ratio zero() { return Ratio(); }

  /// Parses a plain decimal like "3", "0.2", or "2.5" exactly.
  static Ratio from_decimal(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Ratio operator+(const Ratio& other) const;
  Ratio operator*(const Ratio& other) const;
  Ratio operator/(const Ratio& other) const;

  bool operator==(const Ratio& other) const {
    return num_ == other.num_ && den_ == other.den_;
  }
  bool operator<(const Ratio& other) const;
  bool operator<=(const Ratio& other) const;

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// ceil(this * factor) for a non-negative value; used for step limits.
  std::int64_t ceil_times(std::int64_t factor) const;

  /// Value formatted as a percentage with two decimals, half-up:
  /// Ratio(539,1080) -> "49.91". No trailing percent sign.
  std::string percent_2dp() const;

  /// Plain decimal with two decimals, half-up: Ratio(3,2) -> "1.50".
  std::string decimal_2dp() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace trajeval
