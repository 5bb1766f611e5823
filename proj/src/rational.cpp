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

#include "trajeval/rational.hpp"

#include <cstdlib>
#include <numeric>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

using Int128 = __int128;

std::int64_t narrow(Int128 value) {
  if (value > INT64_MAX || value < INT64_MIN) {
    throw Error(ErrorCode::ConfigError, "rational overflow");
  }
  return static_cast<std::int64_t>(value);
}

// Rounds value/den half-up, both positive.
std::int64_t div_half_up(Int128 value, Int128 den) {
  return narrow((2 * value + den) / (2 * den));
}

std::string two_dp_string(std::int64_t hundredths) {
  std::string sign = hundredths < 0 ? "-" : "";
  std::int64_t abs = hundredths < 0 ? -hundredths : hundredths;
  std::string frac = std::to_string(abs % 100);
  if (frac.size() < 2) frac = "0" + frac;
  return sign + std::to_string(abs / 100) + "." + frac;
}

}  // namespace

Ratio::Ratio(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) {
    throw Error(ErrorCode::ConfigError, "zero denominator");
  }
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  std::int64_t g = std::gcd(numerator, denominator);
  if (g == 0) g = 1;
  num_ = numerator / g;
  den_ = denominator / g;
}

Ratio Ratio::from_decimal(std::string_view text) {
  std::size_t dot = text.find('.');
  bool ok = !text.empty();
  bool any_digit = false;
  for (std::size_t i = 0; i < text.size() && ok; ++i) {
    char c = text[i];
    if (i == 0 && (c == '-' || c == '+')) continue;
    if (i == dot) continue;
    if (c < '0' || c > '9') ok = false;
    else any_digit = true;
  }
  ok = ok && any_digit;
  if (!ok || dot == text.size() - 1) {
    throw Error(ErrorCode::ConfigError,
                "not a decimal number: \"" + std::string(text) + "\"");
  }
  if (dot == std::string_view::npos) {
    return Ratio(std::atoll(std::string(text).c_str()), 1);
  }
  std::string digits = std::string(text.substr(0, dot)) +
                       std::string(text.substr(dot + 1));
  std::int64_t den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  return Ratio(std::atoll(digits.c_str()), den);
}

Ratio Ratio::operator+(const Ratio& other) const {
  // Pre-reduce by the denominators' gcd to keep intermediates small.
  std::int64_t dg = std::gcd(den_, other.den_);
  Int128 n = Int128(num_) * (other.den_ / dg) + Int128(other.num_) * (den_ / dg);
  Int128 d = Int128(den_ / dg) * other.den_;
  return Ratio(narrow(n), narrow(d));
}

Ratio Ratio::operator*(const Ratio& other) const {
  std::int64_t g1 = std::gcd(num_, other.den_);
  std::int64_t g2 = std::gcd(other.num_, den_);
  Int128 n = Int128(num_ / g1) * (other.num_ / g2);
  Int128 d = Int128(den_ / g2) * (other.den_ / g1);
  return Ratio(narrow(n), narrow(d));
}

Ratio Ratio::operator/(const Ratio& other) const {
  if (other.num_ == 0) throw Error(ErrorCode::ConfigError, "division by zero");
  return *this * Ratio(other.den_, other.num_);
}

bool Ratio::operator<(const Ratio& other) const {
  return Int128(num_) * other.den_ < Int128(other.num_) * den_;
}

bool Ratio::operator<=(const Ratio& other) const {
  return Int128(num_) * other.den_ <= Int128(other.num_) * den_;
}

std::int64_t Ratio::ceil_times(std::int64_t factor) const {
  Int128 n = Int128(num_) * factor;
  Int128 d = den_;
  Int128 q = n / d;
  if (n % d != 0 && n > 0) q += 1;
  return narrow(q);
}

std::string Ratio::percent_2dp() const {
  if (num_ < 0) {
    return "-" + Ratio(-num_, den_).percent_2dp();
  }
  return two_dp_string(div_half_up(Int128(num_) * 10000, den_));
}

std::string Ratio::decimal_2dp() const {
  if (num_ < 0) {
    return "-" + Ratio(-num_, den_).decimal_2dp();
  }
  return two_dp_string(div_half_up(Int128(num_) * 100, den_));
}

}  // namespace trajeval
