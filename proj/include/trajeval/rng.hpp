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
#include <random>
#include <string_view>

namespace trajeval {

/// 64-bit FNV-1a. Used for source digests and state hashes; stable across
/// platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t value);

/// splitmix64 step; the standard seed-spreading function.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent stream seed from a base seed and a salt. Used to
/// give every (task, epoch, run) its own noise stream and to keep the
/// schedule stream separate from the template-choice stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

/// Deterministic generator with fixed draw->value mappings. mt19937_64 is
/// fully specified by the standard; the uniform mappings below avoid
/// std::uniform_*_distribution, whose output is implementation-defined.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit mantissa.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, n). n must be positive; modulo bias is negligible for
  /// the small n used here (type choice, template choice).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trajeval
