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

#include <optional>
#include <string>
#include <string_view>

namespace trajeval {

/// The four environmental noise types.
enum class NoiseKind { Repeat, Unexecuted, Delay, PopUp };

std::string_view to_string(NoiseKind kind);
std::optional<NoiseKind> parse_noise_kind(std::string_view text);

/// Recorded on the step whose action triggered the injection.
struct NoiseTag {
  NoiseKind kind = NoiseKind::Repeat;
  std::optional<std::string> page_id;  // template page, Delay/PopUp only

  friend bool operator==(const NoiseTag&, const NoiseTag&) = default;
};

}  // namespace trajeval
