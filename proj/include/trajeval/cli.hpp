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

#include <string>
#include <vector>

namespace trajeval {

/// Entry point behind tools/main.cpp, testable without exec.
/// Verbs: run, eval, reset, report, validate.
/// Exit codes: 0 completed batch (task failures included), 2 configuration
/// or corpus errors, 1 unexpected internal errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace trajeval
