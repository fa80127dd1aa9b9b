/*
 * Copyright 2026 The Reach Authors
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

#ifndef REACH_TOOLS_REPORT_HPP_
#define REACH_TOOLS_REPORT_HPP_

#include <string>

#include "json.hpp"
#include "reach/harness.hpp"
#include "reach/monitor.hpp"
#include "reach/rewrite.hpp"
#include "reach/typecheck.hpp"

namespace reach::report {

inline constexpr const char* kSchema = "reach.v1";

nlohmann::json record(const std::string& command);
nlohmann::json names(const NameSet& s);
nlohmann::json locations(const LocSet& s);
nlohmann::json span(Span s);
nlohmann::json typing(const Typing& t);
nlohmann::json type_error(const TypeError& e);
nlohmann::json violation(const ViolationReport& v);
nlohmann::json witnesses(const Witnesses& w);

// Human-readable diagnostic block for a type error.
std::string describe(const TypeError& e);

}  // namespace reach::report

#endif  // REACH_TOOLS_REPORT_HPP_
