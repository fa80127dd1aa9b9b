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

#include "report.hpp"

namespace reach::report {

using nlohmann::json;

json record(const std::string& command) { return json{{"schema", kSchema}, {"command", command}}; }

json names(const NameSet& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

json locations(const LocSet& s) { return json(std::vector<Loc>(s.begin(), s.end())); }

json span(Span s) { return json{{"line", s.line}, {"column", s.column}}; }

json typing(const Typing& t) {
  return json{{"type", to_string(t.type)}, {"effect", to_string(t.effect)}};
}

json witnesses(const Witnesses& w) {
  json out = json::object();
  for (const auto& [k, v] : w) out[k] = names(v);
  return out;
}

json type_error(const TypeError& e) {
  return json{{"code", e.code()},
              {"rule", e.rule()},
              {"message", e.what()},
              {"span", span(e.span())},
              {"witnesses", witnesses(e.witnesses)}};
}

json violation(const ViolationReport& v) {
  return json{{"kind", violation_name(v.kind)}, {"message", v.message},
              {"node", v.node},                  {"span", span(v.span)},
              {"step", v.step},                  {"offending", locations(v.offending)},
              {"allowed", locations(v.allowed)}};
}

std::string describe(const TypeError& e) {
  std::string out = "error[" + e.code() + "] " + e.rule() + ": " + e.what() + "\n";
  for (const auto& [k, v] : e.witnesses) out += "  " + k + " = " + to_string(v) + "\n";
  return out;
}

}  // namespace reach::report
