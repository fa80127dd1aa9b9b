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

#ifndef REACH_MONITOR_HPP_
#define REACH_MONITOR_HPP_

#include <set>
#include <string>
#include <vector>

#include "reach/eval.hpp"
#include "reach/typecheck.hpp"

namespace reach {

using LocSet = std::set<Loc>;
// Declared referent locations per cell, indexed like the store.
using StoreTyping = std::vector<LocSet>;

enum class ViolationKind {
  ResultReachability,
  Frame,
  EffectSafety,
  StoreWF,
  Acyclicity,
  TypingExtension,
};
const char* violation_name(ViolationKind k);

struct ViolationReport {
  ViolationKind kind;
  std::string message;
  std::string node;  // printed subterm, abbreviated
  Span span;
  std::size_t step = 0;
  LocSet offending;
  LocSet allowed;
};

struct MonitorOptions {
  std::size_t fuel = kDefaultFuel;
  bool call_boundary = false;
};

struct MonitorResult {
  EvalOutcome outcome;
  StoreTyping sigma;
  std::vector<ViolationReport> violations;
  LocSet modified;  // pre-existing cells written by the whole run
  std::size_t checks = 0;

  bool clean() const { return violations.empty(); }
};

// Locations a value reaches directly. A closure reaches what its qualifier
// names in its captured environment.
LocSet locs(const Value& v);
LocSet locs_of(const ValueEnv& env, const NameSet& names);
// Transitive closure of `ls` along the store typing.
LocSet sat_locs(const StoreTyping& sigma, const LocSet& ls);

// Runs the elaborated term and checks, at every node, that the result stays
// within its qualifier and that writes to older cells stay within its effect
// (base mode: within its observation). Cells are checked against their
// declared referents on every allocation and assignment.
MonitorResult monitored_eval(const Elaborated& elab, const ValueEnv& env, Store store,
                             StoreTyping sigma, const MonitorOptions& opts = {});

}  // namespace reach

#endif  // REACH_MONITOR_HPP_
