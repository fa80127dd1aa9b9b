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

#ifndef REACH_HARNESS_HPP_
#define REACH_HARNESS_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "reach/eval.hpp"
#include "reach/rewrite.hpp"
#include "reach/typecheck.hpp"

namespace reach {

struct GenConfig {
  std::uint64_t seed = 0;
  int max_depth = 8;  // bound on the depth of the generated term
  Mode mode = Mode::Full;
};

struct GenStats {
  std::map<std::string, std::size_t> forms;      // generator productions used
  std::map<std::string, std::size_t> rule_hits;  // typing rules in accepted output
  std::size_t fallbacks = 0;                     // whole-program fallbacks to `true`
  std::size_t programs = 0;
};

// A closed Bool program that typechecks in `cfg.mode` under the empty
// environment. Deterministic in `cfg`.
TermPtr generate(const GenConfig& cfg, GenStats* stats = nullptr);

// A program with a sequence at `path` whose components share a scope of
// references, aliases and effectful functions.
struct RewriteCase {
  TermPtr program;
  TermPath path;
};
RewriteCase generate_reorder_case(const GenConfig& cfg);
// A program with a beta-redex at `path` whose argument is closed and pure.
RewriteCase generate_beta_case(const GenConfig& cfg);

enum class DiffVerdict { Equal, Unequal, Inconclusive };
const char* verdict_name(DiffVerdict v);

struct DiffResult {
  DiffVerdict verdict = DiffVerdict::Inconclusive;
  std::string left;   // printed value or outcome
  std::string right;
};

// Runs both closed programs from an empty store.
DiffResult difftest(const TermPtr& a, const TermPtr& b, std::size_t fuel = kDefaultFuel);

}  // namespace reach

#endif  // REACH_HARNESS_HPP_
