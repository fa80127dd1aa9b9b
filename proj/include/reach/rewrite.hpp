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

#ifndef REACH_REWRITE_HPP_
#define REACH_REWRITE_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reach/typecheck.hpp"

namespace reach {

enum class RewriteRule { Reorder, Beta };
std::optional<RewriteRule> parse_rule(const std::string& s);

using Witnesses = std::vector<std::pair<std::string, NameSet>>;

struct ReorderCheck {
  bool ok = false;
  std::string reason;  // names the failing side condition when !ok
  Witnesses witnesses;
  NameSet phi1, phi2;
  Effect eff1, eff2;
};

struct RewriteOutcome {
  bool ok = false;
  TermPtr term;   // rewritten term when ok
  Typing typing;  // the type and effect the rule guarantees
  std::string reason;
  Witnesses witnesses;
};

// Side condition for swapping `t1; t2`. Each side is observed at the least
// observation it needs within env.observation().
ReorderCheck can_reorder(const TypeEnv& env, const TermPtr& t1, const TermPtr& t2, Mode mode);
RewriteOutcome reorder(const TypeEnv& env, const TermPtr& seq, Mode mode);

// Capture-avoiding body[arg/x] for a closed `arg`. Occurrences of x in
// annotations are dropped, since a closed argument reaches no variable.
TermPtr subst_term(const TermPtr& body, const Name& x, const TermPtr& arg);
RewriteOutcome beta_inline(const TypeEnv& env, const TermPtr& app, Mode mode);

// Applies `rule` at `path` inside a whole program checked under `env`.
// The returned term is the elaborated program with the subterm replaced.
RewriteOutcome rewrite_at(const TypeEnv& env, const TermPtr& program, RewriteRule rule,
                          const TermPath& path, Mode mode);

}  // namespace reach

#endif  // REACH_REWRITE_HPP_
