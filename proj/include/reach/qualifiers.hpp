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

#ifndef REACH_QUALIFIERS_HPP_
#define REACH_QUALIFIERS_HPP_

#include <optional>

#include "reach/syntax.hpp"

namespace reach {

// Least fixpoint of x ~> y whenever x's binding qualifier names y.
NameSet saturate(const TypeEnv& env, const NameSet& names);

NameSet set_union(const NameSet& a, const NameSet& b);
NameSet set_intersection(const NameSet& a, const NameSet& b);
NameSet set_difference(const NameSet& a, const NameSet& b);
bool subset(const NameSet& a, const NameSet& b);

Qualifier qunion(const Qualifier& a, const Qualifier& b);
// p joined with q when `cond` holds.
Qualifier cond_union(const Qualifier& p, bool cond, const Qualifier& q);

// r[p/x]: replaces x, markers of p included.
Qualifier subst_var(const Qualifier& r, const Name& x, const Qualifier& p);
// r[q/self].
Qualifier subst_self(const Qualifier& r, const Qualifier& q);
// Simultaneous r[o/x, p/self].
Qualifier subst_app(const Qualifier& r, const Name& x, const Qualifier& o, const Qualifier& p);
// Effect instance e[o/x, p/self]; only variable parts are substituted.
Effect subst_effect(const Effect& e, const Name& x, const NameSet& o, const NameSet& p);

// Saturations do not intersect.
bool separate(const TypeEnv& env, const NameSet& a, const NameSet& b);
// Overlap between function qualifier p and argument qualifier o permitted by
// the parameter qualifier s.
bool overlap_bounded(const TypeEnv& env, const Qualifier& p, const Qualifier& o,
                     const Qualifier& s);

// Qualifier subtyping with q-sub, left-to-right q-var and q-trans. When
// `self_bound` is given, names below it may also be absorbed by self in p2.
bool subqual(const TypeEnv& env, const Qualifier& p1, const Qualifier& p2,
             const std::optional<Qualifier>& self_bound = std::nullopt);

// Whether p can be widened by t-sub and t-sub-var to a qualifier whose
// variables lie in `target`. A variable may be replaced by its binding
// qualifier only if that qualifier is observable and not fresh. On failure,
// `needed` lists unobserved names that would have unblocked a rewrite.
struct Upcast {
  bool ok = false;
  NameSet result;  // the widened variable set when ok
  NameSet needed;
};
Upcast upcast_within(const TypeEnv& env, const NameSet& phi, const NameSet& p,
                     const NameSet& target);

// Rewrites every variable as far as t-sub-var allows.
NameSet root_form(const TypeEnv& env, const NameSet& phi, const NameSet& p);

}  // namespace reach

#endif  // REACH_QUALIFIERS_HPP_
