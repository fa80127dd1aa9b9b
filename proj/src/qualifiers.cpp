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

#include "reach/qualifiers.hpp"

#include <algorithm>
#include <iterator>

namespace reach {

NameSet saturate(const TypeEnv& env, const NameSet& names) {
  NameSet out;
  std::vector<Name> work(names.begin(), names.end());
  while (!work.empty()) {
    Name x = work.back();
    work.pop_back();
    if (!out.insert(x).second) continue;
    const QualifiedType* t = env.lookup(x);
    if (!t) throw InvariantError("wf-env", "saturation reached unbound variable " + x);
    for (const auto& y : t->qual.vars) {
      if (!out.count(y)) work.push_back(y);
    }
  }
  return out;
}

NameSet set_union(const NameSet& a, const NameSet& b) {
  NameSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

NameSet set_intersection(const NameSet& a, const NameSet& b) {
  NameSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

NameSet set_difference(const NameSet& a, const NameSet& b) {
  NameSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool subset(const NameSet& a, const NameSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Qualifier qunion(const Qualifier& a, const Qualifier& b) {
  return Qualifier{set_union(a.vars, b.vars), a.fresh || b.fresh, a.self_ref || b.self_ref};
}

Qualifier cond_union(const Qualifier& p, bool cond, const Qualifier& q) {
  return cond ? qunion(p, q) : p;
}

Qualifier subst_var(const Qualifier& r, const Name& x, const Qualifier& p) {
  if (!r.contains(x)) return r;
  Qualifier out = r;
  out.vars.erase(x);
  return qunion(out, p);
}

Qualifier subst_self(const Qualifier& r, const Qualifier& q) {
  if (!r.self_ref) return r;
  Qualifier out = r;
  out.self_ref = false;
  return qunion(out, q);
}

Qualifier subst_app(const Qualifier& r, const Name& x, const Qualifier& o, const Qualifier& p) {
  Qualifier out = r;
  out.vars.erase(x);
  out.self_ref = false;
  if (r.contains(x)) out = qunion(out, o);
  if (r.self_ref) out = qunion(out, p);
  return out;
}

Effect subst_effect(const Effect& e, const Name& x, const NameSet& o, const NameSet& p) {
  Effect out;
  out.vars = e.vars;
  out.vars.erase(x);
  if (e.mentions(x)) out.vars.insert(o.begin(), o.end());
  if (e.self_ref) out.vars.insert(p.begin(), p.end());
  return out;
}

bool separate(const TypeEnv& env, const NameSet& a, const NameSet& b) {
  return set_intersection(saturate(env, a), saturate(env, b)).empty();
}

bool overlap_bounded(const TypeEnv& env, const Qualifier& p, const Qualifier& o,
                     const Qualifier& s) {
  if (s.self_ref) return true;
  return subset(set_intersection(saturate(env, p.vars), saturate(env, o.vars)), s.vars);
}

namespace {

// Each name is either kept in the target or rewritten along its binding.
// Acyclic environments make the recursion terminate; `visiting` guards
// against malformed input.
bool reduces(const TypeEnv& env, const Name& y, const Qualifier& p2,
             const std::optional<Qualifier>& self_bound, NameSet& visiting) {
  if (p2.contains(y)) return true;
  if (p2.self_ref && self_bound) {
    NameSet guard;
    if (reduces(env, y, *self_bound, std::nullopt, guard)) return true;
  }
  const QualifiedType* t = env.lookup(y);
  if (!t || visiting.count(y)) return false;
  if (t->qual.fresh && !p2.fresh) return false;
  visiting.insert(y);
  bool ok = true;
  for (const auto& z : t->qual.vars) {
    if (!reduces(env, z, p2, self_bound, visiting)) {
      ok = false;
      break;
    }
  }
  visiting.erase(y);
  return ok;
}

}  // namespace

bool subqual(const TypeEnv& env, const Qualifier& p1, const Qualifier& p2,
             const std::optional<Qualifier>& self_bound) {
  if (p1.fresh && !p2.fresh) return false;
  if (p1.self_ref && !p2.self_ref) return false;
  for (const auto& y : p1.vars) {
    NameSet visiting;
    if (!reduces(env, y, p2, self_bound, visiting)) return false;
  }
  return true;
}

namespace {

bool upcast_one(const TypeEnv& env, const NameSet& phi, const Name& y, const NameSet& target,
                NameSet& result, NameSet& needed, NameSet& visiting) {
  if (target.count(y)) {
    result.insert(y);
    return true;
  }
  const QualifiedType* t = env.lookup(y);
  if (!t || t->qual.fresh || visiting.count(y)) return false;
  NameSet missing = set_difference(t->qual.vars, phi);
  if (!missing.empty()) {
    needed.insert(missing.begin(), missing.end());
    return false;
  }
  visiting.insert(y);
  bool ok = true;
  for (const auto& z : t->qual.vars) {
    ok = upcast_one(env, phi, z, target, result, needed, visiting) && ok;
  }
  visiting.erase(y);
  return ok;
}

}  // namespace

Upcast upcast_within(const TypeEnv& env, const NameSet& phi, const NameSet& p,
                     const NameSet& target) {
  Upcast out{true, {}, {}};
  for (const auto& y : p) {
    NameSet visiting;
    if (!upcast_one(env, phi, y, target, out.result, out.needed, visiting)) out.ok = false;
  }
  if (out.ok) {
    out.needed.clear();
  } else {
    out.result.clear();
  }
  return out;
}

NameSet root_form(const TypeEnv& env, const NameSet& phi, const NameSet& p) {
  NameSet out;
  std::vector<Name> work(p.begin(), p.end());
  NameSet seen;
  while (!work.empty()) {
    Name y = work.back();
    work.pop_back();
    if (!seen.insert(y).second) continue;
    const QualifiedType* t = env.lookup(y);
    if (t && !t->qual.fresh && subset(t->qual.vars, phi)) {
      for (const auto& z : t->qual.vars) work.push_back(z);
    } else {
      out.insert(y);
    }
  }
  return out;
}

}  // namespace reach
