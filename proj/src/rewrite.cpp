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

#include "reach/rewrite.hpp"

#include "reach/qualifiers.hpp"

namespace reach {

std::optional<RewriteRule> parse_rule(const std::string& s) {
  if (s == "reorder") return RewriteRule::Reorder;
  if (s == "beta") return RewriteRule::Beta;
  return std::nullopt;
}

namespace {

RewriteOutcome refuse(std::string reason, Witnesses w = {}) {
  RewriteOutcome out;
  out.reason = std::move(reason);
  out.witnesses = std::move(w);
  return out;
}

}  // namespace

ReorderCheck can_reorder(const TypeEnv& env, const TermPtr& t1, const TermPtr& t2, Mode mode) {
  ReorderCheck out;
  try {
    out.phi1 = least_observation(env, t1, mode);
    out.phi2 = least_observation(env, t2, mode);
    out.eff1 = typecheck(env.observe(out.phi1), t1, mode).typing.effect;
    out.eff2 = typecheck(env.observe(out.phi2), t2, mode).typing.effect;
  } catch (const TypeError& e) {
    out.reason = std::string("component does not typecheck: ") + e.what();
    return out;
  }
  NameSet s1 = saturate(env, out.phi1);
  NameSet s2 = saturate(env, out.phi2);
  if (mode == Mode::Base) {
    NameSet both = set_intersection(s1, s2);
    if (!both.empty()) {
      out.reason = "qsat φ1 ∩ qsat φ2 ≠ ∅";
      out.witnesses = {{"qsat φ1", s1}, {"qsat φ2", s2}, {"overlap", both}};
      return out;
    }
  } else {
    NameSet e1 = saturate(env, out.eff1.vars);
    NameSet e2 = saturate(env, out.eff2.vars);
    NameSet a = set_intersection(s1, e2);
    if (!a.empty()) {
      out.reason = "qsat φ1 ∩ qsat ε2 ≠ ∅";
      out.witnesses = {{"qsat φ1", s1}, {"qsat ε2", e2}, {"overlap", a}};
      return out;
    }
    NameSet b = set_intersection(s2, e1);
    if (!b.empty()) {
      out.reason = "qsat φ2 ∩ qsat ε1 ≠ ∅";
      out.witnesses = {{"qsat φ2", s2}, {"qsat ε1", e1}, {"overlap", b}};
      return out;
    }
  }
  out.ok = true;
  return out;
}

RewriteOutcome reorder(const TypeEnv& env, const TermPtr& t, Mode mode) {
  const Seq* sq = t->as<Seq>();
  if (!sq) return refuse("reorder applies only to a sequence");
  try {
    typecheck(env, t, mode);
  } catch (const TypeError& e) {
    return refuse(std::string("sequence does not typecheck: ") + e.what());
  }
  ReorderCheck c = can_reorder(env, sq->first, sq->second, mode);
  if (!c.ok) return refuse(c.reason, c.witnesses);
  RewriteOutcome out;
  out.term = mk::seq(sq->second, sq->first, t->span());
  Effect eff{set_union(c.eff1.vars, c.eff2.vars), false};
  if (mode == Mode::Base) eff = {};
  out.typing = Typing{mk::qt(Pretype::boolean()), eff};
  try {
    Typing again = typecheck(env, out.term, mode).typing;
    if (!again.type.pretype->is_bool() || !again.type.qual.empty() ||
        !subset(again.effect.vars, eff.vars)) {
      return refuse("re-check of the swapped sequence produced " + to_string(again.type));
    }
  } catch (const TypeError& e) {
    return refuse(std::string("re-check of the swapped sequence failed: ") + e.what());
  }
  out.ok = true;
  return out;
}

TermPtr subst_term(const TermPtr& body, const Name& x, const TermPtr& arg) {
  if (const auto* v = body->as<Var>()) return v->name == x ? arg : body;
  if (const auto* a = body->as<Abs>()) {
    if (a->param == x) return body;
    Qualifier caps = a->captures;
    caps.vars.erase(x);
    Name p = a->param;
    TermPtr inner = a->body;
    NameSet fa = free_vars(*arg);
    if (fa.count(p)) {
      // Only reachable for open arguments.
      NameSet avoid = all_names(*inner);
      avoid.insert(fa.begin(), fa.end());
      int i = 1;
      Name q;
      do {
        q = p + "_" + std::to_string(i++);
      } while (avoid.count(q));
      inner = subst_term(inner, p, mk::var(q));
      p = q;
    }
    return mk::abs(caps, p, erase_free(a->param_type, x), subst_term(inner, x, arg), body->span());
  }
  std::vector<TermPtr> kids;
  for (const auto& c : body->children()) kids.push_back(subst_term(c, x, arg));
  return kids.empty() ? body : with_children(*body, kids);
}

RewriteOutcome beta_inline(const TypeEnv& env, const TermPtr& t, Mode mode) {
  const App* ap = t->as<App>();
  const Abs* fn = ap ? ap->fn->as<Abs>() : nullptr;
  if (!fn) return refuse("beta applies only to an abstraction applied to an argument");
  if (!free_vars(*ap->arg).empty()) {
    return refuse("argument is not closed", {{"free variables", free_vars(*ap->arg)}});
  }
  Typing arg, lam;
  try {
    typecheck(env, t, mode);
    arg = typecheck(env.observe({}), ap->arg, mode).typing;
    lam = typecheck(env, ap->fn, mode).typing;
  } catch (const TypeError& e) {
    return refuse(std::string("redex does not typecheck: ") + e.what());
  }
  if (!arg.type.qual.empty()) {
    return refuse("argument qualifier " + to_string(arg.type.qual) + " is not empty");
  }
  if (!arg.effect.empty()) return refuse("argument effect " + to_string(arg.effect) + " is not empty");

  const FunType& F = *lam.type.pretype->as_fun();
  const Qualifier& q = lam.type.qual;
  RewriteOutcome out;
  out.typing.type = mk::qt(F.codomain.pretype, subst_app(F.codomain.qual, F.param, {}, q));
  out.typing.effect = mode == Mode::Base ? Effect{} : subst_effect(F.latent, F.param, {}, q.vars);
  out.term = subst_term(fn->body, fn->param, ap->arg);
  try {
    Elaborated again = typecheck(env, out.term, mode);
    const Typing& g = again.typing;
    bool pre = alpha_equal(*g.type.pretype, *out.typing.type.pretype);
    bool qual = (!g.type.qual.fresh || out.typing.type.qual.fresh) &&
                upcast_within(env, env.observation(), g.type.qual.vars,
                              out.typing.type.qual.vars)
                    .ok;
    bool eff = subset(g.effect.vars, out.typing.effect.vars);
    if (!pre || !qual || !eff) {
      return refuse("re-check of the inlined body produced " + to_string(g.type) + " / " +
                    to_string(g.effect));
    }
  } catch (const TypeError& e) {
    return refuse(std::string("re-check of the inlined body failed: ") + e.what());
  }
  out.ok = true;
  return out;
}

RewriteOutcome rewrite_at(const TypeEnv& env, const TermPtr& program, RewriteRule rule,
                          const TermPath& path, Mode mode) {
  Elaborated elab;
  try {
    elab = typecheck(env, program, mode);
  } catch (const TypeError& e) {
    return refuse(std::string("program does not typecheck: ") + e.what());
  }
  TermPtr target;
  try {
    target = subterm_at(elab.term, path);
  } catch (const std::out_of_range& e) {
    return refuse(e.what());
  }
  const ElabNode& node = elab.at(target);
  RewriteOutcome local =
      rule == RewriteRule::Reorder ? reorder(*node.env, target, mode) : beta_inline(*node.env, target, mode);
  if (!local.ok) return local;
  RewriteOutcome out = local;
  out.term = replace_at(elab.term, path, local.term);
  try {
    out.typing = typecheck(env, out.term, mode).typing;
  } catch (const TypeError& e) {
    return refuse(std::string("rewritten program does not typecheck: ") + e.what());
  }
  return out;
}

}  // namespace reach
