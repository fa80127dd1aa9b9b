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

#include "reach/typecheck.hpp"

#include "reach/qualifiers.hpp"

namespace reach {

const char* mode_name(Mode m) { return m == Mode::Base ? "base" : "full"; }

std::optional<Mode> parse_mode(const std::string& s) {
  if (s == "base") return Mode::Base;
  if (s == "full") return Mode::Full;
  return std::nullopt;
}

const ElabNode& Elaborated::at(const Term& t) const {
  auto it = nodes.find(&t);
  if (it == nodes.end()) throw std::out_of_range("term node is not part of this elaboration");
  return it->second;
}

namespace {

using EnvPtr = std::shared_ptr<const TypeEnv>;

Name fresh_name(const Name& base, NameSet& used) {
  for (int i = 1;; ++i) {
    Name n = base + "_" + std::to_string(i);
    if (!used.count(n)) {
      used.insert(n);
      return n;
    }
  }
}

TermPtr rename_term(const TermPtr& t, const Name& from, const Name& to) {
  if (const auto* v = t->as<Var>()) return v->name == from ? mk::var(to, t->span()) : t;
  if (const auto* a = t->as<Abs>()) {
    Qualifier caps = a->captures;
    if (caps.vars.erase(from)) caps.vars.insert(to);
    TermPtr body = a->param == from ? a->body : rename_term(a->body, from, to);
    return mk::abs(caps, a->param, rename_free(a->param_type, from, to), body, t->span());
  }
  std::vector<TermPtr> kids;
  for (const auto& c : t->children()) kids.push_back(rename_term(c, from, to));
  return kids.empty() ? t : with_children(*t, kids);
}

// Rebuilds the term with fresh node addresses and renames binders that
// would shadow a name already in scope.
TermPtr uniquify(const TermPtr& t, NameSet& scope, NameSet& used) {
  if (const auto* a = t->as<Abs>()) {
    Name x = a->param;
    TermPtr body = a->body;
    if (scope.count(x)) {
      Name y = fresh_name(x, used);
      body = rename_term(body, x, y);
      x = y;
    }
    scope.insert(x);
    body = uniquify(body, scope, used);
    scope.erase(x);
    return mk::abs(a->captures, x, a->param_type, body, t->span());
  }
  std::vector<TermPtr> kids;
  for (const auto& c : t->children()) kids.push_back(uniquify(c, scope, used));
  return with_children(*t, kids);
}

Effect effect_union(const Effect& a, const Effect& b) {
  return Effect{set_union(a.vars, b.vars), a.self_ref || b.self_ref};
}

std::string at_span(Span s) {
  if (s.line == 0) return "";
  return " at " + std::to_string(s.line) + ":" + std::to_string(s.column);
}

bool pretype_subtype(const TypeEnv& env, const Pretype& a, const Pretype& b,
                     const Qualifier& self, NameSet& used);

class Checker {
 public:
  Checker(Mode mode, Elaborated& out, NameSet& used) : mode_(mode), out_(out), used_(used) {}

  Typing check(const TermPtr& t, const EnvPtr& env) {
    return std::visit([&](const auto& n) { return visit(n, t, env); }, t->node());
  }

  // Grows the observation from fv(t) until t checks.
  Typing check_least(const TermPtr& t, const EnvPtr& env, NameSet& phi) {
    const NameSet& outer = env->observation();
    phi = set_intersection(free_vars(*t), outer);
    for (;;) {
      try {
        return check(t, std::make_shared<const TypeEnv>(env->observe(phi)));
      } catch (const TypeError& e) {
        NameSet add = set_difference(set_intersection(e.needed, outer), phi);
        if (add.empty()) throw;
        phi.insert(add.begin(), add.end());
      }
    }
  }

 private:
  [[noreturn]] void fail(const std::string& code, const std::string& rule,
                         const std::string& msg, Span span,
                         std::vector<std::pair<std::string, NameSet>> witnesses = {},
                         NameSet needed = {}) {
    TypeError e(code, rule, msg + at_span(span), span);
    e.witnesses = std::move(witnesses);
    e.needed = std::move(needed);
    throw e;
  }

  void require_observed(const NameSet& names, const TypeEnv& env, const std::string& rule,
                        const std::string& what, Span span) {
    NameSet missing = set_difference(names, env.observation());
    if (missing.empty()) return;
    for (const auto& y : missing) {
      if (!env.contains(y)) {
        fail("unbound-variable", rule, what + " names unbound variable " + y, span);
      }
    }
    fail("unobserved-variable", rule, what + " names " + to_string(missing) +
                                          " outside the observation " +
                                          to_string(env.observation()),
         span, {{"observation", env.observation()}, {"missing", missing}}, missing);
  }

  Typing record(const TermPtr& t, const EnvPtr& env, Typing ty, const std::string& rule,
                Qualifier referent = {}, std::optional<FunType> callee = std::nullopt) {
    if (mode_ == Mode::Base) ty.effect = Effect{};
    ElabNode n{ty, env->observation(), env, rule, std::move(referent), std::move(callee)};
    out_.nodes[t.get()] = std::move(n);
    ++out_.rule_hits[rule];
    return ty;
  }

  void hit(const std::string& rule) { ++out_.rule_hits[rule]; }

  void check_annotation(const QualifiedType& ty, const TypeEnv& env, Span span) {
    for (const auto& y : free_vars(ty)) {
      if (!env.contains(y)) {
        fail("unbound-variable", "wf-type", "type " + to_string(ty) + " names unbound " + y, span);
      }
    }
    if (mode_ == Mode::Base) check_base_shape(ty, span);
  }

  void check_base_shape(const QualifiedType& ty, Span span) {
    if (const auto* r = ty.pretype->as_ref()) {
      if (!r->inner.qual.empty()) {
        fail("base-mode-restriction", "wf-type",
             "referent qualifier " + to_string(r->inner.qual) + " must be empty in base mode",
             span);
      }
      check_base_shape(r->inner, span);
    }
    if (const auto* f = ty.pretype->as_fun()) {
      if (!f->latent.empty()) {
        fail("base-mode-restriction", "wf-type",
             "latent effect " + to_string(f->latent) + " must be empty in base mode", span);
      }
      check_base_shape(f->domain, span);
      check_base_shape(f->codomain, span);
    }
  }

  Typing visit(const Const&, const TermPtr& t, const EnvPtr& env) {
    return record(t, env, Typing{mk::qt(Pretype::boolean()), {}}, "t-cst");
  }

  Typing visit(const Var& v, const TermPtr& t, const EnvPtr& env) {
    const QualifiedType* b = env->lookup(v.name);
    if (!b) fail("unbound-variable", "t-var", "variable " + v.name + " is unbound", t->span());
    if (!env->observation().count(v.name)) {
      fail("unobserved-variable", "t-var",
           "variable " + v.name + " is outside the observation " +
               to_string(env->observation()),
           t->span(), {{"observation", env->observation()}}, {v.name});
    }
    return record(t, env, Typing{mk::qt(b->pretype, Qualifier{{v.name}}), {}}, "t-var");
  }

  Typing visit(const Abs& a, const TermPtr& t, const EnvPtr& env) {
    const NameSet& q = a.captures.vars;
    require_observed(q, *env, "t-abs", "abstraction qualifier " + to_string(a.captures),
                     t->span());
    check_annotation(a.param_type, *env, t->span());
    const Qualifier& s = a.param_type.qual;
    if (!subset(s.vars, q)) {
      fail("domain-not-captured", "t-abs",
           "parameter qualifier " + to_string(s) + " is not within the abstraction qualifier " +
               to_string(a.captures),
           t->span(), {{"parameter", s.vars}, {"captures", q}});
    }
    if (env->contains(a.param)) {
      fail("shadowing", "t-abs", "parameter " + a.param + " is already bound", t->span());
    }
    Qualifier binding{set_intersection(env->observation(),
                                       set_union(s.vars, s.self_ref ? q : NameSet{})),
                      s.fresh, false};
    NameSet inner_phi = q;
    inner_phi.insert(a.param);
    auto inner = std::make_shared<const TypeEnv>(
        env->extend(a.param, mk::qt(a.param_type.pretype, binding)).observe(inner_phi));
    Typing body = check(a.body, inner);
    if (free_vars(*body.type.pretype).count(a.param)) {
      fail("codomain-mentions-param", "t-abs",
           "result pretype " + to_string(*body.type.pretype) + " mentions parameter " + a.param,
           t->span());
    }
    Effect latent = mode_ == Mode::Base ? Effect{} : body.effect;
    PretypePtr fn = Pretype::fun(a.param, a.param_type, latent, body.type);
    return record(t, env, Typing{mk::qt(fn, a.captures), {}}, "t-abs");
  }

  Typing visit(const App& ap, const TermPtr& t, const EnvPtr& env) {
    Typing f = check(ap.fn, env);
    Typing x = check(ap.arg, env);
    const FunType* fp = f.type.pretype->as_fun();
    if (!fp) {
      fail("not-a-function", "t-app",
           "applied term has type " + to_string(f.type) + ", not a function", t->span());
    }
    FunType F = *fp;
    const NameSet& phi = env->observation();
    // Keep the parameter apart from every name in play.
    if (env->contains(F.param) || f.type.qual.contains(F.param) || x.type.qual.contains(F.param)) {
      Name fresh = fresh_name(F.param, used_);
      F.codomain = rename_free(F.codomain, F.param, fresh);
      if (F.latent.vars.erase(F.param)) F.latent.vars.insert(fresh);
      F.param = fresh;
    }
    const Qualifier& s = F.domain.qual;
    const std::string rule = s.fresh ? "t-app-◇" : "t-app";

    bool pretype_ok = mode_ == Mode::Full
                          ? alpha_equal(*x.type.pretype, *F.domain.pretype)
                          : pretype_subtype(*env, *x.type.pretype, *F.domain.pretype,
                                            x.type.qual, used_);
    if (!pretype_ok) {
      fail("argument-type-mismatch", rule,
           "argument pretype " + to_string(*x.type.pretype) + " does not match parameter " +
               to_string(*F.domain.pretype),
           t->span());
    }
    require_observed(s.vars, *env, rule, "parameter qualifier " + to_string(s), t->span());

    Qualifier p = f.type.qual;
    Qualifier o = x.type.qual;
    if (!s.fresh) {
      if (o.fresh) {
        fail("fresh-argument", rule,
             "fresh argument passed where the parameter qualifier " + to_string(s) +
                 " is not fresh",
             t->span(), {{"argument", o.vars}, {"parameter", s.vars}});
      }
      Upcast up = upcast_within(*env, phi, o.vars, s.vars);
      if (!up.ok) {
        fail("argument-qualifier", rule,
             "argument qualifier " + to_string(o) + " does not widen into parameter qualifier " +
                 to_string(s),
             t->span(), {{"argument", saturate(*env, o.vars)}, {"parameter", s.vars}}, up.needed);
      }
      if (up.result != o.vars) hit("t-sub-var");
      o.vars = up.result;
    } else if (!overlap_bounded(*env, p, o, s)) {
      Qualifier p2{root_form(*env, phi, p.vars), p.fresh, false};
      Qualifier o2{root_form(*env, phi, o.vars), o.fresh, false};
      if (!overlap_bounded(*env, p2, o2, s)) {
        NameSet sp = saturate(*env, p.vars), so = saturate(*env, o.vars);
        NameSet bad = set_difference(set_intersection(sp, so), s.vars);
        fail("overlap", rule,
             "function and argument share " + to_string(bad) +
                 ", which the parameter qualifier " + to_string(s) + " does not permit",
             t->span(),
             {{"qsat function", sp}, {"qsat argument", so}, {"overlap", bad}, {"parameter", s.vars}});
      }
      hit("t-sub-var");
      p = p2;
      o = o2;
    }

    require_observed(set_difference(F.codomain.qual.vars, {F.param}), *env, rule,
                     "result qualifier " + to_string(F.codomain.qual), t->span());
    Effect eff;
    if (mode_ == Mode::Full) {
      NameSet lat = set_difference(F.latent.vars, {F.param});
      require_observed(lat, *env, rule, "latent effect " + to_string(F.latent), t->span());
      eff = effect_union(effect_union(f.effect, x.effect),
                         subst_effect(F.latent, F.param, o.vars, p.vars));
    }
    Qualifier r = subst_app(F.codomain.qual, F.param, o, p);
    return record(t, env, Typing{mk::qt(F.codomain.pretype, r), eff}, rule, {}, F);
  }

  Typing visit(const RefAlloc& ra, const TermPtr& t, const EnvPtr& env) {
    Typing v = check(ra.init, env);
    if (v.type.qual.fresh) {
      fail("fresh-in-store", "t-ref",
           "cannot store a fresh value of type " + to_string(v.type) + " in a reference",
           t->span());
    }
    Qualifier referent;
    if (mode_ == Mode::Base) {
      Upcast up = upcast_within(*env, env->observation(), v.type.qual.vars, {});
      if (!up.ok) {
        fail("store-reaches", "t-ref",
             "stored value reaches " + to_string(saturate(*env, v.type.qual.vars)) +
                 " but base-mode references hold values reaching nothing",
             t->span(), {{"qsat value", saturate(*env, v.type.qual.vars)}}, up.needed);
      }
      if (!v.type.qual.vars.empty()) hit("t-sub-var");
    } else {
      // Names that widen to nothing reach no location; leaving them out keeps
      // the cell type as precise and matches what base mode would infer.
      for (const auto& y : v.type.qual.vars) {
        if (!upcast_within(*env, env->observation(), {y}, {}).ok) referent.vars.insert(y);
      }
      if (referent.vars != v.type.qual.vars) hit("t-sub-var");
    }
    PretypePtr cell = Pretype::ref(mk::qt(v.type.pretype, referent));
    Qualifier q = referent;
    q.fresh = true;
    return record(t, env, Typing{mk::qt(cell, q), v.effect}, "t-ref", referent);
  }

  Typing visit(const Deref& d, const TermPtr& t, const EnvPtr& env) {
    Typing r = check(d.target, env);
    const RefType* rt = r.type.pretype->as_ref();
    if (!rt) {
      fail("not-a-reference", "t-!",
           "dereferenced term has type " + to_string(r.type) + ", not a reference", t->span());
    }
    Qualifier q;
    if (mode_ == Mode::Full) {
      q = rt->inner.qual;
      require_observed(q.vars, *env, "t-!", "referent qualifier " + to_string(q), t->span());
    }
    return record(t, env, Typing{mk::qt(rt->inner.pretype, q), r.effect}, "t-!");
  }

  Typing visit(const Assign& as, const TermPtr& t, const EnvPtr& env) {
    Typing l = check(as.target, env);
    Typing v = check(as.value, env);
    const RefType* rt = l.type.pretype->as_ref();
    if (!rt) {
      fail("not-a-reference", "t-:=",
           "assignment target has type " + to_string(l.type) + ", not a reference", t->span());
    }
    bool pretype_ok = mode_ == Mode::Full
                          ? alpha_equal(*v.type.pretype, *rt->inner.pretype)
                          : pretype_subtype(*env, *v.type.pretype, *rt->inner.pretype,
                                            v.type.qual, used_);
    if (!pretype_ok) {
      fail("value-type-mismatch", "t-:=",
           "assigned pretype " + to_string(*v.type.pretype) + " does not match cell pretype " +
               to_string(*rt->inner.pretype),
           t->span());
    }
    if (v.type.qual.fresh) {
      fail("fresh-in-store", "t-:=",
           "cannot store a fresh value of type " + to_string(v.type) + " in a reference",
           t->span());
    }
    NameSet target = mode_ == Mode::Full ? rt->inner.qual.vars : NameSet{};
    require_observed(target, *env, "t-:=", "referent qualifier " + to_string(rt->inner.qual),
                     t->span());
    Upcast up = upcast_within(*env, env->observation(), v.type.qual.vars, target);
    if (!up.ok) {
      fail("store-reaches", "t-:=",
           "assigned value reaches " + to_string(saturate(*env, v.type.qual.vars)) +
               " but the cell admits " + to_string(target),
           t->span(), {{"qsat value", saturate(*env, v.type.qual.vars)}, {"referent", target}},
           up.needed);
    }
    if (up.result != v.type.qual.vars) hit("t-sub-var");
    Effect eff = effect_union(effect_union(l.effect, v.effect), Effect{l.type.qual.vars});
    return record(t, env, Typing{mk::qt(Pretype::boolean()), eff}, "t-:=");
  }

  Typing visit(const Seq& sq, const TermPtr& t, const EnvPtr& env) {
    NameSet phi1, phi2;
    Typing a = check_least(sq.first, env, phi1);
    Typing b = check_least(sq.second, env, phi2);
    for (const Typing* c : {&a, &b}) {
      if (!c->type.pretype->is_bool()) {
        fail("not-a-bool", "t-seq",
             "sequence component has type " + to_string(c->type) + ", not Bool", t->span());
      }
      if (c->type.qual.fresh) {
        out_.warnings.push_back("sequence component discards a fresh value" + at_span(t->span()));
      }
    }
    return record(t, env, Typing{mk::qt(Pretype::boolean()), effect_union(a.effect, b.effect)},
                  "t-seq");
  }

  Mode mode_;
  Elaborated& out_;
  NameSet& used_;
};

bool pretype_subtype(const TypeEnv& env, const Pretype& a, const Pretype& b,
                     const Qualifier& self, NameSet& used) {
  if (a.is_bool() || b.is_bool()) return a.is_bool() && b.is_bool();
  if (const auto* ra = a.as_ref()) {
    const auto* rb = b.as_ref();
    if (!rb) return false;
    const QualifiedType &x = ra->inner, &y = rb->inner;
    return pretype_subtype(env, *x.pretype, *y.pretype, x.qual, used) &&
           pretype_subtype(env, *y.pretype, *x.pretype, y.qual, used) &&
           subqual(env, x.qual, y.qual) && subqual(env, y.qual, x.qual);
  }
  const auto* fa = a.as_fun();
  const auto* fb = b.as_fun();
  if (!fa || !fb) return false;
  const Qualifier& s1 = fa->domain.qual;
  const Qualifier& s2 = fb->domain.qual;
  if (s1.self_ref && !s1.fresh) return false;
  bool dom_q = (s1.fresh && s1.self_ref) || subqual(env, s2, s1, self);
  if (!dom_q) return false;
  if (!pretype_subtype(env, *fb->domain.pretype, *fa->domain.pretype, s2, used)) return false;

  NameSet avoid = env.names();
  avoid.insert(used.begin(), used.end());
  Name z = fa->param;
  if (avoid.count(z) || z != fb->param) z = fresh_name("z", used);
  QualifiedType c1 = rename_free(fa->codomain, fa->param, z);
  QualifiedType c2 = rename_free(fb->codomain, fb->param, z);
  Qualifier bind{set_union(s2.vars, s2.self_ref ? self.vars : NameSet{}), s2.fresh, false};
  TypeEnv inner;
  try {
    inner = env.extend(z, mk::qt(fb->domain.pretype, bind));
  } catch (const InvariantError&) {
    return false;
  }
  NameSet l1 = fa->latent.vars, l2 = fb->latent.vars;
  if (l1.erase(fa->param)) l1.insert(z);
  if (l2.erase(fb->param)) l2.insert(z);
  if (!subset(l1, l2) || (fa->latent.self_ref && !fb->latent.self_ref)) return false;
  return pretype_subtype(inner, *c1.pretype, *c2.pretype, c1.qual, used) &&
         subqual(inner, c1.qual, c2.qual, self);
}

}  // namespace

Elaborated typecheck(const TypeEnv& env, const TermPtr& t, Mode mode) {
  env.validate();
  Elaborated out;
  out.mode = mode;
  out.env = env;
  NameSet used = all_names(*t);
  NameSet scope = env.names();
  used.insert(scope.begin(), scope.end());
  out.term = uniquify(t, scope, used);
  Checker c(mode, out, used);
  out.typing = c.check(out.term, std::make_shared<const TypeEnv>(env));
  return out;
}

std::variant<Elaborated, TypeError> try_typecheck(const TypeEnv& env, const TermPtr& t,
                                                  Mode mode) {
  try {
    return typecheck(env, t, mode);
  } catch (const TypeError& e) {
    return e;
  }
}

NameSet least_observation(const TypeEnv& env, const TermPtr& t, Mode mode) {
  env.validate();
  Elaborated scratch;
  NameSet used = all_names(*t);
  NameSet scope = env.names();
  used.insert(scope.begin(), scope.end());
  TermPtr copy = uniquify(t, scope, used);
  Checker c(mode, scratch, used);
  NameSet phi;
  c.check_least(copy, std::make_shared<const TypeEnv>(env), phi);
  return phi;
}

bool check_subtype(const TypeEnv& env, const QualifiedType& a, const QualifiedType& b) {
  NameSet used = env.names();
  return pretype_subtype(env, *a.pretype, *b.pretype, a.qual, used) && subqual(env, a.qual, b.qual);
}

}  // namespace reach
