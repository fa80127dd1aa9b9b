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

#include "reach/harness.hpp"

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "reach/qualifiers.hpp"

namespace reach {

const char* verdict_name(DiffVerdict v) {
  switch (v) {
    case DiffVerdict::Equal: return "Equal";
    case DiffVerdict::Unequal: return "Unequal";
    case DiffVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed ^ 0x5eed5eed5eedULL) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : g_() % n; }
  bool chance(int percent) { return below(100) < static_cast<std::size_t>(percent); }
  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 g_;
};

using Body = std::function<TermPtr(const TypeEnv&)>;

PretypePtr ref_bool() { return Pretype::ref(mk::qt(Pretype::boolean())); }

class Generator {
 public:
  Generator(const GenConfig& cfg, GenStats* stats)
      : rng_(cfg.seed), mode_(cfg.mode), max_depth_(cfg.max_depth), stats_(stats) {}

  TermPtr program() {
    TermPtr t = bool_term(TypeEnv{}, max_depth_);
    try {
      Elaborated e = typecheck(TypeEnv{}, t, mode_);
      if (stats_) {
        for (const auto& [rule, n] : e.rule_hits) stats_->rule_hits[rule] += n;
      }
    } catch (const TypeError&) {
      if (stats_) ++stats_->fallbacks;
      t = mk::constant(true);
    }
    if (stats_) ++stats_->programs;
    return t;
  }

  RewriteCase reorder_case() {
    for (;;) {
      std::vector<TermPath::value_type> path;
      TermPtr prog = prefix(TypeEnv{}, 1 + static_cast<int>(rng_.below(4)), path,
                            [&](const TypeEnv& env) {
                              return mk::seq(bool_term(env, 3 + rng_.below(2)),
                                             bool_term(env, 3 + rng_.below(2)));
                            });
      if (accepts_bool(TypeEnv{}, prog)) return RewriteCase{prog, path};
    }
  }

  RewriteCase beta_case() {
    for (;;) {
      std::vector<TermPath::value_type> path;
      TermPtr prog = prefix(TypeEnv{}, static_cast<int>(rng_.below(4)), path,
                            [&](const TypeEnv& env) { return redex(env); });
      if (accepts_bool(TypeEnv{}, prog)) return RewriteCase{prog, path};
    }
  }

 private:
  void note(const char* form) {
    if (stats_) ++stats_->forms[form];
  }

  std::optional<Typing> typing(const TypeEnv& env, const TermPtr& t) {
    try {
      return typecheck(env, t, mode_).typing;
    } catch (const TypeError&) {
      return std::nullopt;
    } catch (const InvariantError&) {
      return std::nullopt;
    }
  }

  bool accepts_bool(const TypeEnv& env, const TermPtr& t) {
    auto ty = typing(env, t);
    return ty && ty->type.pretype->is_bool();
  }

  Name fresh(const char* base) { return base + std::to_string(++counter_); }

  std::vector<Name> observed(const TypeEnv& env,
                             const std::function<bool(const QualifiedType&)>& pred) {
    std::vector<Name> out;
    for (const auto& x : env.observation()) {
      if (pred(*env.lookup(x))) out.push_back(x);
    }
    return out;
  }

  static bool is_bool(const QualifiedType& t) { return t.pretype->is_bool(); }
  static bool is_ref_bool(const QualifiedType& t) {
    const RefType* r = t.pretype->as_ref();
    return r && r->inner.pretype->is_bool();
  }
  static bool is_ref_bool_empty(const QualifiedType& t) {
    return is_ref_bool(t) && t.pretype->as_ref()->inner.qual.empty();
  }
  static bool is_ref_ref(const QualifiedType& t) {
    const RefType* r = t.pretype->as_ref();
    return r && is_ref_bool(r->inner);
  }
  static bool is_ref(const QualifiedType& t) { return t.pretype->as_ref() != nullptr; }
  static bool is_bool_fun(const QualifiedType& t) {
    const FunType* f = t.pretype->as_fun();
    return f && f->codomain.pretype->is_bool() &&
           (f->domain.pretype->is_bool() || is_ref_bool_empty(f->domain));
  }

  // Captured set for an abstraction: usually everything observable.
  NameSet captures(const TypeEnv& env, const NameSet& required) {
    NameSet out = required;
    bool all = rng_.chance(70);
    for (const auto& x : env.observation()) {
      if (all || rng_.chance(50)) out.insert(x);
    }
    return out;
  }

  // (app (lam caps (x: T^s) body) init), with the body built in the scope
  // the checker will use.
  TermPtr let(const TypeEnv& env, const Name& x, const QualifiedType& ann, const TermPtr& init,
              const NameSet& caps, const Body& body) {
    const Qualifier& s = ann.qual;
    Qualifier bind{set_intersection(env.observation(),
                                    set_union(s.vars, s.self_ref ? caps : NameSet{})),
                   s.fresh, false};
    NameSet phi = caps;
    phi.insert(x);
    TypeEnv inner = env.extend(x, mk::qt(ann.pretype, bind)).observe(phi);
    return mk::app(mk::abs(Qualifier{caps}, x, ann, body(inner)), init);
  }

  TermPtr bool_leaf(const TypeEnv& env) {
    auto vars = observed(env, is_bool);
    if (!vars.empty() && rng_.chance(40)) {
      note("var");
      return mk::var(rng_.pick(vars));
    }
    note("const");
    return mk::constant(rng_.chance(50));
  }

  TermPtr bool_term(const TypeEnv& env, int d) {
    if (d <= 1) return bool_leaf(env);
    for (int attempt = 0; attempt < 4; ++attempt) {
      TermPtr t = bool_form(env, d);
      if (t && accepts_bool(env, t)) return t;
    }
    return bool_leaf(env);
  }

  // Expression of pretype Ref Bool with depth at most d.
  TermPtr ref_bool_term(const TypeEnv& env, int d) {
    auto vars = observed(env, is_ref_bool);
    auto nested = observed(env, is_ref_ref);
    std::size_t roll = rng_.below(10);
    if (!vars.empty() && (roll < 6 || d < 2)) return mk::var(rng_.pick(vars));
    if (d >= 3 && !nested.empty() && roll < 8) {
      note("deref-nested");
      return mk::deref(mk::var(rng_.pick(nested)));
    }
    if (d >= 2) return mk::ref(bool_term(env, d - 1));
    return nullptr;
  }

  TermPtr bool_form(const TypeEnv& env, int d) {
    static const int weights[] = {14, 14, 12, 14, 6, 6, 10, 10, 8, 3};
    int total = 0;
    for (int w : weights) total += w;
    int roll = static_cast<int>(rng_.below(total));
    int k = 0;
    while (roll >= weights[k]) roll -= weights[k++];
    switch (k) {
      case 0: {
        note("seq");
        return mk::seq(bool_term(env, d - 1), bool_term(env, d - 1));
      }
      case 1: return assign(env, d);
      case 2: {
        TermPtr r = ref_bool_term(env, d - 1);
        if (!r) return nullptr;
        note("deref");
        return mk::deref(r);
      }
      case 3: {
        if (d < 3) return nullptr;
        note("let-ref");
        Name x = fresh("r");
        return let(env, x, mk::qt(ref_bool(), Qualifier::fresh_only()),
                   mk::ref(bool_term(env, d - 2)), captures(env, {}),
                   [&](const TypeEnv& in) { return bool_term(in, d - 2); });
      }
      case 4: {
        auto refs = observed(env, is_ref);
        if (d < 3 || refs.empty()) return nullptr;
        note("let-alias");
        Name y = rng_.pick(refs);
        Name x = fresh("a");
        return let(env, x, mk::qt(env.lookup(y)->pretype, Qualifier{{y}}), mk::var(y),
                   captures(env, {y}), [&](const TypeEnv& in) { return bool_term(in, d - 2); });
      }
      case 5: {
        auto refs = observed(env, is_ref_bool_empty);
        if (mode_ != Mode::Full || d < 3 || refs.empty()) return nullptr;
        note("let-nested");
        Name y = rng_.pick(refs);
        Name x = fresh("n");
        PretypePtr cell = Pretype::ref(mk::qt(env.lookup(y)->pretype, Qualifier{{y}}));
        return let(env, x, mk::qt(cell, Qualifier{{y}, true}), mk::ref(mk::var(y)),
                   captures(env, {y}), [&](const TypeEnv& in) { return bool_term(in, d - 2); });
      }
      case 6: return let_fun(env, d);
      case 7: return call(env, d);
      case 8: {
        if (d < 3) return nullptr;
        note("let-bool");
        Name x = fresh("b");
        return let(env, x, mk::qt(Pretype::boolean()), bool_term(env, d - 1), captures(env, {}),
                   [&](const TypeEnv& in) { return bool_term(in, d - 2); });
      }
      default: return bool_leaf(env);
    }
  }

  TermPtr assign(const TypeEnv& env, int d) {
    auto nested = observed(env, is_ref_ref);
    auto refs = observed(env, is_ref_bool);
    if (mode_ == Mode::Full && !nested.empty() && !refs.empty() && rng_.chance(25)) {
      note("assign-nested");
      return mk::assign(mk::var(rng_.pick(nested)), mk::var(rng_.pick(refs)));
    }
    TermPtr target = ref_bool_term(env, d - 1);
    if (!target) return nullptr;
    note("assign");
    return mk::assign(target, bool_term(env, d - 1));
  }

  TermPtr closure(const TypeEnv& env, int d, bool ref_param) {
    NameSet caps;
    for (const auto& x : env.observation()) {
      if (rng_.chance(50)) caps.insert(x);
    }
    Name u = fresh("u");
    QualifiedType dom = ref_param ? mk::qt(ref_bool(), Qualifier::fresh_only())
                                  : mk::qt(Pretype::boolean());
    return let_body_abs(env, caps, u, dom, d);
  }

  TermPtr let_body_abs(const TypeEnv& env, const NameSet& caps, const Name& u,
                       const QualifiedType& dom, int d) {
    Qualifier bind{{}, dom.qual.fresh, false};
    NameSet phi = caps;
    phi.insert(u);
    TypeEnv inner = env.extend(u, mk::qt(dom.pretype, bind)).observe(phi);
    return mk::abs(Qualifier{caps}, u, dom, bool_term(inner, d - 1));
  }

  TermPtr let_fun(const TypeEnv& env, int d) {
    if (d < 4) return nullptr;
    TermPtr c = closure(env, d - 1, rng_.chance(40));
    auto ct = typing(env, c);
    if (!ct) return nullptr;
    note("let-fun");
    NameSet cq = ct->type.qual.vars;
    Qualifier s{cq, rng_.chance(40), false};
    Name f = fresh("f");
    return let(env, f, mk::qt(ct->type.pretype, s), c, captures(env, cq),
               [&](const TypeEnv& in) { return bool_term(in, d - 2); });
  }

  TermPtr call(const TypeEnv& env, int d) {
    auto funs = observed(env, is_bool_fun);
    if (funs.empty()) return nullptr;
    Name f = rng_.pick(funs);
    const FunType& ft = *env.lookup(f)->pretype->as_fun();
    TermPtr arg = ft.domain.pretype->is_bool() ? bool_term(env, d - 1) : ref_bool_term(env, d - 1);
    if (!arg) return nullptr;
    note("call");
    return mk::app(mk::var(f), arg);
  }

  // Wraps `inner` in `k` lets of references, aliases and functions.
  TermPtr prefix(const TypeEnv& env, int k, std::vector<int>& path, const Body& inner) {
    if (k == 0) return inner(env);
    path.push_back(0);
    path.push_back(0);
    auto refs = observed(env, is_ref_bool);
    std::size_t roll = rng_.below(10);
    Body rest = [&, k](const TypeEnv& in) { return prefix(in, k - 1, path, inner); };
    if (roll < 5 || refs.empty()) {
      return let(env, fresh("r"), mk::qt(ref_bool(), Qualifier::fresh_only()),
                 mk::ref(mk::constant(rng_.chance(50))), env.observation(), rest);
    }
    Name y = rng_.pick(refs);
    if (roll < 8) {
      return let(env, fresh("a"), mk::qt(env.lookup(y)->pretype, Qualifier{{y}}), mk::var(y),
                 env.observation(), rest);
    }
    // A function over some of the cells in scope.
    TermPtr c = closure(env, 3, rng_.chance(30));
    auto ct = typing(env, c);
    if (!ct) {
      return let(env, fresh("r"), mk::qt(ref_bool(), Qualifier::fresh_only()),
                 mk::ref(mk::constant(true)), env.observation(), rest);
    }
    return let(env, fresh("f"), mk::qt(ct->type.pretype, Qualifier{ct->type.qual.vars}), c,
               env.observation(), rest);
  }

  // Closed argument with an empty qualifier and no effect.
  TermPtr pure_closed_bool() {
    for (int i = 0; i < 8; ++i) {
      TermPtr t = bool_term(TypeEnv{}, 2 + rng_.below(3));
      auto ty = typing(TypeEnv{}, t);
      if (ty && ty->type.qual.empty() && ty->effect.empty()) return t;
    }
    return mk::deref(mk::ref(mk::constant(rng_.chance(50))));
  }

  TermPtr redex(const TypeEnv& env) {
    Name x = fresh("x");
    if (rng_.chance(65)) {
      return let(env, x, mk::qt(Pretype::boolean()), pure_closed_bool(), captures(env, {}),
                 [&](const TypeEnv& in) { return bool_term(in, 4); });
    }
    TermPtr fn = let_body_abs(TypeEnv{}, {}, fresh("v"), mk::qt(Pretype::boolean()), 3);
    auto ty = typing(TypeEnv{}, fn);
    if (!ty || !ty->effect.empty()) return redex(env);
    return let(env, x, mk::qt(ty->type.pretype), fn, captures(env, {}),
               [&](const TypeEnv& in) {
                 TermPtr use = mk::app(mk::var(x), bool_term(in, 2));
                 return rng_.chance(50) ? mk::seq(use, bool_term(in, 3)) : use;
               });
  }

  Rng rng_;
  Mode mode_;
  int max_depth_;
  GenStats* stats_;
  int counter_ = 0;
};

}  // namespace

TermPtr generate(const GenConfig& cfg, GenStats* stats) {
  return Generator(cfg, stats).program();
}

RewriteCase generate_reorder_case(const GenConfig& cfg) {
  return Generator(cfg, nullptr).reorder_case();
}

RewriteCase generate_beta_case(const GenConfig& cfg) {
  return Generator(cfg, nullptr).beta_case();
}

DiffResult difftest(const TermPtr& a, const TermPtr& b, std::size_t fuel) {
  EvalOutcome ra = eval(ValueEnv{}, Store{}, a, fuel);
  EvalOutcome rb = eval(ValueEnv{}, Store{}, b, fuel);
  auto show = [](const EvalOutcome& r) {
    if (r.done()) return to_string(r.value);
    if (r.status == EvalOutcome::Status::Timeout) return std::string("timeout");
    return std::string("stuck:") + stuck_name(r.stuck);
  };
  DiffResult out{DiffVerdict::Inconclusive, show(ra), show(rb)};
  if (ra.status == EvalOutcome::Status::Timeout || rb.status == EvalOutcome::Status::Timeout) {
    return out;
  }
  bool same = ra.done() && rb.done() && out.left == out.right;
  out.verdict = same ? DiffVerdict::Equal : DiffVerdict::Unequal;
  return out;
}

}  // namespace reach
