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

#include <gtest/gtest.h>

#include <functional>
#include <string>
#include <variant>

#include "programs.hpp"
#include "reach/eval.hpp"
#include "reach/harness.hpp"
#include "reach/parser.hpp"
#include "reach/qualifiers.hpp"
#include "reach/typecheck.hpp"
#include "support.hpp"

namespace reach {
namespace {

using testing::env_of;
using testing::fixture;
using testing::names;

template <std::size_t N>
TypeEnv env_from(const char* (&rows)[N][2]) {
  std::vector<std::pair<std::string, std::string>> v;
  for (auto& r : rows) v.emplace_back(r[0], r[1]);
  return env_of(v);
}

std::string type_of(const TypeEnv& env, const std::string& src, Mode mode = Mode::Full) {
  return to_string(typecheck(env, parse_term(src), mode).typing.type);
}

TypeError error_of(const TypeEnv& env, const std::string& src, Mode mode = Mode::Full) {
  auto r = try_typecheck(env, parse_term(src), mode);
  if (std::holds_alternative<Elaborated>(r)) {
    ADD_FAILURE() << "accepted: " << src;
    return TypeError("", "", "");
  }
  return std::get<TypeError>(r);
}

void visit(const TermPtr& t, const std::function<void(const TermPtr&)>& f) {
  f(t);
  for (const auto& k : t->children()) visit(k, f);
}

// Listing examples.

TEST(Listings, Identity) {
  auto e = typecheck(TypeEnv{}, parse_term(programs::kId), Mode::Full);
  EXPECT_EQ(to_string(e.typing.type), programs::kIdType);
  EXPECT_TRUE(e.typing.effect.empty());
  EXPECT_EQ(type_of(TypeEnv{}, programs::kId, Mode::Base), programs::kIdType);
}

TEST(Listings, IdentityVariantsCapturingZ) {
  auto env = env_from(programs::kIdEnv);
  EXPECT_EQ(type_of(env, programs::kId2), programs::kId2Type);
  EXPECT_EQ(type_of(env, programs::kId3), programs::kId3Type);
}

TEST(Listings, Id2RejectsArgumentReachingZ) {
  auto env = env_from(programs::kIdEnv);
  auto err = error_of(env, std::string("(app ") + programs::kId2 + " b)");
  EXPECT_EQ(err.rule(), "t-app-◇");
  EXPECT_EQ(err.code(), "overlap");
}

TEST(Listings, Id3AcceptsArgumentReachingZ) {
  auto env = env_from(programs::kIdEnv);
  EXPECT_EQ(type_of(env, std::string("(app ") + programs::kId3 + " b)"), "Bool^{b}");
  EXPECT_EQ(type_of(env, std::string("(app ") + programs::kId2 + " c)"), "Bool^{c}");
}

TEST(Listings, IncrementRetainsArgumentPrecision) {
  auto env = env_from(programs::kIncrEnv);
  EXPECT_EQ(type_of(env, programs::kIncr), programs::kIncrType);
  for (const char* arg : {"c1", "c2"}) {
    auto e = typecheck(env, parse_term(std::string("(app ") + programs::kIncr + " " + arg + ")"),
                       Mode::Full);
    EXPECT_EQ(e.typing.type.qual, (Qualifier{names({arg})}));
    EXPECT_EQ(e.typing.effect.vars, names({"c1"}));
  }
}

TEST(Listings, BorrowFirstCallAccepted) {
  auto e = typecheck(TypeEnv{}, parse_term(fixture("borrow_ok.rch")), Mode::Base);
  EXPECT_EQ(to_string(e.typing.type), "Bool^{}");
}

TEST(Listings, BorrowSecondCallOverlapsViaX) {
  auto err = error_of(TypeEnv{}, fixture("borrow_overlap.rch"), Mode::Base);
  EXPECT_EQ(err.rule(), "t-app-◇");
  EXPECT_EQ(err.code(), "overlap");
  bool names_x = false;
  for (const auto& [label, set] : err.witnesses) {
    if (set == names({"x"})) names_x = true;
  }
  EXPECT_TRUE(names_x);
}

TEST(Rules, AllocationInBaseMode) {
  auto e = typecheck(TypeEnv{}, parse_term("(ref true)"), Mode::Base);
  EXPECT_EQ(to_string(e.typing.type), "(Ref Bool^{})^{fresh}");
  EXPECT_TRUE(e.typing.effect.empty());
}

TEST(Rules, AssignmentEffectIsTargetQualifier) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}, {"y", "(Ref Bool^{})^{x}"}});
  auto e = typecheck(env, parse_term("(:= y true)"), Mode::Full);
  EXPECT_EQ(to_string(e.typing.type), "Bool^{}");
  EXPECT_EQ(e.typing.effect.vars, names({"y"}));
}

TEST(Rules, DereferenceIsPure) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}});
  auto e = typecheck(env, parse_term("(! x)"), Mode::Full);
  EXPECT_TRUE(e.typing.effect.empty());
}

TEST(Rules, SequenceJoinsEffects) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}, {"y", "(Ref Bool^{})^{fresh}"}});
  auto e = typecheck(env, parse_term("(seq (:= x true) (:= y false))"), Mode::Full);
  EXPECT_EQ(to_string(e.typing.type), "Bool^{}");
  EXPECT_EQ(e.typing.effect.vars, names({"x", "y"}));
}

TEST(Rules, LatentEffectInstantiatedAtCall) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}});
  auto e = typecheck(
      env, parse_term("(app (lam {} (r: (Ref Bool^{})^{fresh}) (:= r true)) x)"), Mode::Full);
  EXPECT_EQ(e.typing.effect.vars, names({"x"}));
}

TEST(Rules, BaseModeEffectsAreEmpty) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}});
  auto e = typecheck(env, parse_term("(:= x true)"), Mode::Base);
  EXPECT_TRUE(e.typing.effect.empty());
}

TEST(Rules, HigherOrderReferencesOnlyInFullMode) {
  const char* src =
      "(app (lam {} (x: (Ref Bool^{})^{fresh}) (app (lam {x} (y: (Ref (Ref Bool^{})^{x})^{x fresh}) "
      "(! (! y))) (ref x))) (ref true))";
  EXPECT_EQ(type_of(TypeEnv{}, src, Mode::Full), "Bool^{}");
  auto err = error_of(TypeEnv{}, src, Mode::Base);
  EXPECT_EQ(err.code(), "base-mode-restriction");
}

TEST(Errors, CodesAndRules) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}, {"b", "Bool^{}"}});
  struct Case {
    const char* src;
    const char* code;
    const char* rule;
  } cases[] = {
      {"nope", "unbound-variable", "t-var"},
      {"(app true false)", "not-a-function", "t-app"},
      {"(! b)", "not-a-reference", "t-!"},
      {"(:= b true)", "not-a-reference", "t-:="},
      {"(:= x x)", "value-type-mismatch", "t-:="},
      {"(seq x true)", "not-a-bool", "t-seq"},
      {"(app (lam {} (u: Bool^{}) u) x)", "argument-type-mismatch", "t-app"},
      {"(lam {} (u: (Ref Bool^{})^{x}) u)", "domain-not-captured", "t-abs"},
  };
  for (const auto& c : cases) {
    auto err = error_of(env, c.src);
    EXPECT_EQ(err.code(), c.code) << c.src;
    EXPECT_EQ(err.rule(), c.rule) << c.src;
  }
}

TEST(Errors, UnobservedVariable) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}}).observe({});
  auto err = error_of(env, "(! x)");
  EXPECT_EQ(err.code(), "unobserved-variable");
  EXPECT_EQ(err.rule(), "t-var");
}

TEST(Errors, NegativeBattery) {
  for (const auto& n : programs::negative_battery(fixture("borrow_overlap.rch"))) {
    std::string rule;
    try {
      typecheck(TypeEnv{}, parse_term(n.source), n.mode);
    } catch (const TypeError& e) {
      rule = e.rule();
    } catch (const InvariantError& e) {
      rule = e.rule();
    }
    EXPECT_EQ(rule, n.rule) << n.name;
  }
}

TEST(Errors, ShadowingIsRenamedApart) {
  auto e = typecheck(TypeEnv{}, parse_term("(app (lam {} (x: Bool^{}) (app (lam {x} (x: Bool^{}) x) x)) true)"),
                     Mode::Full);
  EXPECT_EQ(to_string(e.typing.type), "Bool^{}");
}

// Subtyping.

TEST(Subtype, Reflexive) {
  auto env = env_of({{"a", "(Ref Bool^{})^{fresh}"}});
  for (const char* ty : {"Bool^{}", "(Ref Bool^{})^{a}", "((x: Bool^{fresh}) -> Bool^{x} / {})^{a}",
                         "((x: Bool^{fresh self}) -> Bool^{x self} / {x})^{}"}) {
    auto t = parse_qualified_type(ty);
    EXPECT_TRUE(check_subtype(env, t, t)) << ty;
  }
}

TEST(Subtype, SelfReferenceAbsorbsCapturedDomain) {
  auto env = env_of({{"c", "(Ref Bool^{})^{fresh}"}});
  auto a = parse_qualified_type("((x: Bool^{fresh self}) -> Bool^{x} / {})^{c}");
  auto b = parse_qualified_type("((x: Bool^{c}) -> Bool^{self} / {})^{c}");
  EXPECT_TRUE(check_subtype(env, a, b));
  auto b_uncaptured = parse_qualified_type("((x: Bool^{c}) -> Bool^{self} / {})^{c}");
  auto a_empty = parse_qualified_type("((x: Bool^{fresh self}) -> Bool^{x} / {})^{}");
  EXPECT_FALSE(check_subtype(env, a_empty, parse_qualified_type("((x: Bool^{c}) -> Bool^{self} / {})^{}")));
  EXPECT_TRUE(check_subtype(env, a, b_uncaptured));
}

TEST(Subtype, ReferencesAreInvariant) {
  auto fresh = env_of({{"a", "(Ref Bool^{})^{fresh}"}, {"b", "(Ref Bool^{})^{fresh}"}});
  auto narrow = parse_qualified_type("(Ref (Ref Bool^{})^{a})^{}");
  auto wide = parse_qualified_type("(Ref (Ref Bool^{})^{a b})^{}");
  EXPECT_FALSE(check_subtype(fresh, narrow, wide));
  EXPECT_FALSE(subqual(fresh, Qualifier{names({"a", "b"})}, Qualifier{names({"a"})}));
  // When b reaches only a, both directions hold.
  auto chained = env_of({{"a", "(Ref Bool^{})^{fresh}"}, {"b", "(Ref Bool^{})^{a}"}});
  EXPECT_TRUE(subqual(chained, Qualifier{names({"a", "b"})}, Qualifier{names({"a"})}));
  EXPECT_TRUE(check_subtype(chained, narrow, wide));
}

TEST(Subtype, FunctionsContravariantInDomain) {
  TypeEnv env;
  auto takes_fresh = parse_qualified_type("((x: Bool^{fresh}) -> Bool^{} / {})^{}");
  auto takes_plain = parse_qualified_type("((x: Bool^{}) -> Bool^{} / {})^{}");
  EXPECT_TRUE(check_subtype(env, takes_fresh, takes_plain));
  EXPECT_FALSE(check_subtype(env, takes_plain, takes_fresh));
}

// Properties over generated programs.

constexpr std::uint64_t kPrograms = 300;

TEST(Properties, Deterministic) {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    auto t = generate(GenConfig{seed, 8, Mode::Full});
    auto a = typecheck(TypeEnv{}, t, Mode::Full);
    auto b = typecheck(TypeEnv{}, t, Mode::Full);
    EXPECT_EQ(to_string(*a.term), to_string(*b.term));
    EXPECT_EQ(a.rule_hits, b.rule_hits);
    std::vector<std::string> ta, tb;
    visit(a.term, [&](const TermPtr& n) { ta.push_back(to_string(a.at(n).typing.type)); });
    visit(b.term, [&](const TermPtr& n) { tb.push_back(to_string(b.at(n).typing.type)); });
    EXPECT_EQ(ta, tb);
  }
}

TEST(Properties, MinimalQualifiers) {
  for (std::uint64_t seed = 0; seed < kPrograms; ++seed) {
    auto e = typecheck(TypeEnv{}, generate(GenConfig{seed, 8, Mode::Full}), Mode::Full);
    visit(e.term, [&](const TermPtr& n) {
      const ElabNode& info = e.at(n);
      if (auto v = n->as<Var>()) {
        EXPECT_EQ(info.typing.type.qual, (Qualifier{{v->name}}));
      } else if (auto a = n->as<Abs>()) {
        EXPECT_EQ(info.typing.type.qual,
                  (Qualifier{set_intersection(info.observation, a->captures.vars)}));
      }
    });
  }
}

TEST(Properties, ObservationMonotone) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (Mode mode : {Mode::Base, Mode::Full}) {
      auto e = typecheck(TypeEnv{}, generate(GenConfig{seed, 6, mode}), mode);
      visit(e.term, [&](const TermPtr& n) {
        const ElabNode& info = e.at(n);
        TypeEnv wider = info.env->observe(info.env->names());
        auto r = try_typecheck(wider, n, mode);
        ASSERT_TRUE(std::holds_alternative<Elaborated>(r)) << to_string(*n);
        const Typing& got = std::get<Elaborated>(r).typing;
        EXPECT_EQ(got.type.qual, info.typing.type.qual) << to_string(*n);
        ++checked;
      });
    }
  }
  EXPECT_GT(checked, 1000u);
}

bool has_function_parameter(const Term& t) {
  if (auto a = t.as<Abs>()) {
    if (a->param_type.pretype->as_fun()) return true;
  }
  for (const auto& k : t.children()) {
    if (has_function_parameter(*k)) return true;
  }
  return false;
}

TEST(Properties, BaseProgramsAgreeWithFullMode) {
  std::size_t compared = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto t = generate(GenConfig{seed, 8, Mode::Base});
    if (has_function_parameter(*t)) continue;
    auto r = try_typecheck(TypeEnv{}, t, Mode::Full);
    ASSERT_TRUE(std::holds_alternative<Elaborated>(r)) << to_string(*t);
    EXPECT_TRUE(std::get<Elaborated>(r).typing.effect.empty());
    ++compared;
  }
  EXPECT_GT(compared, 200u);
}

TEST(Properties, AcceptedProgramsDoNotGetStuck) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (Mode mode : {Mode::Base, Mode::Full}) {
      auto t = generate(GenConfig{seed, 8, mode});
      ASSERT_NO_THROW(typecheck(TypeEnv{}, t, mode));
      auto out = eval({}, {}, t);
      ASSERT_TRUE(out.done()) << to_string(*t) << " " << out.detail;
      EXPECT_TRUE(out.value.is_bool());
    }
  }
}

TEST(Properties, LeastObservationIsSufficient) {
  auto env = env_of({{"x", "(Ref Bool^{})^{fresh}"}, {"y", "(Ref Bool^{})^{x}"},
                     {"z", "(Ref Bool^{})^{fresh}"}});
  auto t = parse_term("(:= y (! x))");
  NameSet phi = least_observation(env, t, Mode::Full);
  EXPECT_TRUE(subset(free_vars(*t), phi));
  EXPECT_FALSE(phi.count("z"));
  EXPECT_NO_THROW(typecheck(env.observe(phi), t, Mode::Full));
}

}  // namespace
}  // namespace reach
