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

// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "oracles.hpp"
#include "programs.hpp"
#include "reach/harness.hpp"
#include "reach/monitor.hpp"
#include "reach/parser.hpp"
#include "reach/qualifiers.hpp"
#include "reach/rewrite.hpp"
#include "support.hpp"

namespace reach {
namespace {

using testing::closure_oracle;
using testing::env_of;
using testing::fixture;
using testing::names;
using testing::Random;
using testing::subqual_oracle;
using testing::widen;

// Collects failures for one criterion; the first few are printed.
class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::size_t checks() const { return checks_; }
  std::size_t failed() const { return failed_; }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 means no time target
  std::function<std::string(Verdict&)> body;
};

template <std::size_t N>
TypeEnv env_from(const char* (&rows)[N][2]) {
  std::vector<std::pair<std::string, std::string>> v;
  for (auto& r : rows) v.emplace_back(r[0], r[1]);
  return env_of(v);
}

std::string type_or_error(const TypeEnv& env, const std::string& src, Mode mode) {
  try {
    return to_string(typecheck(env, parse_term(src), mode).typing.type);
  } catch (const TypeError& e) {
    return std::string("error ") + e.rule();
  }
}

// 1. Listing examples reproduce their printed verdicts.
std::string listings(Verdict& v) {
  auto ids = env_from(programs::kIdEnv);
  v.expect(type_or_error(TypeEnv{}, programs::kId, Mode::Full) == programs::kIdType, "id");
  v.expect(type_or_error(ids, programs::kId2, Mode::Full) == programs::kId2Type, "id2");
  v.expect(type_or_error(ids, programs::kId3, Mode::Full) == programs::kId3Type, "id3");
  v.expect(type_or_error(ids, std::string("(app ") + programs::kId2 + " b)", Mode::Full) ==
               "error t-app-◇",
           "id2 rejects an argument reaching z");
  v.expect(type_or_error(ids, std::string("(app ") + programs::kId3 + " b)", Mode::Full) ==
               "Bool^{b}",
           "id3 accepts an argument reaching z");

  v.expect(type_or_error(TypeEnv{}, fixture("borrow_ok.rch"), Mode::Base) == "Bool^{}",
           "borrow first call accepted");
  try {
    typecheck(TypeEnv{}, parse_term(fixture("borrow_overlap.rch")), Mode::Base);
    v.expect(false, "borrow second call rejected");
  } catch (const TypeError& e) {
    bool via_x = false;
    for (const auto& [label, set] : e.witnesses) via_x = via_x || set == names({"x"});
    v.expect(e.rule() == "t-app-◇" && e.code() == "overlap" && via_x,
             "borrow second call overlaps via x");
  }

  auto cells = env_from(programs::kIncrEnv);
  v.expect(type_or_error(cells, programs::kIncr, Mode::Full) == programs::kIncrType, "incr type");
  for (const char* c : {"c1", "c2"}) {
    auto got = type_or_error(cells, std::string("(app ") + programs::kIncr + " " + c + ")",
                             Mode::Full);
    v.expect(got == std::string("(Ref Bool^{})^{") + c + "}", std::string("incr(") + c + ")");
  }
  return std::to_string(v.checks() - v.failed()) + "/" + std::to_string(v.checks()) +
         " verdicts match";
}

constexpr std::size_t kCorpus = 10000;
constexpr int kDepth = 8;
constexpr std::uint64_t kSeed = 20260000;

std::vector<std::pair<Mode, TermPtr>>& corpus() {
  static std::vector<std::pair<Mode, TermPtr>> c = [] {
    std::vector<std::pair<Mode, TermPtr>> out;
    for (Mode mode : {Mode::Base, Mode::Full}) {
      for (std::size_t i = 0; i < kCorpus; ++i) {
        out.emplace_back(mode, generate(GenConfig{kSeed + i, kDepth, mode}));
      }
    }
    return out;
  }();
  return c;
}

// 2. Generated programs typecheck and evaluate to a value.
std::string termination(Verdict& v) {
  std::size_t done = 0;
  for (const auto& [mode, t] : corpus()) {
    auto r = try_typecheck(TypeEnv{}, t, mode);
    v.expect(std::holds_alternative<Elaborated>(r), "rejected: " + to_string(*t));
    v.expect(term_depth(*t) <= kDepth, "too deep: " + to_string(*t));
    auto out = eval({}, {}, t, kDefaultFuel);
    v.expect(out.done(), "not done: " + to_string(*t) + " " + out.detail);
    done += out.done();
  }
  return std::to_string(done) + "/" + std::to_string(corpus().size()) +
         " programs (both modes) evaluate to a value at fuel 10^6";
}

// Records the declared referent set at each allocation so that the final
// store typing can be compared against it.
class AllocationLog : public EvalHooks {
 public:
  explicit AllocationLog(const Elaborated& e) : e_(e) {}
  void allocated(const Term& t, const ValueEnv& env, Loc l, const Store&) override {
    auto it = e_.nodes.find(&t);
    declared.resize(l + 1);
    declared[l] = it == e_.nodes.end() ? LocSet{} : locs_of(env, it->second.referent.vars);
  }
  StoreTyping declared;

 private:
  const Elaborated& e_;
};

// 3. The monitor finds nothing, and writes stay within the effect frame.
std::string effect_safety(Verdict& v) {
  std::size_t checks = 0, violations = 0;
  for (const auto& [mode, t] : corpus()) {
    auto e = typecheck(TypeEnv{}, t, mode);
    auto r = monitored_eval(e, {}, {}, {}, MonitorOptions{kDefaultFuel, true});
    checks += r.checks;
    violations += r.violations.size();
    v.expect(r.clean(), "violation in " + to_string(*t) +
                            (r.violations.empty() ? "" : ": " + r.violations[0].message));
    LocSet frame = sat_locs(r.sigma, locs_of({}, set_intersection({}, e.typing.effect.vars)));
    for (Loc l : r.modified) v.expect(frame.count(l) != 0, "write outside frame");
  }
  return std::to_string(violations) + " violations across " + std::to_string(checks) +
         " runtime checks";
}

// 4. The frame program: calling f leaves x's cell untouched.
std::string frame(Verdict& v) {
  auto e = typecheck(TypeEnv{}, parse_term(fixture("frame.rch")), Mode::Full);
  auto r = monitored_eval(e, {}, {}, {}, MonitorOptions{kDefaultFuel, true});
  v.expect(r.outcome.done() && r.clean(), "closed frame program runs clean");
  v.expect(r.outcome.done() && r.outcome.value.is_bool() && r.outcome.value.as_bool(),
           "!x after f() equals its initial value");

  // The same call with x, y and f in scope.
  auto gamma = env_of({{"x", "(Ref Bool^{})^{fresh}"},
                       {"y", "(Ref Bool^{})^{fresh}"},
                       {"f", "((u: Bool^{}) -> Bool^{} / {y})^{y}"}});
  Store store = {Value::boolean(true), Value::boolean(true)};
  ValueEnv h = ValueEnv{}.extend("x", Value::loc(0)).extend("y", Value::loc(1));
  auto fn = eval(h, store, parse_term("(lam {y} (u: Bool^{}) (:= y false))"));
  h = h.extend("f", fn.value);
  auto open = typecheck(gamma, parse_term("(seq (app f true) (! x))"), Mode::Full);
  auto ro = monitored_eval(open, h, store, {{}, {}}, MonitorOptions{kDefaultFuel, true});
  LocSet allowed = sat_locs(ro.sigma, locs_of(h, open.typing.effect.vars));
  v.expect(ro.clean(), "open call runs clean");
  v.expect(ro.modified == LocSet{1} && allowed == LocSet{1}, "only y's cell is written");
  v.expect(ro.outcome.done() && ro.outcome.store[0].as_bool() && ro.outcome.value.as_bool(),
           "x's cell keeps its value");
  return v.ok() ? "x's cell holds true after f(); writes = {1} within frame {1}" : "mismatch";
}

// 5. Accepted reorderings preserve the answer; effects buy precision.
std::string reordering(Verdict& v) {
  std::ostringstream msg;
  for (Mode mode : {Mode::Base, Mode::Full}) {
    std::size_t accepted = 0, equal = 0, full_only = 0;
    std::uint64_t seed = kSeed;
    while (accepted < 1000 && seed < kSeed + 50000) {
      auto c = generate_reorder_case(GenConfig{seed++, kDepth, mode});
      auto r = rewrite_at(TypeEnv{}, c.program, RewriteRule::Reorder, c.path, mode);
      if (mode == Mode::Base && !r.ok &&
          std::holds_alternative<Elaborated>(try_typecheck(TypeEnv{}, c.program, Mode::Full))) {
        full_only += rewrite_at(TypeEnv{}, c.program, RewriteRule::Reorder, c.path, Mode::Full).ok;
      }
      if (!r.ok) continue;
      ++accepted;
      bool same = difftest(c.program, r.term).verdict == DiffVerdict::Equal;
      equal += same;
      v.expect(same, "reorder changed the answer: " + to_string(*c.program));
    }
    v.expect(accepted == 1000, std::string("fewer than 1000 accepted pairs in ") + mode_name(mode));
    msg << mode_name(mode) << " " << equal << "/" << accepted << " Equal";
    if (mode == Mode::Base) {
      v.expect(full_only >= 50, "fewer than 50 pairs accepted only with effects");
      msg << " (" << full_only << " refused pairs accepted in full), ";
    }
  }
  return msg.str();
}

// 6. Accepted beta-inlinings preserve the answer.
std::string beta(Verdict& v) {
  std::size_t accepted = 0, equal = 0;
  std::uint64_t seed = kSeed;
  while (accepted < 500 && seed < kSeed + 20000) {
    auto c = generate_beta_case(GenConfig{seed++, kDepth, Mode::Full});
    auto r = rewrite_at(TypeEnv{}, c.program, RewriteRule::Beta, c.path, Mode::Full);
    if (!r.ok) continue;
    ++accepted;
    bool same = difftest(c.program, r.term).verdict == DiffVerdict::Equal;
    equal += same;
    v.expect(same, "beta changed the answer: " + to_string(*c.program));
  }
  v.expect(accepted == 500, "fewer than 500 accepted redexes");
  return std::to_string(equal) + "/" + std::to_string(accepted) + " Equal";
}

// 7. Qualifier algebra laws on random instances, checked against
// reference implementations where one exists.
std::string laws(Verdict& v) {
  constexpr int kInstances = 10000;
  Random r(kSeed);
  NameSet pool = names({"a", "b", "c", "x"});
  int chains = 0;
  for (int i = 0; i < kInstances; ++i) {
    TypeEnv env = r.env(1 + r.below(8));
    NameSet q1 = r.subset(env.names());
    NameSet q2 = set_union(q1, r.subset(env.names()));
    NameSet s1 = saturate(env, q1);
    v.expect(s1 == closure_oracle(env, q1), "saturation agrees with transitive closure");
    v.expect(saturate(env, s1) == s1, "saturation idempotent");
    v.expect(subset(q1, s1), "saturation extensive");
    v.expect(subset(s1, saturate(env, q2)), "saturation monotone");

    Qualifier rq = r.qualifier(pool), p = r.qualifier(pool);
    Qualifier sv = subst_var(rq, "x", p);
    NameSet expect = rq.vars;
    if (rq.contains("x")) {
      expect.erase("x");
      expect.insert(p.vars.begin(), p.vars.end());
    }
    v.expect(sv.vars == expect, "substitution equation for variables");
    v.expect(sv.fresh == (rq.fresh || (rq.contains("x") && p.fresh)), "substitution marker");
    Qualifier ss = subst_self(rq, p);
    v.expect(ss.vars == (rq.self_ref ? set_union(rq.vars, p.vars) : rq.vars),
             "self substitution equation");

    Qualifier a = r.qualifier(env.names());
    Qualifier other = r.qualifier(env.names());
    v.expect(subqual(env, a, a), "subqual reflexive");
    v.expect(subqual(env, a, other) == subqual_oracle(env, a, other),
             "subqual agrees with exhaustive search");
    Qualifier b = widen(env, r, a);
    Qualifier c = widen(env, r, b);
    if (subqual(env, a, b) && subqual(env, b, c)) {
      ++chains;
      v.expect(subqual(env, a, c), "subqual transitive");
    }
  }
  return std::to_string(kInstances) + " instances per law, " + std::to_string(chains) +
         " transitivity chains, " + std::to_string(v.failed()) + " failures";
}

// 8. Store typing stays acyclic and entries never change once recorded.
std::string acyclicity(Verdict& v) {
  std::size_t edges = 0, cells = 0;
  for (const auto& [mode, t] : corpus()) {
    auto e = typecheck(TypeEnv{}, t, mode);
    auto r = monitored_eval(e, {}, {}, {});
    AllocationLog log(e);
    eval({}, {}, e.term, kDefaultFuel, &log);
    v.expect(r.sigma == log.declared, "store typing differs from allocation-time declarations");
    for (Loc l = 0; l < r.sigma.size(); ++l) {
      ++cells;
      for (Loc m : r.sigma[l]) {
        ++edges;
        v.expect(m < l, "edge to a younger cell");
      }
    }
    for (const auto& viol : r.violations) {
      v.expect(viol.kind != ViolationKind::Acyclicity &&
                   viol.kind != ViolationKind::TypingExtension,
               viol.message);
    }
  }
  return std::to_string(edges) + " declared edges over " + std::to_string(cells) +
         " cells, all pointing to older cells";
}

// 9. Ill-formed programs are rejected by the expected rule.
std::string negatives(Verdict& v) {
  auto battery = programs::negative_battery(fixture("borrow_overlap.rch"));
  std::size_t matched = 0;
  for (const auto& n : battery) {
    std::string rule = "accepted";
    try {
      typecheck(TypeEnv{}, parse_term(n.source), n.mode);
    } catch (const TypeError& e) {
      rule = e.rule();
    } catch (const InvariantError& e) {
      rule = e.rule();
    }
    bool ok = rule == n.rule;
    matched += ok;
    v.expect(ok, std::string(n.name) + ": expected " + n.rule + ", got " + rule);
  }
  return std::to_string(matched) + "/" + std::to_string(battery.size()) +
         " rejected by the expected rule";
}

}  // namespace
}  // namespace reach

int main() {
  using namespace reach;
  std::vector<Criterion> criteria = {
      {1, "listing fidelity", 1.0, listings},
      {2, "generated programs terminate without getting stuck", 60.0, termination},
      {3, "monitor reports no violations", 0, effect_safety},
      {4, "frame of an effectful call", 0, frame},
      {5, "reordering preserves answers", 0, reordering},
      {6, "beta-inlining preserves answers", 0, beta},
      {7, "qualifier algebra laws", 0, laws},
      {8, "store typing acyclic and append-only", 0, acyclicity},
      {9, "negative battery", 0, negatives},
  };
  // Build the shared corpus outside the timed criteria.
  corpus();
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    try {
      detail = c.body(v);
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0 && secs > c.budget_seconds) {
      v.expect(false, "took " + std::to_string(secs) + " s, budget " +
                          std::to_string(c.budget_seconds) + " s");
    }
    std::printf("%s [%d] %s: %s (%.2f s)\n", v.ok() ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str(), secs);
    for (const auto& f : v.failures()) std::printf("       %s\n", f.c_str());
    failed += !v.ok();
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
