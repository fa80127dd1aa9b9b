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

#include "reach/monitor.hpp"

#include <algorithm>
#include <iterator>

namespace reach {

const char* violation_name(ViolationKind k) {
  switch (k) {
    case ViolationKind::ResultReachability: return "ResultReachability";
    case ViolationKind::Frame: return "Frame";
    case ViolationKind::EffectSafety: return "EffectSafety";
    case ViolationKind::StoreWF: return "StoreWF";
    case ViolationKind::Acyclicity: return "Acyclicity";
    case ViolationKind::TypingExtension: return "TypingExtension";
  }
  return "?";
}

LocSet locs(const Value& v) {
  if (v.is_bool()) return {};
  if (v.is_loc()) return {v.as_loc()};
  const Closure& c = v.as_closure();
  return locs_of(c.env, c.qual.vars);
}

LocSet locs_of(const ValueEnv& env, const NameSet& names) {
  LocSet out;
  for (const auto& x : names) {
    if (const Value* v = env.lookup(x)) {
      LocSet sub = locs(*v);
      out.insert(sub.begin(), sub.end());
    }
  }
  return out;
}

LocSet sat_locs(const StoreTyping& sigma, const LocSet& ls) {
  LocSet out;
  std::vector<Loc> work(ls.begin(), ls.end());
  while (!work.empty()) {
    Loc l = work.back();
    work.pop_back();
    if (!out.insert(l).second) continue;
    if (l < sigma.size()) {
      for (Loc m : sigma[l]) {
        if (!out.count(m)) work.push_back(m);
      }
    }
  }
  return out;
}

namespace {

bool within(const LocSet& a, const LocSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

LocSet minus(const LocSet& a, const LocSet& b) {
  LocSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

std::string abbreviate(const Term& t) {
  std::string s = to_string(t);
  if (s.size() > 96) s = s.substr(0, 93) + "...";
  return s;
}

std::string show(const LocSet& ls) {
  std::string out = "{";
  for (Loc l : ls) {
    if (out.size() > 1) out += ' ';
    out += std::to_string(l);
  }
  return out + "}";
}

class Monitor : public EvalHooks {
 public:
  Monitor(const Elaborated& elab, StoreTyping sigma, const MonitorOptions& opts)
      : elab_(elab), sigma_(std::move(sigma)), opts_(opts) {}

  void enter(const Term& t, const ValueEnv& env, const Store& store) override {
    ++steps_;
    frames_.push_back(Frame{&t, env, store.size(), writes_.size()});
  }

  void leave(const Term& t, const ValueEnv& env, const Value& v, const Store& store) override {
    Frame f = frames_.back();
    frames_.pop_back();
    auto it = elab_.nodes.find(&t);
    if (it == elab_.nodes.end()) return;
    const ElabNode& n = it->second;
    const Qualifier& p = n.typing.type.qual;
    ++checks;

    LocSet fresh;
    for (Loc l = f.store_size; l < store.size(); ++l) fresh.insert(l);
    LocSet bound = sat_locs(sigma_, locs_of(env, set_inter(n.observation, p.vars)));
    if (p.fresh) bound.insert(fresh.begin(), fresh.end());
    LocSet got = sat_locs(sigma_, locs(v));
    if (!within(got, bound)) {
      report(ViolationKind::ResultReachability, t,
             "result " + to_string(v) + " reaches " + show(minus(got, bound)) +
                 " outside its qualifier " + to_string(p),
             minus(got, bound), bound);
    }

    ++checks;
    LocSet written = writes_since(f);
    NameSet frame = elab_.mode == Mode::Base ? n.observation
                                             : set_inter(n.observation, n.typing.effect.vars);
    LocSet allowed = sat_locs(sigma_, locs_of(env, frame));
    if (!within(written, allowed)) {
      report(ViolationKind::Frame, t,
             "writes " + show(minus(written, allowed)) + " outside the frame of effect " +
                 to_string(n.typing.effect),
             minus(written, allowed), allowed);
    }
  }

  void allocated(const Term& t, const ValueEnv& env, Loc l, const Store& store) override {
    ++checks;
    LocSet declared;
    auto it = elab_.nodes.find(&t);
    if (it != elab_.nodes.end()) {
      declared = locs_of(env, it->second.referent.vars);
    }
    if (sigma_.size() != l) {
      report(ViolationKind::TypingExtension, t,
             "store typing has " + std::to_string(sigma_.size()) + " entries at allocation of " +
                 std::to_string(l),
             {l}, {});
      sigma_.resize(l);
    }
    LocSet later;
    for (Loc m : declared) {
      if (m >= l) later.insert(m);
    }
    if (!later.empty()) {
      report(ViolationKind::Acyclicity, t,
             "cell " + std::to_string(l) + " declares referents " + show(later) +
                 " that are not older",
             later, {});
    }
    sigma_.push_back(declared);
    check_cell(t, l, store);
  }

  void assigned(const Term& t, Loc l, const Value&, const Store& store) override {
    ++checks;
    writes_.push_back(l);
    modified_.insert(l);
    check_cell(t, l, store);
  }

  void call_enter(const Term&, const ValueEnv&, const Closure&, const Value&,
                  const Store& store) override {
    calls_.push_back(Frame{nullptr, {}, store.size(), writes_.size()});
  }

  void call_leave(const Term& app, const ValueEnv& caller, const Closure& fn, const Value& arg,
                  const Value&, const Store&) override {
    Frame f = calls_.back();
    calls_.pop_back();
    if (!opts_.call_boundary || elab_.mode != Mode::Full) return;
    auto it = elab_.nodes.find(&app);
    if (it == elab_.nodes.end() || !it->second.callee) return;
    ++checks;
    const FunType& ft = *it->second.callee;
    NameSet outer = ft.latent.vars;
    outer.erase(ft.param);
    LocSet allowed = locs_of(caller, outer);
    if (ft.latent.mentions(ft.param)) {
      LocSet a = locs(arg);
      allowed.insert(a.begin(), a.end());
    }
    if (ft.latent.self_ref) {
      LocSet s = locs_of(fn.env, fn.qual.vars);
      allowed.insert(s.begin(), s.end());
    }
    allowed = sat_locs(sigma_, allowed);
    LocSet written = writes_since(f);
    if (!within(written, allowed)) {
      report(ViolationKind::EffectSafety, app,
             "callee writes " + show(minus(written, allowed)) + " outside its latent effect " +
                 to_string(ft.latent),
             minus(written, allowed), allowed);
    }
  }

  void finish(const StoreTyping& initial, const Store& store) {
    ++checks;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      if (i >= sigma_.size() || sigma_[i] != initial[i]) {
        report_plain(ViolationKind::TypingExtension,
                     "store typing entry " + std::to_string(i) + " changed during the run", {i});
      }
    }
    if (sigma_.size() != store.size()) {
      report_plain(ViolationKind::TypingExtension,
                   "store typing covers " + std::to_string(sigma_.size()) + " of " +
                       std::to_string(store.size()) + " cells",
                   {});
    }
    for (Loc l = 0; l < store.size() && l < sigma_.size(); ++l) {
      LocSet got = sat_locs(sigma_, locs(store[l]));
      LocSet bound = sat_locs(sigma_, sigma_[l]);
      if (!within(got, bound)) {
        report_plain(ViolationKind::StoreWF,
                     "cell " + std::to_string(l) + " holds a value reaching " +
                         show(minus(got, bound)) + " beyond its declared referents",
                     minus(got, bound));
      }
    }
  }

  StoreTyping sigma() const { return sigma_; }
  LocSet modified_before(std::size_t n) const {
    LocSet out;
    for (Loc l : modified_) {
      if (l < n) out.insert(l);
    }
    return out;
  }

  std::vector<ViolationReport> violations;
  std::size_t checks = 0;

 private:
  struct Frame {
    const Term* term;
    ValueEnv env;
    std::size_t store_size;
    std::size_t write_index;
  };

  static NameSet set_inter(const NameSet& a, const NameSet& b) {
    NameSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
  }

  LocSet writes_since(const Frame& f) const {
    LocSet out;
    for (std::size_t i = f.write_index; i < writes_.size(); ++i) {
      if (writes_[i] < f.store_size) out.insert(writes_[i]);
    }
    return out;
  }

  void check_cell(const Term& t, Loc l, const Store& store) {
    LocSet got = sat_locs(sigma_, locs(store[l]));
    LocSet bound = sat_locs(sigma_, sigma_[l]);
    if (!within(got, bound)) {
      report(ViolationKind::StoreWF, t,
             "cell " + std::to_string(l) + " receives " + to_string(store[l]) + " reaching " +
                 show(minus(got, bound)) + " beyond its declared referents " + show(sigma_[l]),
             minus(got, bound), bound);
    }
  }

  void report(ViolationKind k, const Term& t, std::string msg, LocSet off, LocSet allowed) {
    violations.push_back(
        ViolationReport{k, std::move(msg), abbreviate(t), t.span(), steps_, std::move(off),
                        std::move(allowed)});
  }
  void report_plain(ViolationKind k, std::string msg, LocSet off) {
    violations.push_back(ViolationReport{k, std::move(msg), "", {}, steps_, std::move(off), {}});
  }

  const Elaborated& elab_;
  StoreTyping sigma_;
  MonitorOptions opts_;
  std::vector<Frame> frames_;
  std::vector<Frame> calls_;
  std::vector<Loc> writes_;
  LocSet modified_;
  std::size_t steps_ = 0;
};

}  // namespace

MonitorResult monitored_eval(const Elaborated& elab, const ValueEnv& env, Store store,
                             StoreTyping sigma, const MonitorOptions& opts) {
  const std::size_t initial_cells = store.size();
  StoreTyping initial = sigma;
  Monitor m(elab, std::move(sigma), opts);
  MonitorResult out;
  out.outcome = eval(env, std::move(store), elab.term, opts.fuel, &m);
  if (out.outcome.done()) m.finish(initial, out.outcome.store);
  out.sigma = m.sigma();
  out.violations = std::move(m.violations);
  out.checks = m.checks;
  out.modified = m.modified_before(initial_cells);
  return out;
}

}  // namespace reach
