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

#include "reach/eval.hpp"

namespace reach {

const char* stuck_name(StuckKind k) {
  switch (k) {
    case StuckKind::NotAFunction: return "NotAFunction";
    case StuckKind::NotALocation: return "NotALocation";
    case StuckKind::UnboundVariable: return "UnboundVariable";
    case StuckKind::NotABool: return "NotABool";
    case StuckKind::DanglingLocation: return "DanglingLocation";
  }
  return "?";
}

namespace {

struct OutOfFuel {};
struct Stuck {
  StuckKind kind;
  std::string detail;
};

class Machine {
 public:
  Machine(Store& store, std::size_t fuel, EvalHooks* hooks)
      : store_(store), fuel_(fuel), hooks_(hooks) {}

  std::size_t steps() const { return steps_; }

  Value run(const TermPtr& t, const ValueEnv& env) {
    if (steps_ == fuel_) throw OutOfFuel{};
    ++steps_;
    if (hooks_) hooks_->enter(*t, env, store_);
    Value v = step(t, env);
    if (hooks_) hooks_->leave(*t, env, v, store_);
    return v;
  }

 private:
  Value step(const TermPtr& t, const ValueEnv& env) {
    const Term& term = *t;
    if (const auto* c = term.as<Const>()) return Value::boolean(c->value);
    if (const auto* x = term.as<Var>()) {
      const Value* v = env.lookup(x->name);
      if (!v) throw Stuck{StuckKind::UnboundVariable, "unbound variable " + x->name};
      return *v;
    }
    if (const auto* a = term.as<Abs>()) {
      return Value::closure(
          std::make_shared<const Closure>(Closure{env, a->param, a->body, a->captures}));
    }
    if (const auto* ap = term.as<App>()) {
      Value f = run(ap->fn, env);
      Value arg = run(ap->arg, env);
      if (!f.is_closure()) throw Stuck{StuckKind::NotAFunction, "applied " + to_string(f)};
      const Closure& c = f.as_closure();
      if (hooks_) hooks_->call_enter(term, env, c, arg, store_);
      Value r = run(c.body, c.env.extend(c.param, arg));
      if (hooks_) hooks_->call_leave(term, env, c, arg, r, store_);
      return r;
    }
    if (const auto* ra = term.as<RefAlloc>()) {
      Value v = run(ra->init, env);
      store_.push_back(v);
      Loc l = store_.size() - 1;
      if (hooks_) hooks_->allocated(term, env, l, store_);
      return Value::loc(l);
    }
    if (const auto* d = term.as<Deref>()) {
      Loc l = location(run(d->target, env));
      return store_[l];
    }
    if (const auto* as = term.as<Assign>()) {
      Loc l = location(run(as->target, env));
      Value v = run(as->value, env);
      Value old = store_[l];
      store_[l] = v;
      if (hooks_) hooks_->assigned(term, l, old, store_);
      return Value::boolean(true);
    }
    const auto& sq = *term.as<Seq>();
    bool a = boolean(run(sq.first, env));
    bool b = boolean(run(sq.second, env));
    return Value::boolean(a && b);
  }

  Loc location(const Value& v) const {
    if (!v.is_loc()) throw Stuck{StuckKind::NotALocation, "expected a location, got " + to_string(v)};
    if (v.as_loc() >= store_.size()) {
      throw Stuck{StuckKind::DanglingLocation, "location " + to_string(v) + " is not allocated"};
    }
    return v.as_loc();
  }

  static bool boolean(const Value& v) {
    if (!v.is_bool()) throw Stuck{StuckKind::NotABool, "expected a boolean, got " + to_string(v)};
    return v.as_bool();
  }

  Store& store_;
  std::size_t fuel_;
  std::size_t steps_ = 0;
  EvalHooks* hooks_;
};

}  // namespace

EvalOutcome eval(const ValueEnv& env, Store store, const TermPtr& t, std::size_t fuel,
                 EvalHooks* hooks) {
  EvalOutcome out;
  Machine m(store, fuel, hooks);
  try {
    out.value = m.run(t, env);
    out.status = EvalOutcome::Status::Done;
  } catch (const OutOfFuel&) {
    out.status = EvalOutcome::Status::Timeout;
    out.detail = "fuel exhausted after " + std::to_string(fuel) + " steps";
  } catch (const Stuck& s) {
    out.status = EvalOutcome::Status::Stuck;
    out.stuck = s.kind;
    out.detail = s.detail;
  }
  out.steps = m.steps();
  out.store = std::move(store);
  return out;
}

}  // namespace reach
