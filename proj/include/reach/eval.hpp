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

#ifndef REACH_EVAL_HPP_
#define REACH_EVAL_HPP_

#include <cstddef>
#include <string>

#include "reach/syntax.hpp"

namespace reach {

inline constexpr std::size_t kDefaultFuel = 1000000;

enum class StuckKind { NotAFunction, NotALocation, UnboundVariable, NotABool, DanglingLocation };
const char* stuck_name(StuckKind k);

struct EvalOutcome {
  enum class Status { Done, Timeout, Stuck };
  Status status = Status::Done;
  Value value;                          // meaningful when Done
  StuckKind stuck = StuckKind::NotABool;  // meaningful when Stuck
  std::string detail;
  Store store;
  std::size_t steps = 0;

  bool done() const { return status == Status::Done; }
};

// Observation points for instrumented runs. The defaults do nothing.
class EvalHooks {
 public:
  virtual ~EvalHooks() = default;
  virtual void enter(const Term&, const ValueEnv&, const Store&) {}
  virtual void leave(const Term&, const ValueEnv&, const Value&, const Store&) {}
  virtual void allocated(const Term&, const ValueEnv&, Loc, const Store&) {}
  virtual void assigned(const Term&, Loc, const Value& /*old*/, const Store&) {}
  virtual void call_enter(const Term& /*app*/, const ValueEnv& /*caller*/, const Closure&,
                          const Value& /*arg*/, const Store&) {}
  virtual void call_leave(const Term& /*app*/, const ValueEnv& /*caller*/, const Closure&,
                          const Value& /*arg*/, const Value& /*result*/, const Store&) {}
};

// Big-step, call-by-value, left to right. Each node entered costs one unit
// of fuel.
EvalOutcome eval(const ValueEnv& env, Store store, const TermPtr& t,
                 std::size_t fuel = kDefaultFuel, EvalHooks* hooks = nullptr);

}  // namespace reach

#endif  // REACH_EVAL_HPP_
