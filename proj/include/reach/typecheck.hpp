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

#ifndef REACH_TYPECHECK_HPP_
#define REACH_TYPECHECK_HPP_

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "reach/syntax.hpp"

namespace reach {

// Base: first-order references with empty referent qualifiers, structural
// subtyping, no effects. Full: qualified referents and effects.
enum class Mode { Base, Full };

const char* mode_name(Mode m);
std::optional<Mode> parse_mode(const std::string& s);

struct Typing {
  QualifiedType type;
  Effect effect;
};

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string code, std::string rule, const std::string& message, Span span = {})
      : std::runtime_error(message), code_(std::move(code)), rule_(std::move(rule)), span_(span) {}

  const std::string& code() const { return code_; }
  const std::string& rule() const { return rule_; }
  Span span() const { return span_; }

  // Named sets that explain the failure, usually saturations.
  std::vector<std::pair<std::string, NameSet>> witnesses;
  // Unobserved names that would have let the judgment go through.
  NameSet needed;

 private:
  std::string code_;
  std::string rule_;
  Span span_;
};

// Per-node facts recorded by the checker.
struct ElabNode {
  Typing typing;
  NameSet observation;
  std::shared_ptr<const TypeEnv> env;
  std::string rule;
  Qualifier referent;              // RefAlloc: referent qualifier of the new cell
  std::optional<FunType> callee;   // App: function type as seen at the call
};

struct Elaborated {
  // Private copy of the input with distinct node addresses. Binders that
  // would shadow a variable in scope are renamed apart.
  TermPtr term;
  Mode mode = Mode::Full;
  TypeEnv env;
  Typing typing;
  std::unordered_map<const Term*, ElabNode> nodes;
  std::vector<std::string> warnings;
  std::map<std::string, std::size_t> rule_hits;

  const ElabNode& at(const Term& t) const;
  const ElabNode& at(const TermPtr& t) const { return at(*t); }
};

// Throws TypeError. Structural problems in the environment surface as
// InvariantError.
Elaborated typecheck(const TypeEnv& env, const TermPtr& t, Mode mode);
std::variant<Elaborated, TypeError> try_typecheck(const TypeEnv& env, const TermPtr& t,
                                                  Mode mode);

// The smallest observation, grown from fv(t) and within env.observation(),
// under which t checks. Throws the last TypeError when none does.
NameSet least_observation(const TypeEnv& env, const TermPtr& t, Mode mode);

// Structural subtyping on qualified types.
bool check_subtype(const TypeEnv& env, const QualifiedType& a, const QualifiedType& b);

}  // namespace reach

#endif  // REACH_TYPECHECK_HPP_
