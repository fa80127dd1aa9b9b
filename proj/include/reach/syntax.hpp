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

#ifndef REACH_SYNTAX_HPP_
#define REACH_SYNTAX_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace reach {

using Name = std::string;
using NameSet = std::set<Name>;

// Source position, 1-based. Synthesized nodes carry line 0.
struct Span {
  int line = 0;
  int column = 0;
};

// Raised when a term, type or environment would violate a structural
// invariant. `rule` names the typing rule whose premise the shape breaks.
class InvariantError : public std::runtime_error {
 public:
  InvariantError(std::string rule, const std::string& message, Span span = {})
      : std::runtime_error(message), rule_(std::move(rule)), span_(span) {}
  const std::string& rule() const { return rule_; }
  Span span() const { return span_; }

 private:
  std::string rule_;
  Span span_;
};

// A reachability qualifier: variable names plus the fresh and self markers.
struct Qualifier {
  NameSet vars;
  bool fresh = false;
  bool self_ref = false;

  static Qualifier of(NameSet vars, bool fresh = false, bool self_ref = false) {
    return Qualifier{std::move(vars), fresh, self_ref};
  }
  static Qualifier fresh_only() { return Qualifier{{}, true, false}; }

  bool empty() const { return vars.empty() && !fresh && !self_ref; }
  bool has_markers() const { return fresh || self_ref; }
  bool contains(const Name& x) const { return vars.count(x) != 0; }
  bool operator==(const Qualifier&) const = default;
};

// The variable part of a qualifier.
inline Qualifier strip_markers(const Qualifier& q) { return Qualifier{q.vars}; }

// A use/mutation effect. Only the self marker may appear.
struct Effect {
  NameSet vars;
  bool self_ref = false;

  bool empty() const { return vars.empty() && !self_ref; }
  bool mentions(const Name& x) const { return vars.count(x) != 0; }
  bool operator==(const Effect&) const = default;
};

class Pretype;
using PretypePtr = std::shared_ptr<const Pretype>;

struct QualifiedType {
  PretypePtr pretype;
  Qualifier qual;
};

struct BoolType {};
struct RefType {
  QualifiedType inner;
};
struct FunType {
  Name param;
  QualifiedType domain;
  Effect latent;
  QualifiedType codomain;
};

class Pretype {
 public:
  using Node = std::variant<BoolType, RefType, FunType>;

  static PretypePtr boolean();
  // Referent qualifiers may not carry markers.
  static PretypePtr ref(QualifiedType inner);
  // The codomain pretype may not mention the parameter.
  static PretypePtr fun(Name param, QualifiedType domain, Effect latent,
                        QualifiedType codomain);

  const Node& node() const { return node_; }
  bool is_bool() const { return std::holds_alternative<BoolType>(node_); }
  const RefType* as_ref() const { return std::get_if<RefType>(&node_); }
  const FunType* as_fun() const { return std::get_if<FunType>(&node_); }

  explicit Pretype(Node node) : node_(std::move(node)) {}

 private:
  Node node_;
};

// Variables mentioned by a pretype, excluding bound parameters.
NameSet free_vars(const Pretype& t);
NameSet free_vars(const QualifiedType& t);

// Structural equality up to renaming of function parameters.
bool alpha_equal(const Pretype& a, const Pretype& b);
bool alpha_equal(const QualifiedType& a, const QualifiedType& b);

// Rename a free variable throughout the type. Parameters shield their scope.
QualifiedType rename_free(const QualifiedType& t, const Name& from, const Name& to);
PretypePtr rename_free(const PretypePtr& t, const Name& from, const Name& to);
// Drop `x` from every qualifier and effect in the type.
QualifiedType erase_free(const QualifiedType& t, const Name& x);

// Terms.
class Term;
using TermPtr = std::shared_ptr<const Term>;

struct Const {
  bool value;
};
struct Var {
  Name name;
};
struct Abs {
  Qualifier captures;  // observable captured variables, never markers
  Name param;
  QualifiedType param_type;
  TermPtr body;
};
struct App {
  TermPtr fn;
  TermPtr arg;
};
struct RefAlloc {
  TermPtr init;
};
struct Deref {
  TermPtr target;
};
struct Assign {
  TermPtr target;
  TermPtr value;
};
struct Seq {
  TermPtr first;
  TermPtr second;
};

class Term {
 public:
  using Node = std::variant<Const, Var, Abs, App, RefAlloc, Deref, Assign, Seq>;

  Term(Node node, Span span) : node_(std::move(node)), span_(span) {}
  const Node& node() const { return node_; }
  Span span() const { return span_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node_);
  }

  // Immediate subterms in path order.
  std::vector<TermPtr> children() const;

 private:
  Node node_;
  Span span_;
};

namespace mk {
TermPtr constant(bool v, Span s = {});
TermPtr var(Name x, Span s = {});
TermPtr abs(Qualifier captures, Name param, QualifiedType param_type, TermPtr body,
            Span s = {});
TermPtr app(TermPtr fn, TermPtr arg, Span s = {});
TermPtr ref(TermPtr init, Span s = {});
TermPtr deref(TermPtr target, Span s = {});
TermPtr assign(TermPtr target, TermPtr value, Span s = {});
TermPtr seq(TermPtr first, TermPtr second, Span s = {});

QualifiedType qt(PretypePtr p, Qualifier q = {});
}  // namespace mk

// Free term variables, binders excluded. Annotations are not counted.
NameSet free_vars(const Term& t);
// Every name appearing anywhere in the term, including binders and annotations.
NameSet all_names(const Term& t);
std::size_t term_size(const Term& t);
std::size_t term_depth(const Term& t);

// Deep copy so that every node of the result has a distinct address.
TermPtr clone(const TermPtr& t);
// Rebuild `t` with a new child list, same arity and order as children().
TermPtr with_children(const Term& t, const std::vector<TermPtr>& kids);

// Paths address subterms by child index.
using TermPath = std::vector<int>;
TermPath parse_path(const std::string& text);
std::string path_to_string(const TermPath& p);
TermPtr subterm_at(const TermPtr& root, const TermPath& path);
TermPtr replace_at(const TermPtr& root, const TermPath& path, TermPtr replacement);

// Type environments. Bindings are ordered; a binding's qualifier may only
// name earlier bindings. `observation` is the observable subset.
struct Binding {
  Name name;
  QualifiedType type;
};

class TypeEnv {
 public:
  TypeEnv() = default;

  const std::vector<Binding>& bindings() const { return bindings_; }
  const NameSet& observation() const { return observation_; }
  const QualifiedType* lookup(const Name& x) const;
  bool contains(const Name& x) const { return lookup(x) != nullptr; }
  NameSet names() const;

  // Appends a binding; throws InvariantError if the name is taken or the
  // qualifier names a later or unknown variable.
  TypeEnv extend(const Name& x, QualifiedType type) const;
  TypeEnv observe(NameSet phi) const;
  // Checks distinct names, backward-only qualifiers and observation scope.
  void validate() const;

 private:
  std::vector<Binding> bindings_;
  NameSet observation_;
};

// Runtime values.
using Loc = std::size_t;
struct Closure;
using ClosurePtr = std::shared_ptr<const Closure>;

struct LocRef {
  Loc index;
  bool operator==(const LocRef&) const = default;
};

class Value {
 public:
  Value() : v_(false) {}
  static Value boolean(bool b) { return Value(b); }
  static Value loc(Loc l) { return Value(LocRef{l}); }
  static Value closure(ClosurePtr c) { return Value(std::move(c)); }

  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_loc() const { return std::holds_alternative<LocRef>(v_); }
  bool is_closure() const { return std::holds_alternative<ClosurePtr>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  Loc as_loc() const { return std::get<LocRef>(v_).index; }
  const Closure& as_closure() const { return *std::get<ClosurePtr>(v_); }

 private:
  explicit Value(std::variant<bool, LocRef, ClosurePtr> v) : v_(std::move(v)) {}
  std::variant<bool, LocRef, ClosurePtr> v_;
};

// Persistent association list; extension shares the tail.
class ValueEnv {
 public:
  ValueEnv extend(const Name& x, Value v) const;
  const Value* lookup(const Name& x) const;
  // Innermost binding first.
  std::vector<std::pair<Name, Value>> entries() const;

 private:
  struct Node {
    Name name;
    Value value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
};

struct Closure {
  ValueEnv env;
  Name param;
  TermPtr body;
  Qualifier qual;
};

// Indexed by location in allocation order.
using Store = std::vector<Value>;

// Surface printing.
std::string to_string(const Qualifier& q);
std::string to_string(const Effect& e);
std::string to_string(const Pretype& t);
std::string to_string(const QualifiedType& t);
std::string to_string(const Term& t);
std::string to_string(const Value& v);
std::string to_string(const NameSet& s);

}  // namespace reach

#endif  // REACH_SYNTAX_HPP_
