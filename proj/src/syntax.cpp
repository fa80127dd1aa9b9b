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

#include "reach/syntax.hpp"

#include <algorithm>
#include <sstream>

namespace reach {

namespace {

std::string join_names(const NameSet& s) {
  std::string out;
  for (const auto& n : s) {
    if (!out.empty()) out += ' ';
    out += n;
  }
  return out;
}

}  // namespace

PretypePtr Pretype::boolean() {
  static const PretypePtr b = std::make_shared<const Pretype>(BoolType{});
  return b;
}

PretypePtr Pretype::ref(QualifiedType inner) {
  if (!inner.pretype) throw InvariantError("wf-type", "reference to a missing type");
  if (inner.qual.has_markers()) {
    throw InvariantError("wf-type", "referent qualifier " + to_string(inner.qual) +
                                        " may not carry fresh or self");
  }
  return std::make_shared<const Pretype>(RefType{std::move(inner)});
}

PretypePtr Pretype::fun(Name param, QualifiedType domain, Effect latent,
                        QualifiedType codomain) {
  if (!domain.pretype || !codomain.pretype) {
    throw InvariantError("wf-type", "function type with a missing component");
  }
  if (free_vars(*codomain.pretype).count(param)) {
    throw InvariantError("wf-type", "codomain pretype " + to_string(*codomain.pretype) +
                                        " mentions parameter " + param);
  }
  return std::make_shared<const Pretype>(
      FunType{std::move(param), std::move(domain), std::move(latent), std::move(codomain)});
}

NameSet free_vars(const QualifiedType& t) {
  NameSet out = free_vars(*t.pretype);
  out.insert(t.qual.vars.begin(), t.qual.vars.end());
  return out;
}

NameSet free_vars(const Pretype& t) {
  if (t.is_bool()) return {};
  if (const auto* r = t.as_ref()) return free_vars(r->inner);
  const auto& f = *t.as_fun();
  NameSet out = free_vars(f.domain);
  NameSet under = free_vars(f.codomain);
  under.insert(f.latent.vars.begin(), f.latent.vars.end());
  under.erase(f.param);
  out.insert(under.begin(), under.end());
  return out;
}

namespace {

Qualifier rename_in(const Qualifier& q, const Name& from, const Name& to) {
  if (!q.contains(from)) return q;
  Qualifier r = q;
  r.vars.erase(from);
  if (!to.empty()) r.vars.insert(to);
  return r;
}

Effect rename_in(const Effect& e, const Name& from, const Name& to) {
  if (!e.mentions(from)) return e;
  Effect r = e;
  r.vars.erase(from);
  if (!to.empty()) r.vars.insert(to);
  return r;
}

// An empty `to` erases the name.
PretypePtr rewrite_pretype(const PretypePtr& t, const Name& from, const Name& to);

QualifiedType rewrite_qt(const QualifiedType& t, const Name& from, const Name& to) {
  return QualifiedType{rewrite_pretype(t.pretype, from, to), rename_in(t.qual, from, to)};
}

PretypePtr rewrite_pretype(const PretypePtr& t, const Name& from, const Name& to) {
  if (t->is_bool()) return t;
  if (const auto* r = t->as_ref()) {
    return std::make_shared<const Pretype>(RefType{rewrite_qt(r->inner, from, to)});
  }
  const auto& f = *t->as_fun();
  FunType g = f;
  g.domain = rewrite_qt(f.domain, from, to);
  if (f.param != from) {
    g.codomain = rewrite_qt(f.codomain, from, to);
    g.latent = rename_in(f.latent, from, to);
  }
  return std::make_shared<const Pretype>(std::move(g));
}

bool alpha_equal_qt(const QualifiedType& a, const QualifiedType& b);

bool alpha_equal_pt(const Pretype& a, const Pretype& b) {
  if (a.is_bool() || b.is_bool()) return a.is_bool() && b.is_bool();
  if (const auto* ra = a.as_ref()) {
    const auto* rb = b.as_ref();
    return rb && alpha_equal_qt(ra->inner, rb->inner);
  }
  const auto* fa = a.as_fun();
  const auto* fb = b.as_fun();
  if (!fa || !fb) return false;
  if (!alpha_equal_qt(fa->domain, fb->domain)) return false;
  if (fa->param == fb->param) {
    return fa->latent == fb->latent && alpha_equal_qt(fa->codomain, fb->codomain);
  }
  // Rename b's parameter to a's when a's name is not already free in b.
  NameSet b_under = free_vars(fb->codomain);
  b_under.insert(fb->latent.vars.begin(), fb->latent.vars.end());
  if (b_under.count(fa->param)) return false;
  return fa->latent == rename_in(fb->latent, fb->param, fa->param) &&
         alpha_equal_qt(fa->codomain, rewrite_qt(fb->codomain, fb->param, fa->param));
}

bool alpha_equal_qt(const QualifiedType& a, const QualifiedType& b) {
  return a.qual == b.qual && alpha_equal_pt(*a.pretype, *b.pretype);
}

}  // namespace

bool alpha_equal(const Pretype& a, const Pretype& b) { return alpha_equal_pt(a, b); }
bool alpha_equal(const QualifiedType& a, const QualifiedType& b) {
  return alpha_equal_qt(a, b);
}

QualifiedType rename_free(const QualifiedType& t, const Name& from, const Name& to) {
  return rewrite_qt(t, from, to);
}
PretypePtr rename_free(const PretypePtr& t, const Name& from, const Name& to) {
  return rewrite_pretype(t, from, to);
}
QualifiedType erase_free(const QualifiedType& t, const Name& x) {
  return rewrite_qt(t, x, "");
}

// Terms.

std::vector<TermPtr> Term::children() const {
  return std::visit(
      [](const auto& n) -> std::vector<TermPtr> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Const> || std::is_same_v<T, Var>) {
          return {};
        } else if constexpr (std::is_same_v<T, Abs>) {
          return {n.body};
        } else if constexpr (std::is_same_v<T, App>) {
          return {n.fn, n.arg};
        } else if constexpr (std::is_same_v<T, RefAlloc>) {
          return {n.init};
        } else if constexpr (std::is_same_v<T, Deref>) {
          return {n.target};
        } else if constexpr (std::is_same_v<T, Assign>) {
          return {n.target, n.value};
        } else {
          return {n.first, n.second};
        }
      },
      node_);
}

namespace mk {

namespace {
TermPtr make(Term::Node n, Span s) { return std::make_shared<const Term>(std::move(n), s); }
void need(const TermPtr& t) {
  if (!t) throw InvariantError("syntax", "missing subterm");
}
}  // namespace

TermPtr constant(bool v, Span s) { return make(Const{v}, s); }
TermPtr var(Name x, Span s) { return make(Var{std::move(x)}, s); }

TermPtr abs(Qualifier captures, Name param, QualifiedType param_type, TermPtr body, Span s) {
  need(body);
  if (captures.has_markers()) {
    throw InvariantError("t-abs",
                         "abstraction qualifier " + to_string(captures) +
                             " may not carry fresh or self",
                         s);
  }
  if (!param_type.pretype) throw InvariantError("t-abs", "parameter without a type", s);
  return make(Abs{std::move(captures), std::move(param), std::move(param_type),
                  std::move(body)},
              s);
}

TermPtr app(TermPtr fn, TermPtr arg, Span s) {
  need(fn);
  need(arg);
  return make(App{std::move(fn), std::move(arg)}, s);
}
TermPtr ref(TermPtr init, Span s) {
  need(init);
  return make(RefAlloc{std::move(init)}, s);
}
TermPtr deref(TermPtr target, Span s) {
  need(target);
  return make(Deref{std::move(target)}, s);
}
TermPtr assign(TermPtr target, TermPtr value, Span s) {
  need(target);
  need(value);
  return make(Assign{std::move(target), std::move(value)}, s);
}
TermPtr seq(TermPtr first, TermPtr second, Span s) {
  need(first);
  need(second);
  return make(Seq{std::move(first), std::move(second)}, s);
}

QualifiedType qt(PretypePtr p, Qualifier q) { return QualifiedType{std::move(p), std::move(q)}; }

}  // namespace mk

NameSet free_vars(const Term& t) {
  if (const auto* v = t.as<Var>()) return {v->name};
  if (const auto* a = t.as<Abs>()) {
    NameSet out = free_vars(*a->body);
    out.erase(a->param);
    return out;
  }
  NameSet out;
  for (const auto& c : t.children()) {
    NameSet sub = free_vars(*c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

namespace {
void collect_type_names(const QualifiedType& t, NameSet& out) {
  out.insert(t.qual.vars.begin(), t.qual.vars.end());
  if (const auto* r = t.pretype->as_ref()) collect_type_names(r->inner, out);
  if (const auto* f = t.pretype->as_fun()) {
    out.insert(f->param);
    collect_type_names(f->domain, out);
    collect_type_names(f->codomain, out);
    out.insert(f->latent.vars.begin(), f->latent.vars.end());
  }
}
}  // namespace

NameSet all_names(const Term& t) {
  NameSet out;
  if (const auto* v = t.as<Var>()) out.insert(v->name);
  if (const auto* a = t.as<Abs>()) {
    out.insert(a->param);
    out.insert(a->captures.vars.begin(), a->captures.vars.end());
    collect_type_names(a->param_type, out);
  }
  for (const auto& c : t.children()) {
    NameSet sub = all_names(*c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : t.children()) n += term_size(*c);
  return n;
}

std::size_t term_depth(const Term& t) {
  std::size_t d = 0;
  for (const auto& c : t.children()) d = std::max(d, term_depth(*c));
  return d + 1;
}

TermPtr with_children(const Term& t, const std::vector<TermPtr>& k) {
  return std::visit(
      [&](const auto& n) -> TermPtr {
        using T = std::decay_t<decltype(n)>;
        Span s = t.span();
        if constexpr (std::is_same_v<T, Const>) {
          return mk::constant(n.value, s);
        } else if constexpr (std::is_same_v<T, Var>) {
          return mk::var(n.name, s);
        } else if constexpr (std::is_same_v<T, Abs>) {
          return mk::abs(n.captures, n.param, n.param_type, k.at(0), s);
        } else if constexpr (std::is_same_v<T, App>) {
          return mk::app(k.at(0), k.at(1), s);
        } else if constexpr (std::is_same_v<T, RefAlloc>) {
          return mk::ref(k.at(0), s);
        } else if constexpr (std::is_same_v<T, Deref>) {
          return mk::deref(k.at(0), s);
        } else if constexpr (std::is_same_v<T, Assign>) {
          return mk::assign(k.at(0), k.at(1), s);
        } else {
          return mk::seq(k.at(0), k.at(1), s);
        }
      },
      t.node());
}

TermPtr clone(const TermPtr& t) {
  std::vector<TermPtr> kids;
  for (const auto& c : t->children()) kids.push_back(clone(c));
  return with_children(*t, kids);
}

TermPath parse_path(const std::string& text) {
  TermPath out;
  if (text.empty() || text == "." || text == "root") return out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit)) {
      throw std::invalid_argument("malformed path: " + text);
    }
    out.push_back(std::stoi(part));
  }
  return out;
}

std::string path_to_string(const TermPath& p) {
  if (p.empty()) return ".";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

TermPtr subterm_at(const TermPtr& root, const TermPath& path) {
  TermPtr cur = root;
  for (int i : path) {
    auto kids = cur->children();
    if (i < 0 || static_cast<std::size_t>(i) >= kids.size()) {
      throw std::out_of_range("path " + path_to_string(path) + " leaves the term");
    }
    cur = kids[i];
  }
  return cur;
}

TermPtr replace_at(const TermPtr& root, const TermPath& path, TermPtr replacement) {
  if (path.empty()) return replacement;
  auto kids = root->children();
  int i = path.front();
  if (i < 0 || static_cast<std::size_t>(i) >= kids.size()) {
    throw std::out_of_range("path leaves the term");
  }
  kids[i] = replace_at(kids[i], TermPath(path.begin() + 1, path.end()), std::move(replacement));
  return with_children(*root, kids);
}

// Environments.

const QualifiedType* TypeEnv::lookup(const Name& x) const {
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it) {
    if (it->name == x) return &it->type;
  }
  return nullptr;
}

NameSet TypeEnv::names() const {
  NameSet out;
  for (const auto& b : bindings_) out.insert(b.name);
  return out;
}

TypeEnv TypeEnv::extend(const Name& x, QualifiedType type) const {
  if (contains(x)) throw InvariantError("wf-env", "variable " + x + " is already bound");
  for (const auto& y : type.qual.vars) {
    if (!contains(y)) {
      throw InvariantError("wf-env", "qualifier of " + x + " names " + y +
                                         ", which is not bound earlier");
    }
  }
  if (type.qual.self_ref) {
    throw InvariantError("wf-env", "binding " + x + " may not carry self");
  }
  TypeEnv out = *this;
  out.bindings_.push_back(Binding{x, std::move(type)});
  return out;
}

TypeEnv TypeEnv::observe(NameSet phi) const {
  TypeEnv out = *this;
  out.observation_ = std::move(phi);
  return out;
}

void TypeEnv::validate() const {
  NameSet seen;
  for (const auto& b : bindings_) {
    if (seen.count(b.name)) throw InvariantError("wf-env", "duplicate binding " + b.name);
    for (const auto& y : b.type.qual.vars) {
      if (!seen.count(y)) {
        throw InvariantError("wf-env", "qualifier of " + b.name + " names " + y +
                                           ", which is not bound earlier");
      }
    }
    if (b.type.qual.self_ref) throw InvariantError("wf-env", "binding " + b.name + " carries self");
    seen.insert(b.name);
  }
  for (const auto& y : observation_) {
    if (!seen.count(y)) throw InvariantError("wf-env", "observed variable " + y + " is unbound");
  }
}

ValueEnv ValueEnv::extend(const Name& x, Value v) const {
  ValueEnv out;
  out.head_ = std::make_shared<const Node>(Node{x, std::move(v), head_});
  return out;
}

const Value* ValueEnv::lookup(const Name& x) const {
  for (const Node* n = head_.get(); n; n = n->next.get()) {
    if (n->name == x) return &n->value;
  }
  return nullptr;
}

std::vector<std::pair<Name, Value>> ValueEnv::entries() const {
  std::vector<std::pair<Name, Value>> out;
  for (const Node* n = head_.get(); n; n = n->next.get()) out.emplace_back(n->name, n->value);
  return out;
}

// Printing.

std::string to_string(const NameSet& s) { return "{" + join_names(s) + "}"; }

std::string to_string(const Qualifier& q) {
  std::string body = join_names(q.vars);
  auto add = [&](const char* w) {
    if (!body.empty()) body += ' ';
    body += w;
  };
  if (q.fresh) add("fresh");
  if (q.self_ref) add("self");
  return "{" + body + "}";
}

std::string to_string(const Effect& e) {
  std::string body = join_names(e.vars);
  if (e.self_ref) body += body.empty() ? "self" : " self";
  return "{" + body + "}";
}

std::string to_string(const Pretype& t) {
  if (t.is_bool()) return "Bool";
  if (const auto* r = t.as_ref()) return "(Ref " + to_string(r->inner) + ")";
  const auto& f = *t.as_fun();
  return "((" + f.param + ": " + to_string(f.domain) + ") -> " + to_string(f.codomain) +
         " / " + to_string(f.latent) + ")";
}

std::string to_string(const QualifiedType& t) {
  return to_string(*t.pretype) + "^" + to_string(t.qual);
}

std::string to_string(const Term& t) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Const>) {
          return n.value ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Abs>) {
          return "(lam " + to_string(n.captures) + " (" + n.param + ": " +
                 to_string(n.param_type) + ") " + to_string(*n.body) + ")";
        } else if constexpr (std::is_same_v<T, App>) {
          return "(app " + to_string(*n.fn) + " " + to_string(*n.arg) + ")";
        } else if constexpr (std::is_same_v<T, RefAlloc>) {
          return "(ref " + to_string(*n.init) + ")";
        } else if constexpr (std::is_same_v<T, Deref>) {
          return "(! " + to_string(*n.target) + ")";
        } else if constexpr (std::is_same_v<T, Assign>) {
          return "(:= " + to_string(*n.target) + " " + to_string(*n.value) + ")";
        } else {
          return "(seq " + to_string(*n.first) + " " + to_string(*n.second) + ")";
        }
      },
      t.node());
}

std::string to_string(const Value& v) {
  if (v.is_bool()) return v.as_bool() ? "true" : "false";
  if (v.is_loc()) return "loc:" + std::to_string(v.as_loc());
  return "<closure q=" + to_string(v.as_closure().qual) + ">";
}

}  // namespace reach
