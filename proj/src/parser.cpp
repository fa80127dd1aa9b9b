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

#include "reach/parser.hpp"

#include <cctype>
#include <vector>

namespace reach {

namespace {

enum class Tok { LParen, RParen, LBrace, RBrace, Caret, Colon, Arrow, Slash, Bang, Walrus, Ident, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    Span here{line, col};
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    auto single = [&](Tok k) {
      out.push_back({k, std::string(1, c), here});
      bump(1);
    };
    switch (c) {
      case '(': single(Tok::LParen); continue;
      case ')': single(Tok::RParen); continue;
      case '{': single(Tok::LBrace); continue;
      case '}': single(Tok::RBrace); continue;
      case '^': single(Tok::Caret); continue;
      case '/': single(Tok::Slash); continue;
      case '!': single(Tok::Bang); continue;
      default: break;
    }
    if (c == ':') {
      if (i + 1 < src.size() && src[i + 1] == '=') {
        out.push_back({Tok::Walrus, ":=", here});
        bump(2);
      } else {
        single(Tok::Colon);
      }
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({Tok::Arrow, "->", here});
      bump(2);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), here});
      bump(j - i);
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", here);
  }
  out.push_back({Tok::End, "", Span{line, col}});
  return out;
}

bool reserved(const std::string& s) {
  static const char* words[] = {"true", "false", "lam", "app", "ref", "seq",
                                "fresh", "self", "Bool", "Ref"};
  for (const char* w : words) {
    if (s == w) return true;
  }
  return false;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  void finish() {
    if (peek().kind != Tok::End) fail("trailing input '" + peek().text + "'");
  }

  TermPtr term() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      next();
      if (t.text == "true") return mk::constant(true, t.span);
      if (t.text == "false") return mk::constant(false, t.span);
      if (reserved(t.text)) fail_at("keyword '" + t.text + "' is not a term", t.span);
      return mk::var(t.text, t.span);
    }
    Span open = expect(Tok::LParen, "'('").span;
    const Token& head = next();
    TermPtr out;
    if (head.kind == Tok::Bang) {
      out = mk::deref(term(), open);
    } else if (head.kind == Tok::Walrus) {
      TermPtr a = term();
      out = mk::assign(a, term(), open);
    } else if (head.kind == Tok::Ident && head.text == "lam") {
      Qualifier q = qualifier();
      expect(Tok::LParen, "'('");
      Name x = binder();
      expect(Tok::Colon, "':'");
      QualifiedType ty = qtype();
      expect(Tok::RParen, "')'");
      out = mk::abs(std::move(q), std::move(x), std::move(ty), term(), open);
    } else if (head.kind == Tok::Ident && head.text == "app") {
      TermPtr f = term();
      out = mk::app(f, term(), open);
    } else if (head.kind == Tok::Ident && head.text == "ref") {
      out = mk::ref(term(), open);
    } else if (head.kind == Tok::Ident && head.text == "seq") {
      TermPtr a = term();
      out = mk::seq(a, term(), open);
    } else {
      fail_at("expected a term form after '(' but found '" + head.text + "'", head.span);
    }
    expect(Tok::RParen, "')'");
    return out;
  }

  Qualifier qualifier() {
    expect(Tok::LBrace, "'{'");
    Qualifier q;
    while (peek().kind == Tok::Ident) {
      const Token& t = next();
      if (t.text == "fresh") {
        q.fresh = true;
      } else if (t.text == "self") {
        q.self_ref = true;
      } else if (reserved(t.text)) {
        fail_at("keyword '" + t.text + "' in a qualifier", t.span);
      } else {
        q.vars.insert(t.text);
      }
    }
    expect(Tok::RBrace, "'}'");
    return q;
  }

  Effect effect() {
    Span at = peek().span;
    Qualifier q = qualifier();
    if (q.fresh) fail_at("effects may not mention fresh", at);
    return Effect{q.vars, q.self_ref};
  }

  QualifiedType qtype() {
    PretypePtr p = pretype();
    expect(Tok::Caret, "'^'");
    return QualifiedType{p, qualifier()};
  }

 private:
  PretypePtr pretype() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "Bool") {
      next();
      return Pretype::boolean();
    }
    expect(Tok::LParen, "a type");
    if (peek().kind == Tok::Ident && peek().text == "Ref") {
      next();
      QualifiedType inner = qtype();
      expect(Tok::RParen, "')'");
      return Pretype::ref(std::move(inner));
    }
    expect(Tok::LParen, "'Ref' or '('");
    Name x = binder();
    expect(Tok::Colon, "':'");
    QualifiedType dom = qtype();
    expect(Tok::RParen, "')'");
    expect(Tok::Arrow, "'->'");
    QualifiedType cod = qtype();
    expect(Tok::Slash, "'/'");
    Effect eff = effect();
    expect(Tok::RParen, "')'");
    return Pretype::fun(std::move(x), std::move(dom), std::move(eff), std::move(cod));
  }

  Name binder() {
    const Token& t = next();
    if (t.kind != Tok::Ident || reserved(t.text)) {
      fail_at("expected a variable name but found '" + t.text + "'", t.span);
    }
    return t.text;
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      fail(std::string("expected ") + what + " but found " +
           (peek().kind == Tok::End ? std::string("end of input") : "'" + peek().text + "'"));
    }
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) { fail_at(msg, peek().span); }
  [[noreturn]] void fail_at(const std::string& msg, Span s) { throw ParseError(msg, s); }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

TermPtr parse_term(std::string_view src) {
  Parser p(src);
  TermPtr t = p.term();
  p.finish();
  return t;
}

QualifiedType parse_qualified_type(std::string_view src) {
  Parser p(src);
  QualifiedType t = p.qtype();
  p.finish();
  return t;
}

Qualifier parse_qualifier(std::string_view src) {
  Parser p(src);
  Qualifier q = p.qualifier();
  p.finish();
  return q;
}

Effect parse_effect(std::string_view src) {
  Parser p(src);
  Effect e = p.effect();
  p.finish();
  return e;
}

}  // namespace reach
