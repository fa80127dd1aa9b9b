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

#ifndef REACH_TESTS_SUPPORT_HPP_
#define REACH_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <fstream>
#include <sstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "reach/parser.hpp"
#include "reach/syntax.hpp"

namespace reach::testing {

// Environment from (name, qualified type) pairs, observing every name.
inline TypeEnv env_of(const std::vector<std::pair<std::string, std::string>>& bindings) {
  TypeEnv env;
  NameSet all;
  for (const auto& [x, ty] : bindings) {
    env = env.extend(x, parse_qualified_type(ty));
    all.insert(x);
  }
  return env.observe(all);
}

#ifdef REACH_FIXTURES
inline std::string fixture(const std::string& name) {
  std::ifstream in(std::string(REACH_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
#endif

inline Qualifier q(const std::string& s) { return parse_qualifier(s); }
inline NameSet names(std::initializer_list<const char*> xs) {
  NameSet out;
  for (const char* x : xs) out.insert(x);
  return out;
}

// Small deterministic generator for property tests.
class Random {
 public:
  explicit Random(std::uint64_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return n == 0 ? 0 : g_() % n; }
  bool coin(int percent = 50) { return below(100) < static_cast<std::size_t>(percent); }

  // Bindings v0..v{n-1}; each qualifier names a random subset of earlier
  // bindings and is fresh with some probability.
  TypeEnv env(std::size_t n) {
    TypeEnv e;
    NameSet all;
    for (std::size_t i = 0; i < n; ++i) {
      Qualifier qual;
      for (std::size_t j = 0; j < i; ++j) {
        if (coin(30)) qual.vars.insert(var(j));
      }
      qual.fresh = coin(40);
      e = e.extend(var(i), mk::qt(Pretype::ref(mk::qt(Pretype::boolean())), qual));
      all.insert(var(i));
    }
    return e.observe(all);
  }

  NameSet subset(const NameSet& of, int percent = 40) {
    NameSet out;
    for (const auto& x : of) {
      if (coin(percent)) out.insert(x);
    }
    return out;
  }

  Qualifier qualifier(const NameSet& of, bool markers = true) {
    return Qualifier{subset(of), markers && coin(30), markers && coin(15)};
  }

  static std::string var(std::size_t i) { return "v" + std::to_string(i); }

 private:
  std::mt19937_64 g_;
};

}  // namespace reach::testing

#endif  // REACH_TESTS_SUPPORT_HPP_
