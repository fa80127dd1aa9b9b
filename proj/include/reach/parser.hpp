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

#ifndef REACH_PARSER_HPP_
#define REACH_PARSER_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

#include "reach/syntax.hpp"

namespace reach {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, Span span)
      : std::runtime_error(message), span_(span) {}
  Span span() const { return span_; }

 private:
  Span span_;
};

// Each entry point consumes the whole input. Shape violations found while
// building nodes surface as InvariantError.
TermPtr parse_term(std::string_view src);
QualifiedType parse_qualified_type(std::string_view src);
Qualifier parse_qualifier(std::string_view src);
Effect parse_effect(std::string_view src);

}  // namespace reach

#endif  // REACH_PARSER_HPP_
