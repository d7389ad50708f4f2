#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lcm/syntax.hpp"

namespace lcm {

class ParseError : public std::runtime_error {
 public:
  ParseError(Span span, std::size_t offset, std::vector<std::string> expected, std::string found);

  Span span() const { return span_; }
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  Span span_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Parses a whole source file. A token in column 1 starts a new declaration;
/// everything else is whitespace-insensitive. Clauses are desugared into
/// lambdas and a match on the single dispatching parameter.
Program parse_program(std::string_view text);

TermRef parse_term(std::string_view text);
TypeRef parse_type(std::string_view text);

}  // namespace lcm
