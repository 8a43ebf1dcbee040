#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace copath {

/// Minimal S-expression tree for reading SMT-LIB solver responses.
struct Sexpr {
  bool is_list = false;
  std::string atom;  // symbol, numeral, or string literal without quotes
  std::vector<Sexpr> items;

  bool is_atom(std::string_view text) const { return !is_list && atom == text; }
};

/// Parses every top-level expression; throws ParseError on unbalanced input.
std::vector<Sexpr> parse_sexprs(std::string_view text);

std::string to_string(const Sexpr& e);

}  // namespace copath
