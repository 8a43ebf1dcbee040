#include "copath/sexpr.hpp"

#include <cctype>

#include "copath/error.hpp"

namespace copath {

namespace {

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  Sexpr read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == ')') fail("unbalanced ')'");
    if (c == '(') {
      ++pos_;
      Sexpr list;
      list.is_list = true;
      while (true) {
        skip();
        if (pos_ >= text_.size()) fail("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    Sexpr atom;
    if (c == '"') {
      ++pos_;
      while (true) {
        if (pos_ >= text_.size()) fail("unterminated string");
        char s = text_[pos_++];
        if (s == '"') {
          // SMT-LIB escapes a quote by doubling it
          if (pos_ < text_.size() && text_[pos_] == '"') {
            atom.atom += '"';
            ++pos_;
            continue;
          }
          return atom;
        }
        atom.atom += s;
      }
    }
    if (c == '|') {
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '|') atom.atom += text_[pos_++];
      if (pos_ >= text_.size()) fail("unterminated quoted symbol");
      ++pos_;
      return atom;
    }
    while (pos_ < text_.size()) {
      char s = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(s)) || s == '(' || s == ')' ||
          s == ';')
        break;
      atom.atom += s;
      ++pos_;
    }
    return atom;
  }

private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line_;
        ++pos_;
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& why) {
    throw ParseError("<transcript>", line_, why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

std::vector<Sexpr> parse_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<Sexpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

std::string to_string(const Sexpr& e) {
  if (!e.is_list) return e.atom;
  std::string s = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) s += ' ';
    s += to_string(e.items[i]);
  }
  return s + ")";
}

}  // namespace copath
