#include <cctype>

#include "semgame/ltl.hpp"

namespace semgame {

ParseError::ParseError(const std::string& msg, std::size_t position)
    : std::runtime_error("parse error at position " + std::to_string(position) + ": " + msg), position_(position) {}

namespace {

// Recursive descent over
//   equiv ::= impl ('<->' impl)*
//   impl  ::= or ('->' impl)?
//   or    ::= and ('|' and)*
//   and   ::= binary ('&' binary)*
//   binary::= unary (('U'|'R') binary)?
//   unary ::= ('!'|'X'|'F'|'G') unary | primary
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse_all() {
    Formula f = parse_equiv();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_arrow(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  Formula parse_equiv() {
    Formula lhs = parse_impl();
    while (accept_arrow("<->")) {
      Formula rhs = parse_impl();
      lhs = make_or(make_and(lhs, rhs), make_and(make_not(lhs), make_not(rhs)));
    }
    return lhs;
  }

  Formula parse_impl() {
    Formula lhs = parse_or();
    if (accept_arrow("->"))
      return make_or(make_not(lhs), parse_impl());
    return lhs;
  }

  // atoms start lowercase, so uppercase operator letters never clash with them
  bool accept_keyword(char c) { return accept(c); }

  Formula parse_or() {
    std::vector<Formula> kids{parse_and()};
    while (accept('|'))
      kids.push_back(parse_and());
    return kids.size() == 1 ? kids.front() : make_or(std::move(kids));
  }

  Formula parse_and() {
    std::vector<Formula> kids{parse_binary()};
    while (accept('&'))
      kids.push_back(parse_binary());
    return kids.size() == 1 ? kids.front() : make_and(std::move(kids));
  }

  Formula parse_binary() {
    Formula lhs = parse_unary();
    if (accept_keyword('U'))
      return make_until(lhs, parse_binary());
    if (accept_keyword('R'))
      return make_release(lhs, parse_binary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept('!'))
      return make_not(parse_unary());
    if (accept_keyword('X'))
      return make_next(parse_unary());
    if (accept_keyword('F'))
      return make_finally(parse_unary());
    if (accept_keyword('G'))
      return make_globally(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("unexpected end of input", pos_);
    if (accept('(')) {
      Formula f = parse_equiv();
      if (!accept(')'))
        throw ParseError("expected ')'", pos_);
      return f;
    }
    const std::size_t start = pos_;
    if (!std::islower(static_cast<unsigned char>(text_[pos_])))
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);
    if (word == "tt")
      return Formula::tt();
    if (word == "ff")
      return Formula::ff();
    return Formula::atom(word);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace semgame
