#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "alpc/formula.hpp"

namespace alpc {

// Parse failure with 1-based position info and the token classes that
// would have been accepted at that point.
struct ParseError : Error {
  ParseError(int line, int col, std::string detail, std::vector<std::string> expected)
      : Error(format(line, col, detail, expected)),
        line(line),
        col(col),
        detail(std::move(detail)),
        expected(std::move(expected)) {}

  static std::string format(int line, int col, const std::string& detail,
                            const std::vector<std::string>& expected) {
    std::ostringstream out;
    out << line << ':' << col << ": " << detail;
    if (!expected.empty()) {
      out << " (expected ";
      for (std::size_t k = 0; k < expected.size(); ++k) {
        if (k) out << ", ";
        out << expected[k];
      }
      out << ')';
    }
    return out.str();
  }

  int line;
  int col;
  std::string detail;
  std::vector<std::string> expected;
};

namespace detail {

enum class Tok {
  Ident,
  Bang,
  Amp,
  Pipe,
  Arrow,
  DArrow,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  End,
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::DArrow: return "'<->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const int line = line_, col = col_;
    if (pos_ >= src_.size()) return {Tok::End, "", line, col};
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                    src_[pos_] == '_'))
        advance();
      return {Tok::Ident, std::string(src_.substr(start, pos_ - start)), line, col};
    }
    switch (c) {
      case '!': advance(); return {Tok::Bang, "!", line, col};
      case '&': advance(); return {Tok::Amp, "&", line, col};
      case '|': advance(); return {Tok::Pipe, "|", line, col};
      case '(': advance(); return {Tok::LParen, "(", line, col};
      case ')': advance(); return {Tok::RParen, ")", line, col};
      case '[': advance(); return {Tok::LBracket, "[", line, col};
      case ']': advance(); return {Tok::RBracket, "]", line, col};
      case ',': advance(); return {Tok::Comma, ",", line, col};
      case '-':
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
          advance();
          advance();
          return {Tok::Arrow, "->", line, col};
        }
        break;
      case '<':
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == '-' && src_[pos_ + 2] == '>') {
          advance();
          advance();
          advance();
          return {Tok::DArrow, "<->", line, col};
        }
        break;
      default:
        break;
    }
    throw ParseError(line, col, std::string("stray character '") + c + "'", {});
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      advance();
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { cur_ = lexer_.next(); }

  Formula parse() {
    Formula f = parse_iff();
    if (cur_.kind != Tok::End)
      throw ParseError(cur_.line, cur_.col, "trailing input after formula",
                       {tok_name(Tok::End)});
    return f;
  }

 private:
  Formula parse_iff() {
    Formula l = parse_implies();
    if (accept(Tok::DArrow)) return iff(std::move(l), parse_iff());
    return l;
  }

  Formula parse_implies() {
    Formula l = parse_or();
    if (accept(Tok::Arrow)) return implies(std::move(l), parse_implies());
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (accept(Tok::Pipe)) l = disj(std::move(l), parse_and());
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (accept(Tok::Amp)) l = conj(std::move(l), parse_unary());
    return l;
  }

  Formula parse_unary() {
    if (accept(Tok::Bang)) return neg(parse_unary());
    if (cur_.kind == Tok::Ident && is_operator_head()) return parse_modal();
    return parse_primary();
  }

  // An identifier introduces a modal operator only when it is one of
  // the operator letters immediately followed by '['; otherwise it is
  // an atom ("A", "C" etc. remain usable as atom names).
  bool is_operator_head() {
    const std::string& t = cur_.text;
    if (t != "A" && t != "E" && t != "K" && t != "I" && t != "X" && t != "C")
      return false;
    return lexer_probe().kind == Tok::LBracket;
  }

  Token lexer_probe() {
    Lexer saved = lexer_;
    return saved.next();
  }

  Formula parse_modal() {
    const std::string head = cur_.text;
    next_token();
    expect(Tok::LBracket);
    if (head == "I") {
      Token name = expect(Tok::Ident);
      expect(Tok::RBracket);
      return implicit_k(Agent{name.text}, parse_unary());
    }
    std::vector<Agent> members;
    members.push_back(Agent{expect(Tok::Ident).text});
    while (accept(Tok::Comma)) members.push_back(Agent{expect(Tok::Ident).text});
    expect(Tok::RBracket);
    Chain theta(std::move(members));
    Formula body = parse_unary();
    if (head == "A") return aware(std::move(theta), std::move(body));
    if (head == "X") return box_indist(std::move(theta), std::move(body));
    if (head == "C") return cknow(std::move(theta), std::move(body));
    return explicit_k(std::move(theta), std::move(body));  // E and its alias K
  }

  Formula parse_primary() {
    if (cur_.kind == Tok::Ident) {
      std::string name = cur_.text;
      next_token();
      return atom(std::move(name));
    }
    if (accept(Tok::LParen)) {
      Formula f = parse_iff();
      expect(Tok::RParen);
      return f;
    }
    throw ParseError(cur_.line, cur_.col,
                     "unexpected " + describe(cur_),
                     {tok_name(Tok::Ident), tok_name(Tok::LParen), tok_name(Tok::Bang)});
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }

  bool accept(Tok kind) {
    if (cur_.kind != kind) return false;
    next_token();
    return true;
  }

  Token expect(Tok kind) {
    if (cur_.kind != kind)
      throw ParseError(cur_.line, cur_.col, "unexpected " + describe(cur_),
                       {tok_name(kind)});
    Token t = cur_;
    next_token();
    return t;
  }

  void next_token() { cur_ = lexer_.next(); }

  Lexer lexer_;
  Token cur_;
};

}  // namespace detail

inline Formula parse_formula(std::string_view text) {
  return detail::Parser(text).parse();
}

}  // namespace alpc
