#pragma once

// Text syntax:
//   formula := "E" var "." formula | "A" var "." formula | disj [ "->" formula ]
//   disj    := conj { "|" conj }
//   conj    := lit { "&" lit }
//   lit     := "!" lit | "(" formula ")" | quantifier | atom
//   atom    := term "=" term | term "!=" term | "R" INT "(" term ")" | "P(" term ")"
//            | "true" | "false"
//   term    := factor { "*" factor }
//   factor  := base { "^" SINT }
//   base    := var | NUM [ "/" NUM ] | "-" NUM [ "/" NUM ] | "w" INT | "(" term ")"
//
// Besides 0, 1 and -1, any rational literal is accepted as a constant.

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "muldecide/errors.hpp"
#include "muldecide/formula.hpp"

namespace muldecide {

namespace detail {

enum class Tok {
  Var,
  Num,
  Exists,
  Forall,
  Rn,
  Pos,
  Omega,
  True,
  False,
  Minus,
  Slash,
  Caret,
  Star,
  Eq,
  Neq,
  Bang,
  Amp,
  Bar,
  Arrow,
  LParen,
  RParen,
  Dot,
  End
};

struct Token {
  Tok kind;
  std::string text;
  Int value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline bool ident_start(char c) { return std::islower(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline Int parse_int_literal(std::string_view digits, std::size_t line, std::size_t col) {
  Int v = 0;
  for (char c : digits) {
    if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, c - '0', &v)) {
      throw ParseError("integer literal out of range", line, col);
    }
  }
  return v;
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
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
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t{Tok::End, {}, 0, line, col};
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Num;
      t.text = std::string(src.substr(i, j - i));
      t.value = parse_int_literal(t.text, line, col);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      t.text = word;
      auto all_digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); });
      };
      if (word == "E" || word == "A") {
        t.kind = word == "E" ? Tok::Exists : Tok::Forall;
      } else if ((word[0] == 'E' || word[0] == 'A') && ident_start(word[1])) {
        // "Ex" is read as "E x"
        t.kind = word[0] == 'E' ? Tok::Exists : Tok::Forall;
        t.text = word.substr(0, 1);
        out.push_back(t);
        advance(1);
        Token v{Tok::Var, word.substr(1), 0, line, col};
        advance(word.size() - 1);
        out.push_back(v);
        continue;
      } else if (word == "P") {
        t.kind = Tok::Pos;
      } else if (word[0] == 'R' && all_digits(std::string_view(word).substr(1))) {
        t.kind = Tok::Rn;
        t.value = parse_int_literal(std::string_view(word).substr(1), line, col);
      } else if (word[0] == 'w' && all_digits(std::string_view(word).substr(1))) {
        t.kind = Tok::Omega;
        t.value = parse_int_literal(std::string_view(word).substr(1), line, col);
      } else if (word == "true") {
        t.kind = Tok::True;
      } else if (word == "false") {
        t.kind = Tok::False;
      } else if (ident_start(word[0])) {
        t.kind = Tok::Var;
      } else {
        throw ParseError("unknown symbol '" + word + "'", line, col);
      }
      advance(j - i);
      out.push_back(t);
      continue;
    }
    auto two = [&](std::string_view s) { return src.substr(i, 2) == s; };
    if (two("!=")) {
      t.kind = Tok::Neq;
    } else if (two("->")) {
      t.kind = Tok::Arrow;
    } else {
      switch (c) {
        case '-': t.kind = Tok::Minus; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        case '*': t.kind = Tok::Star; break;
        case '=': t.kind = Tok::Eq; break;
        case '!': t.kind = Tok::Bang; break;
        case '&': t.kind = Tok::Amp; break;
        case '|': t.kind = Tok::Bar; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '.': t.kind = Tok::Dot; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    const std::size_t len = (t.kind == Tok::Neq || t.kind == Tok::Arrow) ? 2 : 1;
    t.text = std::string(src.substr(i, len));
    advance(len);
    out.push_back(t);
  }
  out.push_back(Token{Tok::End, "end of input", 0, line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Formula parse_formula_all() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

  Term parse_term_all() {
    Term t = term();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw ParseError("expected " + what + " but found '" + t.text + "'", t.line, t.column);
  }

  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return take();
  }

  Formula formula() {
    if (at(Tok::Exists) || at(Tok::Forall)) return quantifier();
    Formula lhs = disj();
    if (at(Tok::Arrow)) {
      take();
      Formula rhs = formula();
      return Formula::disjunction({Formula::negation(lhs), rhs});
    }
    return lhs;
  }

  Formula quantifier() {
    const bool ex = take().kind == Tok::Exists;
    std::string v = expect(Tok::Var, "variable").text;
    expect(Tok::Dot, "'.'");
    Formula body = formula();
    return ex ? Formula::exists(v, body) : Formula::forall(v, body);
  }

  Formula disj() {
    std::vector<Formula> args{conj()};
    while (at(Tok::Bar)) {
      take();
      args.push_back(conj());
    }
    return Formula::disjunction(std::move(args));
  }

  Formula conj() {
    std::vector<Formula> args{lit()};
    while (at(Tok::Amp)) {
      take();
      args.push_back(lit());
    }
    return Formula::conjunction(std::move(args));
  }

  Formula lit() {
    if (at(Tok::Bang)) {
      take();
      return Formula::negation(lit());
    }
    if (at(Tok::Exists) || at(Tok::Forall)) return quantifier();
    if (at(Tok::LParen)) {
      const std::size_t save = pos_;
      try {
        return atom();
      } catch (const ParseError&) {
        pos_ = save;
      }
      take();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return atom();
  }

  Formula atom() {
    if (at(Tok::True)) {
      take();
      return Formula::truth(true);
    }
    if (at(Tok::False)) {
      take();
      return Formula::truth(false);
    }
    if (at(Tok::Rn)) {
      const Token& t = take();
      if (t.value < 2) throw ParseError("R_n needs n >= 2", t.line, t.column);
      expect(Tok::LParen, "'('");
      Monomial m = normalize_term(term(), TermContext::MonoidWithZero);
      expect(Tok::RParen, "')'");
      return Formula(Atom::power(t.value, std::move(m)));
    }
    if (at(Tok::Pos)) {
      take();
      expect(Tok::LParen, "'('");
      Monomial m = normalize_term(term(), TermContext::MonoidWithZero);
      expect(Tok::RParen, "')'");
      return Formula(Atom::positive(std::move(m)));
    }
    Monomial lhs = normalize_term(term(), TermContext::MonoidWithZero);
    if (!at(Tok::Eq) && !at(Tok::Neq)) fail("'=' or '!='");
    const bool neq = take().kind == Tok::Neq;
    Monomial rhs = normalize_term(term(), TermContext::MonoidWithZero);
    Formula eq(Atom::eq(std::move(lhs), std::move(rhs)));
    return neq ? Formula::negation(eq) : eq;
  }

  Term term() {
    Term t = factor();
    while (at(Tok::Star)) {
      take();
      t = Term::mul(t, factor());
    }
    return t;
  }

  Term factor() {
    Term b = base();
    while (at(Tok::Caret)) {
      take();
      bool negative = false;
      if (at(Tok::Minus)) {
        take();
        negative = true;
      }
      const Int k = expect(Tok::Num, "integer exponent").value;
      b = (negative && k == 1) ? Term::inv(b) : Term::pow(b, negative ? -k : k);
    }
    return b;
  }

  Scalar rational_literal(bool negative) {
    const Token& n = expect(Tok::Num, "number");
    Int den = 1;
    if (at(Tok::Slash)) {
      take();
      const Token& d = expect(Tok::Num, "denominator");
      if (d.value == 0) throw ParseError("zero denominator", d.line, d.column);
      den = d.value;
    }
    return Scalar::from_fraction(negative ? -n.value : n.value, den);
  }

  Term base() {
    if (at(Tok::Var)) return Term::var(take().text);
    if (at(Tok::Num)) return Term::constant(rational_literal(false));
    if (at(Tok::Minus)) {
      take();
      return Term::constant(rational_literal(true));
    }
    if (at(Tok::Omega)) {
      const Token& t = take();
      if (t.value < 3) throw ParseError("w_n needs n >= 3 (write -1 for the square root of unity)", t.line, t.column);
      return Term::constant(Scalar::omega(t.value));
    }
    if (at(Tok::LParen)) {
      take();
      Term t = term();
      expect(Tok::RParen, "')'");
      return t;
    }
    fail("term");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_formula(std::string_view src) { return detail::Parser(src).parse_formula_all(); }

inline Term parse_term(std::string_view src) { return detail::Parser(src).parse_term_all(); }

}  // namespace muldecide
