#pragma once

// Canonical text syntax for polynomials:
//
//   expr   := term (('+'|'-') term)*
//   term   := ('+'|'-')* factor (['*'] factor)*
//   factor := number | identifier '*'* | '(' expr ')'
//
// A '*' directly after an identifier (whitespace allowed) stars it; after a
// number or ')' it is explicit multiplication. Juxtaposition multiplies.
// Numbers accept a trailing 'j' for imaginary literals. The printer emits
// `coeff * x y* ...` terms joined by " + " in lexicographic word order, and
// its output parses back to the same polynomial.

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>

#include "qstat/freealg.hpp"

namespace qstat {

inline std::string to_string(const GradedPoly& p, const Alphabet& a) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, c] : p.terms()) {
    if (!first) s += " + ";
    first = false;
    s += format_coefficient(c);
    if (!w.empty()) s += " * " + a.render(w);
  }
  return s;
}

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const Alphabet& a, double tol) : text_(text), a_(a), tol_(tol) {}

  GradedPoly parse() {
    skip();
    if (pos_ == text_.size()) fail("empty expression");
    GradedPoly p = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::expression, "expression column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool starts_factor() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '(' || c == '.' || c == '_' || std::isalnum(static_cast<unsigned char>(c));
  }

  GradedPoly expr() {
    GradedPoly acc = term();
    for (;;) {
      if (peek('+')) {
        ++pos_;
        acc += term();
      } else if (peek('-')) {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  GradedPoly term() {
    Complex sign = 1.0;
    while (peek('+') || peek('-')) {
      if (text_[pos_] == '-') sign = -sign;
      ++pos_;
    }
    bool star_is_product = false;
    GradedPoly acc = factor(star_is_product).scaled(sign);
    for (;;) {
      if (peek('*')) {
        if (!star_is_product) fail("'*' here must follow a number or ')'");
        ++pos_;
        if (!starts_factor()) fail("expected a factor after '*'");
      } else if (!starts_factor()) {
        return acc;
      }
      acc = acc * factor(star_is_product);
    }
  }

  GradedPoly factor(bool& star_is_product) {
    skip();
    if (pos_ >= text_.size()) fail("expected a factor");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      GradedPoly inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      star_is_product = true;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      star_is_product = true;
      return GradedPoly::scalar(number(), tol_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto idx = a_.find(name);
      if (!idx) {
        pos_ = start;
        fail("unknown generator '" + name + "'");
      }
      Letter l{static_cast<std::uint32_t>(*idx), false};
      while (peek('*')) {
        ++pos_;
        l = l.toggled();
      }
      star_is_product = false;
      return GradedPoly::monomial(Word{l}, 1.0, tol_);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Complex number() {
    std::string buf;
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) buf += text_[pos_++];
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      buf += text_[pos_++];
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      std::string exp(1, text_[pos_++]);
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) exp += text_[pos_++];
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        buf += exp;
        digits();
      } else {
        pos_ = save;
      }
    }
    if (buf == "." || buf.empty()) {
      pos_ = start;
      fail("malformed number");
    }
    double v = std::strtod(buf.c_str(), nullptr);
    bool imaginary = pos_ < text_.size() && text_[pos_] == 'j' &&
                     (pos_ + 1 == text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) ||
                                                    text_[pos_ + 1] == '_'));
    if (imaginary) {
      ++pos_;
      return Complex(0.0, v);
    }
    return Complex(v, 0.0);
  }

  std::string_view text_;
  const Alphabet& a_;
  double tol_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline GradedPoly parse_expression(std::string_view text, const Alphabet& a, double tolerance = default_tolerance) {
  return detail::ExpressionParser(text, a, tolerance).parse();
}

}  // namespace qstat
