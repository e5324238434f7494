#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"
#include "compositum/poly.hpp"

namespace compositum {

inline constexpr long kMaxExponent = 10000;
inline constexpr long kMaxDegree = 10000;
inline constexpr long kMaxZetaOrder = 1000;

class ParseError : public InputError {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : InputError("at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct PolyExpr {
  enum class Kind { Integer, Var, Zeta, Neg, Add, Sub, Mul, Div, Pow };
  Kind kind;
  std::size_t offset = 0;
  Integer value;   // Integer literal, zeta order, or exponent
  std::unique_ptr<PolyExpr> lhs, rhs;

  std::string str() const {
    switch (kind) {
      case Kind::Integer: return value.get_str();
      case Kind::Var: return "z";
      case Kind::Zeta: return "zeta(" + value.get_str() + ")";
      case Kind::Neg: return "(-" + lhs->str() + ")";
      case Kind::Pow: return "(" + lhs->str() + ")^" + value.get_str();
      default: break;
    }
    const char* op = kind == Kind::Add ? " + " : kind == Kind::Sub ? " - " : kind == Kind::Mul ? "*" : "/";
    return "(" + lhs->str() + op + rhs->str() + ")";
  }
};

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(std::string_view src) : s_(src) {}

  std::unique_ptr<PolyExpr> parse() {
    skip();
    if (pos_ == s_.size()) throw ParseError(pos_, "empty expression");
    auto e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, std::string("unexpected '") + s_[pos_] + "'");
    return e;
  }

 private:
  using Kind = PolyExpr::Kind;

  static std::unique_ptr<PolyExpr> node(Kind k, std::size_t at, std::unique_ptr<PolyExpr> l = nullptr,
                                        std::unique_ptr<PolyExpr> r = nullptr) {
    auto e = std::make_unique<PolyExpr>();
    e->kind = k;
    e->offset = at;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      if (pos_ == s_.size()) throw ParseError(pos_, std::string("expected '") + c + "' before end of input");
      throw ParseError(pos_, std::string("expected '") + c + "', found '" + s_[pos_] + "'");
    }
    ++pos_;
  }
  bool starts_factor() {
    skip();
    if (pos_ == s_.size()) return false;
    const char c = s_[pos_];
    return c == '(' || c == 'z' || std::isdigit(static_cast<unsigned char>(c));
  }

  Integer integer_literal() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) {
      if (pos_ == s_.size()) throw ParseError(pos_, "expected an integer before end of input");
      throw ParseError(pos_, std::string("expected an integer, found '") + s_[pos_] + "'");
    }
    return Integer(std::string(s_.substr(start, pos_ - start)));
  }

  std::unique_ptr<PolyExpr> expr() {
    auto e = term();
    for (;;) {
      if (peek('+') || peek('-')) {
        const std::size_t at = pos_;
        const Kind k = s_[pos_++] == '+' ? Kind::Add : Kind::Sub;
        e = node(k, at, std::move(e), term());
      } else {
        return e;
      }
    }
  }

  std::unique_ptr<PolyExpr> term() {
    auto e = unary();
    for (;;) {
      if (peek('*') || peek('/')) {
        const std::size_t at = pos_;
        const Kind k = s_[pos_++] == '*' ? Kind::Mul : Kind::Div;
        e = node(k, at, std::move(e), unary());
      } else if (starts_factor()) {  // juxtaposition, e.g. 2z or 3(z+1)
        const std::size_t at = pos_;
        e = node(Kind::Mul, at, std::move(e), power());
      } else {
        return e;
      }
    }
  }

  std::unique_ptr<PolyExpr> unary() {
    if (peek('-')) {
      const std::size_t at = pos_++;
      return node(Kind::Neg, at, unary());
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  std::unique_ptr<PolyExpr> power() {
    auto base = primary();
    if (!peek('^')) return base;
    const std::size_t at = pos_++;
    skip();
    const std::size_t eat = pos_;
    bool paren = peek('(');
    if (paren) ++pos_;
    Integer e = integer_literal();
    if (paren) expect(')');
    if (e > kMaxExponent) throw ParseError(eat, "exponent " + e.get_str() + " exceeds " + std::to_string(kMaxExponent));
    auto p = node(Kind::Pow, at, std::move(base));
    p->value = e;
    if (peek('^')) throw ParseError(pos_, "chained exponents need parentheses");
    return p;
  }

  std::unique_ptr<PolyExpr> primary() {
    skip();
    const std::size_t at = pos_;
    if (pos_ == s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto e = node(Kind::Integer, at);
      e->value = integer_literal();
      return e;
    }
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (s_.substr(pos_, 4) == "zeta") {
      pos_ += 4;
      expect('(');
      auto e = node(Kind::Zeta, at);
      e->value = integer_literal();
      if (e->value < 1 || e->value > kMaxZetaOrder)
        throw ParseError(at, "zeta order must be in [1, " + std::to_string(kMaxZetaOrder) + "]");
      expect(')');
      return e;
    }
    if (c == 'z') {
      ++pos_;
      if (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        throw ParseError(at, "unknown identifier");
      return node(Kind::Var, at);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) throw ParseError(at, "unknown identifier");
    throw ParseError(at, std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline Poly lower(const PolyExpr& e) {
  using Kind = PolyExpr::Kind;
  switch (e.kind) {
    case Kind::Integer: return Poly(CycloNum(Rational(e.value)));
    case Kind::Var: return Poly::z();
    case Kind::Zeta: return Poly(primitive_root(static_cast<int>(e.value.get_si())));
    case Kind::Neg: return -lower(*e.lhs);
    case Kind::Add: return lower(*e.lhs) + lower(*e.rhs);
    case Kind::Sub: return lower(*e.lhs) - lower(*e.rhs);
    case Kind::Mul: {
      Poly a = lower(*e.lhs), b = lower(*e.rhs);
      if (!a.is_zero() && !b.is_zero() && a.degree() + b.degree() > kMaxDegree)
        throw ParseError(e.offset, "degree exceeds " + std::to_string(kMaxDegree));
      return a * b;
    }
    case Kind::Div: {
      Poly b = lower(*e.rhs);
      if (b.is_zero()) throw ParseError(e.offset, "division by zero");
      if (!b.is_constant()) throw ParseError(e.offset, "division by a nonconstant polynomial");
      return lower(*e.lhs).scaled(b.coeff(0).inverse());
    }
    case Kind::Pow: {
      Poly b = lower(*e.lhs);
      const long k = e.value.get_si();
      if (!b.is_zero() && static_cast<long>(b.degree()) * k > kMaxDegree)
        throw ParseError(e.offset, "degree exceeds " + std::to_string(kMaxDegree));
      return b.pow(static_cast<int>(k));
    }
  }
  return Poly();
}

}  // namespace detail

inline std::unique_ptr<PolyExpr> parse_expr(std::string_view src) { return detail::PolyParser(src).parse(); }

inline Poly parse_poly(std::string_view src) { return detail::lower(*parse_expr(src)); }

/// parse_poly, rejecting constants.
inline Poly parse_nonconstant(std::string_view src) {
  Poly p = parse_poly(src);
  if (p.degree() < 1) throw InputError("expected a nonconstant polynomial, got '" + std::string(src) + "'");
  return p;
}

}  // namespace compositum
