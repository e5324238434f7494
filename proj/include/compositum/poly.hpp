#pragma once

// Univariate polynomials over the cyclotomic numbers.

#include <complex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"

namespace compositum {

class Poly {
 public:
  Poly() = default;
  Poly(const CycloNum& c) {  // NOLINT(implicit)
    if (!c.is_zero()) c_.push_back(c);
  }
  Poly(long c) : Poly(CycloNum(c)) {}  // NOLINT(implicit)
  explicit Poly(std::vector<CycloNum> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly z() { return Poly(std::vector<CycloNum>{CycloNum(0), CycloNum(1)}); }
  static Poly monomial(const CycloNum& c, int e) {
    std::vector<CycloNum> v(e + 1);
    v[e] = c;
    return Poly(std::move(v));
  }
  /// a z + b
  static Poly linear(const CycloNum& a, const CycloNum& b) { return Poly(std::vector<CycloNum>{b, a}); }

  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<CycloNum>& coeffs() const { return c_; }
  CycloNum coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : CycloNum(); }
  const CycloNum& leading() const {
    if (c_.empty()) throw InputError("leading coefficient of the zero polynomial");
    return c_.back();
  }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(leading().inverse());
  }

  Poly scaled(const CycloNum& s) const {
    if (s.is_zero()) return Poly();
    std::vector<CycloNum> v = c_;
    for (CycloNum& x : v) x *= s;
    return Poly(std::move(v));
  }

  CycloNum eval(const CycloNum& x) const {
    CycloNum acc;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  std::complex<double> eval(std::complex<double> x) const {
    std::complex<double> acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].to_complex();
    return acc;
  }

  Poly derivative() const {
    std::vector<CycloNum> v;
    for (std::size_t i = 1; i < c_.size(); ++i) v.push_back(c_[i].scaled(Rational(static_cast<long>(i))));
    return Poly(std::move(v));
  }

  Poly pow(int e) const {
    if (e < 0) throw InputError("negative polynomial power");
    Poly result(1), base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  /// Smallest cyclotomic order containing every coefficient.
  int coefficient_order() const {
    int n = 1;
    for (const CycloNum& c : c_) n = std::lcm(n, c.order());
    return n;
  }

  Poly operator-() const { return scaled(CycloNum(-1)); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<CycloNum> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return Poly(std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<CycloNum> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (!b.c_[j].is_zero()) v[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<CycloNum> c_;
};

/// a(b(z)) by Horner.
inline Poly compose(const Poly& a, const Poly& b) {
  Poly acc;
  const auto& c = a.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * b + Poly(c[i]);
  return acc;
}

/// a = q b + r with deg r < deg b.
inline std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw DivisionByZero();
  std::vector<CycloNum> r = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {Poly(), a};
  std::vector<CycloNum> q(a.degree() - db + 1);
  const CycloNum inv = b.leading().inverse();
  for (int k = a.degree(); k >= db; --k) {
    if (r[k].is_zero()) continue;
    CycloNum c = r[k] * inv;
    q[k - db] = c;
    for (int i = 0; i <= db; ++i)
      if (!b.coeffs()[i].is_zero()) r[k - db + i] -= c * b.coeffs()[i];
  }
  return {Poly(std::move(q)), Poly(std::move(r))};
}

/// Exact quotient; throws if b does not divide a.
inline Poly exact_div(const Poly& a, const Poly& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) detail::invariant_failed("exact_div: nonzero remainder");
  return q;
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Yun's squarefree decomposition: f = lc * prod_i s_i^i, s_i monic squarefree pairwise coprime.
/// Entry i of the result is s_i (entry 0 unused, set to 1).
inline std::vector<Poly> squarefree_decomposition(const Poly& f) {
  if (f.degree() < 1) return {Poly(1)};
  std::vector<Poly> out{Poly(1)};
  Poly a = f.monic();
  Poly b = a.derivative();
  Poly c = gcd(a, b);
  Poly w = exact_div(a, c);
  Poly y = exact_div(b, c);
  Poly z = y - w.derivative();
  while (w.degree() > 0) {
    Poly g = gcd(w, z);
    out.push_back(g);
    w = exact_div(w, g);
    y = exact_div(z, g);
    z = y - w.derivative();
  }
  return out;
}

/// Human-readable form, highest degree first, e.g. "z^2 + 2*z - 1/2", "(zeta(3))*z + 1".
inline std::string to_string(const Poly& p, const std::string& var = "z") {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const CycloNum& c = p.coeffs()[i];
    if (c.is_zero()) continue;
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    std::string coef;
    bool negative = false;
    if (c.is_rational()) {
      Rational r = c.rational_value();
      negative = sgn(r) < 0;
      Rational mag = abs(r);
      if (mag != 1 || mono.empty()) coef = mag.get_str();
    } else {
      coef = "(" + c.str() + ")";
    }
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (!coef.empty() && !mono.empty()) os << coef << "*" << mono;
    else os << coef << mono;
  }
  return os.str();
}

}  // namespace compositum
