#pragma once

// Truncated formal germs at infinity
//     g(z) = a_1 z + a_0 + a_{-1} z^{-1} + ... + a_{1-K} z^{1-K} + O(z^{-K}),  a_1 != 0.
//
// A germ is stored as the series S(w) = g(z)/z in w = 1/z, so index j holds
// the coefficient of z^{1-j}. With this encoding
//     (g o h)      <->  S_h(w) * S_g(w / S_h(w))
//     inverse(g)   <->  Lagrange inversion of w / S_g(w),
// and all group operations reduce to power-series arithmetic.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"
#include "compositum/series.hpp"

namespace compositum {

inline constexpr int kDefaultTrunc = 64;

class Germ {
 public:
  Germ() : Germ(identity(kDefaultTrunc)) {}

  /// coeffs[j] is the coefficient of z^{1-j}; entries beyond index trunc are dropped.
  /// `exact` asserts every coefficient past the window is zero.
  Germ(std::vector<CycloNum> coeffs, int trunc, bool exact = false)
      : c_(std::move(coeffs)), trunc_(trunc), exact_(exact) {
    if (trunc_ < 1) throw InputError("germ truncation order must be at least 1");
    if (static_cast<int>(c_.size()) > trunc_ + 1) {
      for (std::size_t j = trunc_ + 1; j < c_.size() && exact_; ++j)
        if (!c_[j].is_zero()) exact_ = false;
      c_.resize(trunc_ + 1);
    }
    while (c_.size() > 1 && c_.back().is_zero()) c_.pop_back();
    if (c_.empty() || c_[0].is_zero()) throw InputError("germ leading coefficient a_1 must be nonzero");
  }

  static Germ identity(int trunc) { return Germ({CycloNum(1)}, trunc, true); }

  /// z -> a z + b, exact.
  static Germ affine(const CycloNum& a, const CycloNum& b, int trunc) { return Germ({a, b}, trunc, true); }

  /// From exponent -> coefficient; exponents must be <= 1.
  static Germ from_terms(const std::map<int, CycloNum>& terms, int trunc, bool exact = true) {
    std::vector<CycloNum> c;
    for (const auto& [e, v] : terms) {
      if (e > 1) throw InputError("germ exponents must be at most 1");
      const std::size_t j = static_cast<std::size_t>(1 - e);
      if (c.size() <= j) c.resize(j + 1);
      c[j] = v;
    }
    return Germ(std::move(c), trunc, exact);
  }

  int trunc_order() const { return trunc_; }
  bool is_exact() const { return exact_; }
  const CycloNum& leading() const { return c_[0]; }
  bool is_affine() const { return c_.size() <= 2; }

  /// Coefficient of z^e, 1 - K <= e <= 1.
  CycloNum coefficient(int e) const {
    if (e > 1) return CycloNum();
    const int j = 1 - e;
    if (j > trunc_) throw InputError("coefficient outside the truncation window");
    return j < static_cast<int>(c_.size()) ? c_[j] : CycloNum();
  }

  /// Window coefficients, index j <-> z^{1-j}, padded to length K + 1.
  series::Series<CycloNum> window() const { return series::resized(c_, trunc_); }
  const std::vector<CycloNum>& stored() const { return c_; }

  /// Same germ at another truncation; growing the window needs an exact germ.
  Germ at_trunc(int trunc) const {
    if (trunc > trunc_ && !exact_) throw InputError("cannot extend a truncated germ beyond its window");
    return Germ(c_, trunc, exact_);
  }

  bool is_identity_in_window() const { return c_.size() == 1 && c_[0].is_one(); }

  friend bool operator==(const Germ& a, const Germ& b) {
    if (a.trunc_ != b.trunc_) throw InputError("germ equality needs equal truncation orders");
    return a.c_ == b.c_;
  }
  friend bool operator!=(const Germ& a, const Germ& b) { return !(a == b); }

  /// Hash key with all coefficients lifted to cyclotomic order `n`.
  std::string key_at(int n) const {
    std::string key;
    for (const CycloNum& c : c_) {
      key += c.key_at(n);
      key += '|';
    }
    return key;
  }

  /// lcm of the cyclotomic orders of the stored coefficients.
  int coefficient_order() const {
    int n = 1;
    for (const CycloNum& c : c_) n = std::lcm(n, c.order());
    return n;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      const int e = 1 - static_cast<int>(j);
      os << "(" << c_[j].str() << ")";
      if (e == 1) os << "*z";
      else if (e != 0) os << "*z^" << e;
    }
    if (!exact_) os << " + O(z^" << -trunc_ << ")";
    return os.str();
  }

 private:
  std::vector<CycloNum> c_;
  int trunc_;
  bool exact_;
};

/// g o h, exact through z^{1-K}.
inline Germ compose(const Germ& g, const Germ& h) {
  const int k = g.trunc_order();
  if (h.trunc_order() != k) throw InputError("compose: germs must have equal truncation orders");
  if (g.is_affine() && h.is_affine()) {
    // (a z + b) o (c z + d) = a c z + (a d + b)
    const CycloNum& a = g.stored()[0];
    CycloNum b = g.stored().size() > 1 ? g.stored()[1] : CycloNum();
    const CycloNum& c = h.stored()[0];
    CycloNum d = h.stored().size() > 1 ? h.stored()[1] : CycloNum();
    return Germ({a * c, a * d + b}, k, g.is_exact() && h.is_exact());
  }
  using series::Series;
  const std::size_t kk = static_cast<std::size_t>(k);
  Series<CycloNum> sh = h.window();
  Series<CycloNum> th = series::inverse(sh, kk);
  Series<CycloNum> inner(kk + 1);
  for (std::size_t i = 0; i < kk; ++i) inner[i + 1] = th[i];
  Series<CycloNum> outer = series::compose(g.window(), inner, kk);
  return Germ(series::mul(sh, outer, kk), k, false);
}

/// Compositional inverse through the window.
inline Germ invert(const Germ& g) {
  const int k = g.trunc_order();
  if (g.is_affine()) {
    // (a z + b)^{-1} = a^{-1} z - a^{-1} b
    CycloNum ainv = g.stored()[0].inverse();
    CycloNum b = g.stored().size() > 1 ? g.stored()[1] : CycloNum();
    return Germ({ainv, -(ainv * b)}, k, g.is_exact());
  }
  using series::Series;
  const std::size_t kk = static_cast<std::size_t>(k);
  // G(w) = 1/g(1/w) = w / S(w); its reversion H has [w^n] H = (1/n) [w^{n-1}] S^n.
  Series<CycloNum> s = g.window();
  Series<CycloNum> h_over_w(kk + 1);  // H(w)/w, coefficient i <-> w^{i+1}
  Series<CycloNum> pw(kk + 1);
  pw[0] = CycloNum(1);
  for (std::size_t n = 1; n <= kk + 1; ++n) {
    pw = series::mul(pw, s, kk);
    h_over_w[n - 1] = pw[n - 1].scaled(Rational(1) / Rational(static_cast<long>(n)));
  }
  return Germ(series::inverse(h_over_w, kk), k, false);
}

/// sum_{k >= n} a_k z^{-k}, known for k <= max_index (unbounded if exact).
struct LaurentTail {
  std::map<int, CycloNum> coeffs;
  int max_index = 0;
  bool exact = false;
};

/// g(z) - z as a tail; window indices -1 .. K-1.
inline LaurentTail tail_minus_identity(const Germ& g) {
  LaurentTail t;
  t.max_index = g.trunc_order() - 1;
  t.exact = g.is_exact();
  const auto& c = g.stored();
  CycloNum lead = c[0] - CycloNum(1);
  if (!lead.is_zero()) t.coeffs[-1] = lead;
  for (std::size_t j = 1; j < c.size(); ++j)
    if (!c[j].is_zero()) t.coeffs[static_cast<int>(j) - 1] = c[j];
  return t;
}

/// Least k with a_k != 0.
inline int ord_infinity(const LaurentTail& t) {
  for (const auto& [k, v] : t.coeffs)
    if (k <= t.max_index && !v.is_zero()) return k;
  throw TruncationInconclusive("ord_infinity: indeterminate within truncation (all-zero window)");
}

/// Filtration level: the k <= 1 with g in J_k \ J_{k-1}; outside_j1 when a_1 != 1.
struct Level {
  bool outside_j1 = false;
  int k = 0;
  friend bool operator==(const Level&, const Level&) = default;
};

inline Level level(const Germ& g) {
  if (!g.leading().is_one()) return Level{true, 0};
  LaurentTail t = tail_minus_identity(g);
  if (t.coeffs.empty()) {
    throw InputError(g.is_exact() ? "no level: identity germ"
                                  : "no level: germ is the identity within the truncation window");
  }
  return Level{false, 1 - ord_infinity(t)};
}

/// Image of g in J_k / J_{k-1} ~ (C,+): the leading coefficient of g(z) - z.
inline CycloNum residue(const Germ& g) {
  Level lv = level(g);
  if (lv.outside_j1) throw InputError("residue: germ is not in J_1");
  LaurentTail t = tail_minus_identity(g);
  return t.coeffs.at(1 - lv.k);
}

/// Lift along z = zeta^n: returns g~ with g~(zeta)^n = g(zeta^n) through the window, using the
/// principal n-th root zeta_{nM}^k of the leading coefficient zeta_M^k.
inline Germ substitute_root(const Germ& g, int n) {
  if (n < 1) throw InputError("substitute_root: n must be positive");
  auto idx = g.leading().root_of_unity_index();
  if (!idx) throw InputError("substitute_root: unsupported coefficient (leading coefficient is not a root of unity)");
  const auto [m, k] = *idx;
  const CycloNum lambda = CycloNum::root(n * m, k);
  const std::size_t kk = static_cast<std::size_t>(g.trunc_order());
  const std::size_t need = kk / static_cast<std::size_t>(n);
  series::Series<CycloNum> a = series::resized(g.stored(), need);
  const CycloNum binv = g.leading().inverse();
  for (CycloNum& v : a) v *= binv;
  series::Series<CycloNum> f = series::rational_power(a, Rational(1, static_cast<unsigned long>(n)), need);
  std::vector<CycloNum> out(kk + 1);
  for (std::size_t i = 0; i <= need; ++i) out[i * n] = lambda * f[i];
  const bool exact = g.is_exact() && g.stored().size() == 1;
  return Germ(std::move(out), g.trunc_order(), exact);
}

}  // namespace compositum
