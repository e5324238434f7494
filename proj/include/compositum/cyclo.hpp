#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N).
//
// An element of Q(zeta_N) is stored by its coordinates in the power basis
// {zeta_N^i : 0 <= i < phi(N)}, i.e. as a rational polynomial reduced modulo
// the N-th cyclotomic polynomial. Elements of different orders are lifted to
// the lcm order before any binary operation. Values whose non-constant
// coordinates all vanish are demoted to order 1, so every rational number has
// exactly one representation.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "compositum/errors.hpp"

namespace compositum {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw DivisionByZero();
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Elementary number theory.

inline long mobius(long m) {
  if (m < 1) throw InputError("mobius: argument must be positive");
  long result = 1;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) return 0;
    result = -result;
  }
  if (m > 1) result = -result;
  return result;
}

inline long euler_phi(long m) {
  if (m < 1) throw InputError("euler_phi: argument must be positive");
  long result = m;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

/// Positive divisors of n in increasing order.
inline std::vector<long> divisors(long n) {
  std::vector<long> small, large;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

inline long mod_floor(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

// ---------------------------------------------------------------------------
// Per-order tables: the cyclotomic polynomial and integer coordinates of
// every power zeta_N^k, 0 <= k < N.

struct CycloData {
  int order = 1;
  int phi = 1;
  std::vector<long> phi_poly;                 // monic, low-to-high, degree phi
  std::vector<std::vector<long>> power_coords;  // power_coords[k] has length phi
};

namespace detail {

inline std::vector<long> cyclotomic_polynomial_coeffs(int n) {
  // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}; multiply first, then divide.
  std::vector<long> poly{1};
  auto multiply = [&poly](long d) {
    std::vector<long> out(poly.size() + d, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i + d] += poly[i];
      out[i] -= poly[i];
    }
    poly = std::move(out);
  };
  auto divide = [&poly](long d) {
    // Exact division by x^d - 1, from the top.
    std::vector<long> quot(poly.size() - d, 0);
    std::vector<long> rem = poly;
    for (std::size_t k = rem.size() - 1; k + 1 > static_cast<std::size_t>(d); --k) {
      long c = rem[k];
      if (c == 0) continue;
      quot[k - d] = c;
      rem[k] = 0;
      rem[k - d] += c;
    }
    poly = std::move(quot);
  };
  for (long d : divisors(n))
    if (mobius(n / d) == 1) multiply(d);
  for (long d : divisors(n))
    if (mobius(n / d) == -1) divide(d);
  return poly;
}

inline std::unique_ptr<CycloData> build_cyclo_data(int n) {
  auto data = std::make_unique<CycloData>();
  data->order = n;
  data->phi_poly = cyclotomic_polynomial_coeffs(n);
  data->phi = static_cast<int>(data->phi_poly.size()) - 1;
  const int phi = data->phi;
  data->power_coords.assign(n, std::vector<long>(phi, 0));
  std::vector<long> cur(phi, 0);
  cur[0] = 1;
  for (int k = 0; k < n; ++k) {
    data->power_coords[k] = cur;
    // multiply by x, reduce the x^phi term with the monic Phi_n
    long top = cur[phi - 1];
    for (int i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0)
      for (int i = 0; i < phi; ++i) cur[i] -= top * data->phi_poly[i];
  }
  return data;
}

}  // namespace detail

/// Cached tables for Q(zeta_n). Thread-safe; references stay valid forever.
inline const CycloData& cyclo_data(int n) {
  if (n < 1) throw InputError("cyclotomic order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<CycloData>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
  }
  auto built = detail::build_cyclo_data(n);
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(n, std::move(built));
  return *it->second;
}

// ---------------------------------------------------------------------------
// Rational polynomial helpers for inversion modulo Phi_N.

namespace detail {

using QPoly = std::vector<Rational>;

inline void trim(QPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  trim(r);
  q.clear();
  if (r.size() < b.size()) return;
  q.assign(r.size() - b.size() + 1, Rational(0));
  const Rational& lead = b.back();
  for (std::size_t k = r.size(); k-- >= b.size();) {
    if (sgn(r[k]) == 0) continue;
    Rational c = r[k] / lead;
    std::size_t shift = k - (b.size() - 1);
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
  }
  trim(r);
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  trim(out);
  return out;
}

inline QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()), Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
  trim(out);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

class CycloNum {
 public:
  CycloNum() : order_(1), c_{Rational(0)} {}
  CycloNum(long v) : order_(1), c_{Rational(v)} {}  // NOLINT(implicit)
  CycloNum(const Rational& r) : order_(1), c_{r} {}  // NOLINT(implicit)

  /// zeta_N^k with zeta_N = exp(2 pi i / N).
  static CycloNum root(int n, long k = 1) {
    const CycloData& data = cyclo_data(n);
    const auto& coords = data.power_coords[mod_floor(k, n)];
    std::vector<Rational> c(coords.begin(), coords.end());
    return CycloNum(n, std::move(c));
  }

  /// Element sum_i coeffs[i] zeta_N^i for an arbitrary-length list.
  static CycloNum from_coeffs(int n, const std::vector<Rational>& coeffs) {
    const CycloData& data = cyclo_data(n);
    std::vector<Rational> c(data.phi, Rational(0));
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      accumulate_power(data, c, static_cast<long>(i), coeffs[i]);
    return CycloNum(n, std::move(c));
  }

  int order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const { return order_ == 1 && sgn(c_[0]) == 0; }
  bool is_one() const { return order_ == 1 && c_[0] == 1; }
  bool is_rational() const { return order_ == 1; }
  const Rational& rational_value() const {
    if (!is_rational()) throw InputError("cyclotomic number is not rational");
    return c_[0];
  }

  /// Coordinates of this element in the power basis of Q(zeta_N); order() must divide N.
  std::vector<Rational> coords_at(int n) const {
    if (n % order_ != 0) throw InputError("cannot lift to an order not divisible by the current order");
    if (n == order_) return c_;
    const CycloData& data = cyclo_data(n);
    std::vector<Rational> out(data.phi, Rational(0));
    const long step = n / order_;
    for (std::size_t i = 0; i < c_.size(); ++i)
      accumulate_power(data, out, static_cast<long>(i) * step, c_[i]);
    return out;
  }

  /// Canonical text key of the coordinates at order N (for hashing).
  std::string key_at(int n) const {
    std::string key;
    for (const Rational& r : coords_at(n)) {
      key += r.get_str();
      key += ',';
    }
    return key;
  }

  CycloNum operator-() const {
    std::vector<Rational> c = c_;
    for (Rational& r : c) r = -r;
    return CycloNum(order_, std::move(c));
  }

  friend CycloNum operator+(const CycloNum& a, const CycloNum& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int n = std::lcm(a.order_, b.order_);
    std::vector<Rational> x = a.coords_at(n);
    std::vector<Rational> y = b.coords_at(n);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return CycloNum(n, std::move(x));
  }

  friend CycloNum operator-(const CycloNum& a, const CycloNum& b) { return a + (-b); }

  friend CycloNum operator*(const CycloNum& a, const CycloNum& b) {
    if (a.is_rational()) return b.scaled(a.c_[0]);
    if (b.is_rational()) return a.scaled(b.c_[0]);
    const int n = std::lcm(a.order_, b.order_);
    const CycloData& data = cyclo_data(n);
    std::vector<Rational> x = a.coords_at(n);
    std::vector<Rational> y = b.coords_at(n);
    std::vector<Rational> prod(2 * data.phi - 1, Rational(0));
    for (int i = 0; i < data.phi; ++i) {
      if (sgn(x[i]) == 0) continue;
      for (int j = 0; j < data.phi; ++j)
        if (sgn(y[j]) != 0) prod[i + j] += x[i] * y[j];
    }
    std::vector<Rational> out(prod.begin(), prod.begin() + data.phi);
    for (int k = data.phi; k < 2 * data.phi - 1; ++k)
      if (sgn(prod[k]) != 0) accumulate_power(data, out, k, prod[k]);
    return CycloNum(n, std::move(out));
  }

  friend CycloNum operator/(const CycloNum& a, const CycloNum& b) { return a * b.inverse(); }

  CycloNum& operator+=(const CycloNum& o) { return *this = *this + o; }
  CycloNum& operator-=(const CycloNum& o) { return *this = *this - o; }
  CycloNum& operator*=(const CycloNum& o) { return *this = *this * o; }
  CycloNum& operator/=(const CycloNum& o) { return *this = *this / o; }

  CycloNum scaled(const Rational& r) const {
    if (sgn(r) == 0) return CycloNum();
    std::vector<Rational> c = c_;
    for (Rational& v : c) v *= r;
    return CycloNum(order_, std::move(c));
  }

  CycloNum inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (is_rational()) return CycloNum(Rational(1) / c_[0]);
    // Extended Euclid of a(x) against Phi_N(x) over Q.
    const CycloData& data = cyclo_data(order_);
    detail::QPoly r0(data.phi_poly.begin(), data.phi_poly.end());
    detail::QPoly r1 = c_;
    detail::trim(r1);
    detail::QPoly s0{}, s1{Rational(1)};
    while (r1.size() > 1) {
      detail::QPoly q, r;
      detail::divmod(r0, r1, q, r);
      detail::QPoly s = detail::sub(s0, detail::mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    // r1 is a nonzero constant since Phi_N is irreducible.
    Rational inv = Rational(1) / r1[0];
    for (Rational& v : s1) v *= inv;
    return from_coeffs(order_, s1);
  }

  /// Integer power; negative exponents invert.
  CycloNum pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    CycloNum result(1), base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return result;
  }

  /// The automorphism zeta_N -> zeta_N^a, gcd(a, N) = 1.
  CycloNum galois(long a) const {
    if (std::gcd(mod_floor(a, order_), static_cast<long>(order_)) != 1 && order_ > 1)
      throw InputError("galois: exponent must be coprime to the order");
    if (is_rational()) return *this;
    const CycloData& data = cyclo_data(order_);
    std::vector<Rational> out(data.phi, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) accumulate_power(data, out, static_cast<long>(i) * a, c_[i]);
    return CycloNum(order_, std::move(out));
  }

  /// Complex conjugation under the standard embedding.
  CycloNum conj() const { return galois(-1); }

  /// Floating-point image under zeta_N -> exp(2 pi i / N). Test oracle only.
  std::complex<double> to_complex() const {
    std::complex<double> sum = 0.0;
    const double base = 2.0 * M_PI / order_;
    for (std::size_t i = 0; i < c_.size(); ++i)
      sum += c_[i].get_d() * std::polar(1.0, base * static_cast<double>(i));
    return sum;
  }

  /// Returns (M, k) with gcd(k, M) = 1 and this == zeta_M^k, M minimal; empty if not a root of unity.
  std::optional<std::pair<int, int>> root_of_unity_index() const {
    if (is_zero()) return std::nullopt;
    const int n = order_ % 2 == 0 ? order_ : 2 * order_;
    std::vector<Rational> mine = coords_at(n);
    const CycloData& data = cyclo_data(n);
    for (int j = 0; j < n; ++j) {
      const auto& pc = data.power_coords[j];
      bool eq = true;
      for (int i = 0; i < data.phi && eq; ++i) eq = mine[i] == pc[i];
      if (eq) {
        int g = std::gcd(j, n);
        return std::make_pair(n / g, j / g);
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const CycloNum& a, const CycloNum& b) {
    if (a.order_ == b.order_) return a.c_ == b.c_;
    const int n = std::lcm(a.order_, b.order_);
    return a.coords_at(n) == b.coords_at(n);
  }
  friend bool operator!=(const CycloNum& a, const CycloNum& b) { return !(a == b); }

  /// Readable form using zeta(N) for the generator, e.g. "1/2 - zeta(6)^1".
  std::string str() const {
    if (is_rational()) return c_[0].get_str();
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      const Rational& c = c_[i];
      if (sgn(c) == 0) continue;
      Rational mag = abs(c);
      if (first) {
        if (sgn(c) < 0) os << "-";
      } else {
        os << (sgn(c) < 0 ? " - " : " + ");
      }
      first = false;
      if (i == 0) {
        os << mag.get_str();
        continue;
      }
      if (mag != 1) os << mag.get_str() << "*";
      os << "zeta(" << order_ << ")";
      if (i > 1) os << "^" << i;
    }
    return os.str();
  }

 private:
  CycloNum(int n, std::vector<Rational> c) : order_(n), c_(std::move(c)) { normalize(); }

  static void accumulate_power(const CycloData& data, std::vector<Rational>& out, long exponent,
                               const Rational& scale) {
    const auto& pc = data.power_coords[mod_floor(exponent, data.order)];
    for (int i = 0; i < data.phi; ++i)
      if (pc[i] != 0) out[i] += scale * pc[i];
  }

  void normalize() {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) return;
    c_.resize(1);
    order_ = 1;
  }

  int order_;
  std::vector<Rational> c_;
};

/// zeta_N, checked primitive: zeta^N = 1 and zeta^d != 1 for every proper divisor d.
inline CycloNum primitive_root(int n) {
  if (n < 1) throw InputError("primitive_root: order must be positive");
  CycloNum z = CycloNum::root(n, 1);
  if (!z.pow(n).is_one()) detail::invariant_failed("zeta_N^N != 1");
  for (long d : divisors(n))
    if (d < n && z.pow(d).is_one()) detail::invariant_failed("zeta_N is not primitive");
  return z;
}

/// Galois average over Gal(Q(zeta_m)/Q), m the representing order. Independent of m.
inline Rational trace_T(const CycloNum& x) {
  if (x.is_rational()) return x.rational_value();
  const int m = x.order();
  const CycloData& data = cyclo_data(m);
  // Sum of the images sigma_a(zeta^i) over the units a, one basis power at a time.
  Rational total = 0;
  const auto& c = x.coeffs();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) continue;
    std::vector<long> orbit(data.phi, 0);
    for (long a = 1; a <= m; ++a) {
      if (std::gcd(a, static_cast<long>(m)) != 1) continue;
      const auto& pc = data.power_coords[mod_floor(static_cast<long>(i) * a, m)];
      for (int j = 0; j < data.phi; ++j) orbit[j] += pc[j];
    }
    for (int j = 1; j < data.phi; ++j)
      if (orbit[j] != 0) detail::invariant_failed("trace_T: Galois sum is not rational");
    total += c[i] * orbit[0];
  }
  return total / Rational(data.phi);
}

}  // namespace compositum
