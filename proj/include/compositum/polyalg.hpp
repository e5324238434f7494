#pragma once

// Composition algebra of polynomials: right factors, common right factors,
// minimal common composites, centralizers of deck groups, the canonical
// diagram of a pair, and the genus of a polynomial fiber product.

#include <numeric>
#include <optional>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"
#include "compositum/linsolve.hpp"
#include "compositum/poly.hpp"
#include "compositum/series.hpp"

namespace compositum {

/// p = outer o inner, with inner monic and inner(0) = 0.
struct Decomposition {
  Poly outer;
  Poly inner;
};

/// Normalizes a nonconstant w to monic with zero constant term: w = L o w0 with L affine.
inline Decomposition normalize_inner(const Poly& w) {
  if (w.degree() < 1) throw InputError("normalize_inner: constant polynomial");
  const CycloNum lc = w.leading(), c0 = w.coeff(0);
  Poly w0 = (w - Poly(c0)).scaled(lc.inverse());
  return {Poly::linear(lc, c0), w0};
}

/// The degree-d right factor of p, if any.
inline std::optional<Decomposition> right_factor(const Poly& p, int d) {
  const int n = p.degree();
  if (n < 1) throw InputError("right_factor: p must be nonconstant");
  if (d < 1 || n % d != 0) throw InputError("right_factor: d must divide deg p");
  if (d == n) return normalize_inner(p);
  if (d == 1) return Decomposition{p, Poly::z()};
  const int r = n / d;
  // p / (lc z^n) = W(x)^r + O(x^d) in x = 1/z, where w = z^d W(1/z).
  const CycloNum lcinv = p.leading().inverse();
  series::Series<CycloNum> top(d);
  for (int i = 0; i < d; ++i) top[i] = p.coeff(n - i) * lcinv;
  series::Series<CycloNum> root = series::rational_power(top, Rational(1, r), d - 1);
  std::vector<CycloNum> wc(d + 1);
  for (int i = 0; i < d; ++i) wc[d - i] = root[i];
  Poly w(std::move(wc));

  // w-adic digits of p must be constants.
  std::vector<CycloNum> digits;
  Poly rest = p;
  while (!rest.is_zero()) {
    auto [q, rem] = divmod(rest, w);
    if (rem.degree() > 0) return std::nullopt;
    digits.push_back(rem.coeff(0));
    rest = q;
  }
  Poly a(std::move(digits));
  if (compose(a, w) != p) detail::invariant_failed("right_factor: recomposition failed");
  return Decomposition{a, w};
}

/// Normalized common right factor of maximal degree.
inline Poly gcrf(const Poly& p, const Poly& q) {
  if (p.degree() < 1 || q.degree() < 1) throw InputError("gcrf: polynomials must be nonconstant");
  std::vector<long> ds = divisors(std::gcd(p.degree(), q.degree()));
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
    auto fp = right_factor(p, static_cast<int>(*it));
    if (!fp) continue;
    auto fq = right_factor(q, static_cast<int>(*it));
    if (fq && fp->inner == fq->inner) return fp->inner;
  }
  return Poly::z();
}

/// w = a o p = b o q, deg w = lcm(deg p, deg q); b is monic with b(0) = 0.
struct CommonComposite {
  Poly w, a, b;
};

inline std::optional<CommonComposite> minimal_common_composite(const Poly& p, const Poly& q) {
  const int np = p.degree(), nq = q.degree();
  if (np < 1 || nq < 1) throw InputError("minimal_common_composite: polynomials must be nonconstant");
  const int l = std::lcm(np, nq);
  const int r = l / np, s = l / nq;
  // unknowns: a_1..a_r, b_0..b_s ; equation sum a_i p^i - sum b_j q^j = 0, a_0 = 0
  const int cols = r + s + 1;
  Matrix m(l + 1, std::vector<CycloNum>(cols));
  Poly pw(1);
  for (int i = 1; i <= r; ++i) {
    pw = pw * p;
    for (int k = 0; k <= pw.degree(); ++k) m[k][i - 1] = pw.coeff(k);
  }
  Poly qw(1);
  for (int j = 0; j <= s; ++j) {
    if (j > 0) qw = qw * q;
    for (int k = 0; k <= qw.degree(); ++k) m[k][r + j] = -qw.coeff(k);
  }
  auto ker = kernel(std::move(m), cols);
  if (ker.empty()) return std::nullopt;
  if (ker.size() > 1) detail::invariant_failed("common composite kernel has dimension > 1");
  const auto& x = ker[0];
  const CycloNum bs = x[r + s];
  if (bs.is_zero()) detail::invariant_failed("common composite of degree below lcm");
  const CycloNum inv = bs.inverse();
  std::vector<CycloNum> ac(r + 1), bc(s + 1);
  for (int i = 1; i <= r; ++i) ac[i] = x[i - 1] * inv;
  for (int j = 1; j <= s; ++j) bc[j] = x[r + j] * inv;
  ac[0] = -(x[r] * inv);
  CommonComposite out{Poly(), Poly(std::move(ac)), Poly(std::move(bc))};
  out.w = compose(out.b, q);
  if (compose(out.a, p) != out.w || out.w.degree() != l)
    detail::invariant_failed("common composite failed exact re-verification");
  return out;
}

/// |H_{q,p}| and q = outer o inner with T_inner = H_{q,p}.
struct CentralizerResult {
  int order = 1;
  Poly inner;
  Poly outer;
};

inline CentralizerResult centralizer(const Poly& p, const Poly& q) {
  if (p.degree() < 1 || q.degree() < 1) throw InputError("centralizer: polynomials must be nonconstant");
  std::vector<long> ds = divisors(q.degree());
  for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
    const int e = static_cast<int>(*it);
    auto f = right_factor(q, e);
    if (!f) continue;
    if (e == 1 || minimal_common_composite(p, f->inner)) {
      if (compose(f->outer, f->inner) != q) detail::invariant_failed("centralizer factorization");
      return CentralizerResult{e, f->inner, f->outer};
    }
  }
  detail::invariant_failed("centralizer: divisor scan found nothing");
}

inline bool is_irreducible_pair(const Poly& p, const Poly& q) {
  return centralizer(p, q).order == 1 && centralizer(q, p).order == 1;
}

struct DiagramDegrees {
  int deg_p = 1, deg_q = 1, deg_s = 1, deg_h = 1, deg_r = 1, deg_p_tilde = 1, deg_q_tilde = 1;
};

struct CanonicalDiagram {
  DiagramDegrees degrees;
  Poly p_tilde, q_tilde;
  Poly p1, q1;  // inner factors with deck groups H_{p,q} and H_{q,p}
  Poly w;       // F = F_{p,q} cap F_{q,p} is generated by w
  Poly s;       // common right factor of p1 and q1
  Poly h, r;    // h o p = p~ o w,  r o q = q~ o w
};

inline CanonicalDiagram canonical_degrees(const Poly& p, const Poly& q) {
  if (minimal_common_composite(p, q))
    throw InputError("canonical_degrees: the pair has a common composite; use the rational-solutions branch");
  CanonicalDiagram cd;
  cd.p1 = centralizer(q, p).inner;
  cd.q1 = centralizer(p, q).inner;
  auto f = minimal_common_composite(cd.p1, cd.q1);
  if (!f) detail::invariant_failed("canonical_degrees: inner factors have no common composite");
  cd.w = normalize_inner(f->w).inner;
  auto fp = minimal_common_composite(p, cd.w);
  auto fq = minimal_common_composite(q, cd.w);
  if (!fp || !fq) detail::invariant_failed("canonical_degrees: w is not below both p and q");
  cd.h = fp->a;
  cd.p_tilde = fp->b;
  cd.r = fq->a;
  cd.q_tilde = fq->b;
  cd.s = gcrf(cd.p1, cd.q1);

  DiagramDegrees& d = cd.degrees;
  d.deg_p = p.degree();
  d.deg_q = q.degree();
  d.deg_s = cd.s.degree();
  d.deg_h = cd.h.degree();
  d.deg_r = cd.r.degree();
  d.deg_p_tilde = cd.p_tilde.degree();
  d.deg_q_tilde = cd.q_tilde.degree();
  if (d.deg_p != d.deg_s * d.deg_r * d.deg_p_tilde || d.deg_q != d.deg_s * d.deg_h * d.deg_q_tilde)
    detail::invariant_failed("canonical diagram degree bookkeeping failed");
  if (std::gcd(d.deg_h, d.deg_p_tilde) != 1 || std::gcd(d.deg_r, d.deg_q_tilde) != 1 ||
      std::gcd(d.deg_h, d.deg_r) != 1)
    detail::invariant_failed("canonical diagram gcd conditions failed");
  return cd;
}

/// Ramification of the least Galois covering over a point with local indices l_i.
inline long local_galois_multiplicity(const std::vector<long>& l) {
  if (l.empty()) throw InputError("local_galois_multiplicity: empty list");
  long out = 1;
  for (long x : l) {
    if (x < 1) throw InputError("local_galois_multiplicity: indices must be positive");
    out = std::lcm(out, x);
  }
  return out;
}

namespace detail {

// Characteristic polynomial of multiplication by f on C[x]/(e), e monic. Its roots are the values
// f(x) at the roots x of e, with e's multiplicities.
inline Poly multiplication_charpoly(const Poly& f, const Poly& e) {
  const int n = e.degree();
  if (n < 1) return Poly(1);
  Matrix a(n, std::vector<CycloNum>(n));
  Poly fx = divmod(f, e).second;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a[i][j] = fx.coeff(i);
    fx = divmod(fx * Poly::z(), e).second;
  }
  // Faddeev-LeVerrier
  std::vector<CycloNum> c(n + 1);
  c[n] = CycloNum(1);
  Matrix mk(n, std::vector<CycloNum>(n));
  for (int k = 1; k <= n; ++k) {
    Matrix next(n, std::vector<CycloNum>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CycloNum acc;
        for (int l = 0; l < n; ++l)
          if (!a[i][l].is_zero() && !mk[l][j].is_zero()) acc += a[i][l] * mk[l][j];
        next[i][j] = acc;
      }
    for (int i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = std::move(next);
    CycloNum tr;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        if (!a[i][l].is_zero() && !mk[l][i].is_zero()) tr += a[i][l] * mk[l][i];
    c[n - k] = -tr.scaled(Rational(1, k));
  }
  return Poly(std::move(c));
}

// sum over y of mult_f(y) * mult_g(y).
inline long root_multiplicity_pairing(const Poly& f, const Poly& g) {
  if (f.degree() < 1 || g.degree() < 1) return 0;
  auto sf = squarefree_decomposition(f), sg = squarefree_decomposition(g);
  long total = 0;
  for (std::size_t i = 1; i < sf.size(); ++i)
    for (std::size_t j = 1; j < sg.size(); ++j) {
      if (sf[i].degree() < 1 || sg[j].degree() < 1) continue;
      total += static_cast<long>(i * j) * gcd(sf[i], sg[j]).degree();
    }
  return total;
}

// Product of the squarefree parts s_j of p' with k | j + 1: the points where k divides the local degree.
inline Poly local_degree_divisible_locus(const std::vector<Poly>& sqf, int k) {
  Poly e(1);
  for (std::size_t j = 1; j < sqf.size(); ++j)
    if ((j + 1) % k == 0) e = e * sqf[j];
  return e;
}

}  // namespace detail

/// Genus of the normalization of { (x, z) : p(x) = q(z) } for coprime degrees.
inline long fiber_product_genus(const Poly& p, const Poly& q) {
  const long n = p.degree(), m = q.degree();
  if (n < 1 || m < 1) throw InputError("fiber_product_genus: polynomials must be nonconstant");
  if (std::gcd(n, m) != 1) throw InputError("fiber_product_genus: unsupported, degrees must be coprime");
  const Poly dp = p.derivative(), dq = q.derivative();
  const auto sp = squarefree_decomposition(dp), sq = squarefree_decomposition(dq);

  // Over a finite y, sum (e - 1) = nm - #points and #points = sum_{x,z} gcd(l_x, l_z)
  // = sum_k phi(k) A_k(y) B_k(y), A_k(y) = #{x over y : k | l_x}.
  // k = 1 part: nm - A_1 B_1 = n R_q + m R_p - R_p R_q with R = sum (l - 1).
  const Poly rp = dp.degree() >= 1 ? detail::multiplication_charpoly(p, dp.monic()) : Poly(1);
  const Poly rq = dq.degree() >= 1 ? detail::multiplication_charpoly(q, dq.monic()) : Poly(1);
  long total = n * (m - 1) + m * (n - 1) - detail::root_multiplicity_pairing(rp, rq);
  const long kmax = std::min(n, m);
  for (long k = 2; k <= kmax; ++k) {
    Poly ep = detail::local_degree_divisible_locus(sp, static_cast<int>(k));
    Poly eq = detail::local_degree_divisible_locus(sq, static_cast<int>(k));
    if (ep.degree() < 1 || eq.degree() < 1) continue;
    Poly ap = detail::multiplication_charpoly(p, ep), bq = detail::multiplication_charpoly(q, eq);
    total -= euler_phi(k) * detail::root_multiplicity_pairing(ap, bq);
  }
  total += n * m - 1;  // the single point over infinity
  const long two_g_minus_two = -2 * n * m + total;
  if (two_g_minus_two < -2 || two_g_minus_two % 2 != 0)
    detail::invariant_failed("fiber_product_genus: Riemann-Hurwitz count is inconsistent");
  return two_g_minus_two / 2 + 1;
}

/// Total ramification sum (e - 1) of the fiber product over the y-line, infinity included.
inline long fiber_product_ramification_total(const Poly& p, const Poly& q) {
  return 2 * fiber_product_genus(p, q) - 2 + 2 * p.degree() * q.degree();
}

}  // namespace compositum
