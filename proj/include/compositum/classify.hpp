#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "compositum/affine.hpp"
#include "compositum/cyclo.hpp"
#include "compositum/deck.hpp"
#include "compositum/errors.hpp"
#include "compositum/poly.hpp"
#include "compositum/polyalg.hpp"
#include "compositum/zmodule.hpp"

namespace compositum {

/// p = y_change o z^n o beta and q = z_change o (z+1)^m o beta.
struct StandardFormData {
  Poly beta, y_change, z_change;
  int n = 0, m = 0;
};

namespace detail {

/// Returns (c, a, center) with f = a (z - center)^deg + c, when f' has a single root.
struct PurePower {
  CycloNum lead, constant, center;
};

inline std::optional<PurePower> as_pure_power(const Poly& f) {
  const int n = f.degree();
  if (n < 2) return std::nullopt;
  const Poly r = f.derivative().monic();
  const CycloNum center = -(r.coeff(n - 2) / CycloNum(n - 1));
  if (r != Poly::linear(CycloNum(1), -center).pow(n - 1)) return std::nullopt;
  return PurePower{f.leading(), f.eval(center), center};
}

}  // namespace detail

inline std::optional<StandardFormData> standard_form_recognizer(const Poly& p, const Poly& q) {
  if (p.degree() < 2 || q.degree() < 2) throw InputError("standard_form_recognizer: degrees must be at least 2");
  auto pp = detail::as_pure_power(p);
  auto qq = detail::as_pure_power(q);
  if (!pp || !qq || pp->center == qq->center) return std::nullopt;

  StandardFormData sf;
  sf.n = p.degree();
  sf.m = q.degree();
  // beta^{-1}(w) = s w + z_p, and beta^{-1}(w) - z_q = s (w + 1).
  const CycloNum s = pp->center - qq->center;
  const CycloNum sinv = s.inverse();
  sf.beta = Poly::linear(sinv, -(pp->center * sinv));
  sf.y_change = Poly::linear(pp->lead * s.pow(sf.n), pp->constant);
  sf.z_change = Poly::linear(qq->lead * s.pow(sf.m), qq->constant);

  const Poly z = Poly::z();
  if (compose(sf.y_change, compose(z.pow(sf.n), sf.beta)) != p ||
      compose(sf.z_change, compose((z + Poly(1)).pow(sf.m), sf.beta)) != q)
    detail::invariant_failed("standard form failed exact recomposition");
  return sf;
}

enum class Verdict { RationalSolutions, TranscendentalOnly, NoSolutions };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::RationalSolutions: return "RationalSolutions";
    case Verdict::TranscendentalOnly: return "TranscendentalOnly";
    case Verdict::NoSolutions: return "NoSolutions";
  }
  return "?";
}

struct Classification {
  Verdict verdict = Verdict::NoSolutions;
  std::optional<CommonComposite> witness;    // a o p = b o q = w
  std::optional<StandardFormData> standard;  // of the reduced pair
  int d = 0;                                 // lcm(n, m) when standard
  Poly p_tilde, q_tilde;
  int reduced_deg_p = 0, reduced_deg_q = 0;
  int lattice_rank = -1;
  std::string certificate;
  std::optional<GermGroupReport> germ_report;  // diagnostic only
};

struct ClassifyOptions {
  bool germ_diagnostics = true;
  int word_bound = 6;
  int trunc = 8;
};

inline Classification classify_pair(const Poly& p, const Poly& q, const ClassifyOptions& opt = {}) {
  if (p.degree() < 1 || q.degree() < 1) throw InputError("classify: polynomials must be nonconstant");
  Classification c;
  c.p_tilde = p;
  c.q_tilde = q;
  c.reduced_deg_p = p.degree();
  c.reduced_deg_q = q.degree();

  if (p.degree() == 1 || q.degree() == 1) {
    c.verdict = Verdict::RationalSolutions;
    const Poly id = Poly::z();
    auto inverse = [](const Poly& l) {
      const CycloNum a = l.coeff(1).inverse();
      return Poly::linear(a, -(l.coeff(0) * a));
    };
    if (q.degree() == 1)
      c.witness = CommonComposite{p, id, compose(p, inverse(q))};
    else
      c.witness = CommonComposite{q, compose(q, inverse(p)), id};
    c.certificate = "degree-1 member";
    if (compose(c.witness->a, p) != c.witness->w || compose(c.witness->b, q) != c.witness->w)
      detail::invariant_failed("degree-1 witness failed re-verification");
    return c;
  }

  if (auto w = minimal_common_composite(p, q)) {
    c.verdict = Verdict::RationalSolutions;
    c.witness = std::move(*w);
    c.certificate = "common composite of degree lcm(deg p, deg q)";
    return c;
  }

  const CanonicalDiagram cd = canonical_degrees(p, q);
  c.p_tilde = cd.p_tilde;
  c.q_tilde = cd.q_tilde;
  c.reduced_deg_p = cd.p_tilde.degree();
  c.reduced_deg_q = cd.q_tilde.degree();
  if (c.reduced_deg_p < 2 || c.reduced_deg_q < 2)
    detail::invariant_failed("reduced pair has a degree-1 member but no common composite");

  auto sf = standard_form_recognizer(cd.p_tilde, cd.q_tilde);
  if (!sf) {
    c.verdict = Verdict::NoSolutions;
    c.certificate = "irreducible reduced pair is not affinely standard";
    return c;
  }
  c.d = std::lcm(sf->n, sf->m);
  const DiscretenessVerdict lat = zmodule_discreteness(translation_lattice(sf->n, sf->m));
  c.lattice_rank = lat.rank;
  c.standard = std::move(sf);
  if (lcm_is_crystallographic(c.standard->n, c.standard->m)) {
    if (!is_formally_discrete_standard(c.standard->n, c.standard->m))
      detail::invariant_failed("crystallographic standard pair is not formally discrete");
    c.verdict = Verdict::TranscendentalOnly;
    c.certificate = "standard pair with lcm " + std::to_string(c.d);
    return c;
  }
  c.verdict = Verdict::NoSolutions;
  c.certificate = "standard pair with lcm " + std::to_string(c.d) + " not in {2,3,4,6}; translation lattice rank " +
                  std::to_string(lat.rank);
  if (opt.germ_diagnostics) c.germ_report = discreteness_report(cd.p_tilde, cd.q_tilde, opt.word_bound, opt.trunc);
  return c;
}

// ---------------------------------------------------------------------------
// Invariant-function probe.

struct ProbeResult {
  int n = 0, m = 0, d = 0;
  int rank = 0;
  std::string function;
  std::vector<CycloNum> lattice_basis;
  bool membership_ok = false;
  bool enlarged = false;  // 1 - delta^{-1} was outside the translation lattice
  int samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0;
};

namespace detail {

using cplx = std::complex<double>;

/// Weierstrass p and p' on w1 Z + w2 Z, summing 1/sin^2 over the rows of the lattice.
class Weierstrass {
 public:
  Weierstrass(cplx w1, cplx w2) {
    // Lagrange reduction so that Im(tau) >= sqrt(3)/2.
    for (int it = 0; it < 100; ++it) {
      if (std::abs(w2) < std::abs(w1)) std::swap(w1, w2);
      const double k = std::round((w2 / w1).real());
      if (k == 0) break;
      w2 -= k * w1;
    }
    tau_ = w2 / w1;
    if (tau_.imag() < 0) {
      w2 = -w2;
      tau_ = -tau_;
    }
    w1_ = w1;
    w2_ = w2;
    rows_ = 1;
    while (std::exp(-2 * std::numbers::pi * tau_.imag() * rows_) > 1e-18) ++rows_;
    rows_ += 2;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    cplx c = 0;
    for (int k = 1; k <= rows_; ++k) c += 2.0 / sq(std::sin(std::numbers::pi * double(k) * tau_));
    row_const_ = pi2 * (1.0 / 3.0 + c);
  }

  cplx w1() const { return w1_; }
  cplx w2() const { return w2_; }

  /// Representative of z mod L in the parallelogram centred at 0.
  cplx reduce(cplx z) const {
    const cplx u = z / w1_;
    const double y = u.imag() / tau_.imag();
    const double x = u.real() - y * tau_.real();
    return z - std::round(x) * w1_ - std::round(y) * w2_;
  }

  cplx wp(cplx z) const {
    const cplx u = reduce(z) / w1_;
    const double pi = std::numbers::pi;
    cplx s = 0;
    for (int k = -rows_; k <= rows_; ++k) s += 1.0 / sq(std::sin(pi * (u + double(k) * tau_)));
    return (pi * pi * s - row_const_) / (w1_ * w1_);
  }

  cplx wp_prime(cplx z) const {
    const cplx u = reduce(z) / w1_;
    const double pi = std::numbers::pi;
    cplx s = 0;
    for (int k = -rows_; k <= rows_; ++k) {
      const cplx a = pi * (u + double(k) * tau_);
      const cplx sn = std::sin(a);
      s += std::cos(a) / (sn * sn * sn);
    }
    return -2.0 * pi * pi * pi * s / (w1_ * w1_ * w1_);
  }

 private:
  static cplx sq(cplx x) { return x * x; }
  cplx w1_, w2_, tau_;
  int rows_ = 0;
  cplx row_const_;
};

}  // namespace detail

inline ProbeResult invariant_function_probe(int n, int m, int sample_count = 200, std::uint64_t seed = 1) {
  using detail::cplx;
  if (n < 2 || m < 2) throw InputError("probe: n, m must be at least 2");
  if (!lcm_is_crystallographic(n, m)) throw InputError("probe: lcm(n, m) must be in {2, 3, 4, 6}");
  if (sample_count < 1) throw InputError("probe: sample count must be positive");
  ProbeResult r;
  r.n = n;
  r.m = m;
  r.d = std::lcm(n, m);
  r.samples = sample_count;
  r.seed = seed;

  const StandardGenerators g = standard_generators(n, m);
  ZModule lat = translation_lattice(n, m);
  // A rotation about 0 by zeta composed with translation by t is zeta (z + zeta^{-1} t); so F must
  // also be periodic under zeta^{-1} t, which need not lie in the translation lattice.
  const CycloNum zd = primitive_root(r.d);
  std::vector<CycloNum> extra;
  for (const AffineGerm& h : {g.hp, g.hq}) {
    const CycloNum x = h.linear.inverse() * h.shift;
    if (lat.contains(x)) continue;
    for (int k = 0; k < r.d; ++k) extra.push_back(x * zd.pow(k));
  }
  r.enlarged = !extra.empty();
  if (r.enlarged) lat.add(extra);
  r.membership_ok = lat.multiplied_by(zd) == lat;
  for (const AffineGerm& h : {g.hp, g.hq}) r.membership_ok = r.membership_ok && lat.contains(h.linear.inverse() * h.shift);
  if (!r.membership_ok) detail::invariant_failed("probe: 1 - delta^{-1} is not in the enlarged lattice");
  if (!zmodule_discreteness(lat).discrete) detail::invariant_failed("probe: enlarged lattice is not discrete");
  r.lattice_basis = lat.basis();
  r.rank = lat.rank();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  const std::vector<std::pair<cplx, cplx>> gens{{g.hp.linear.to_complex(), g.hp.shift.to_complex()},
                                                 {g.hq.linear.to_complex(), g.hq.shift.to_complex()}};

  std::function<cplx(cplx)> F;
  std::function<cplx()> sample;
  if (r.rank == 1) {
    if (r.d != 2) detail::invariant_failed("probe: rank-1 lattice with rotation order " + std::to_string(r.d));
    const cplx c = r.lattice_basis[0].to_complex();
    r.function = "cos(2 pi z / c)";
    F = [c](cplx z) { return std::cos(2.0 * std::numbers::pi * z / c); };
    sample = [&, c] { return c * cplx(unit(rng), unit(rng)); };
  } else if (r.rank == 2) {
    auto wp = std::make_shared<detail::Weierstrass>(r.lattice_basis[0].to_complex(), r.lattice_basis[1].to_complex());
    switch (r.d) {
      case 2: r.function = "wp"; F = [wp](cplx z) { return wp->wp(z); }; break;
      case 3: r.function = "wp'"; F = [wp](cplx z) { return wp->wp_prime(z); }; break;
      case 4: r.function = "wp^2"; F = [wp](cplx z) { const cplx v = wp->wp(z); return v * v; }; break;
      default: r.function = "wp'^2"; F = [wp](cplx z) { const cplx v = wp->wp_prime(z); return v * v; }; break;
    }
    sample = [&, wp] {
      for (;;) {
        const cplx z = unit(rng) * wp->w1() + unit(rng) * wp->w2();
        const cplx u = wp->reduce(z);
        double dist = std::abs(u);
        for (int a = -1; a <= 1; ++a)
          for (int b = -1; b <= 1; ++b) dist = std::min(dist, std::abs(u - double(a) * wp->w1() - double(b) * wp->w2()));
        if (dist > 0.05) return z;
      }
    };
  } else {
    detail::invariant_failed("probe: crystallographic pair with lattice rank " + std::to_string(r.rank));
  }

  for (int i = 0; i < sample_count; ++i) {
    const cplx z = sample();
    const cplx fz = F(z);
    for (const auto& [zeta, t] : gens) {
      const double res = std::abs(F(zeta * z + t) - fz) / std::max(1.0, std::abs(fz));
      r.max_residual = std::max(r.max_residual, res);
    }
  }
  return r;
}

}  // namespace compositum
