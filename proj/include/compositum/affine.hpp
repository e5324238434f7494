#pragma once

// Affine germs z -> zeta z + t, the translation lattice of the standard pair
// (z^n, (z+1)^m), and the model groups G(k).

#include <functional>
#include <numeric>
#include <type_traits>
#include <unordered_set>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"
#include "compositum/zmodule.hpp"

namespace compositum {

struct AffineGerm {
  CycloNum linear{1};
  CycloNum shift{0};

  static AffineGerm identity() { return {}; }

  /// Checked constructor: the linear part must be a root of unity.
  static AffineGerm make(const CycloNum& linear, const CycloNum& shift) {
    if (!linear.root_of_unity_index()) throw InputError("affine germ: linear part must be a root of unity");
    return AffineGerm{linear, shift};
  }

  bool is_identity() const { return linear.is_one() && shift.is_zero(); }
  bool is_translation() const { return linear.is_one(); }

  friend bool operator==(const AffineGerm& a, const AffineGerm& b) {
    return a.linear == b.linear && a.shift == b.shift;
  }
  friend bool operator!=(const AffineGerm& a, const AffineGerm& b) { return !(a == b); }

  std::string str() const { return "(" + linear.str() + ")*z + (" + shift.str() + ")"; }
};

/// a o b: (zeta, t) o (zeta', t') = (zeta zeta', zeta t' + t).
inline AffineGerm affine_compose(const AffineGerm& a, const AffineGerm& b) {
  return AffineGerm{a.linear * b.linear, a.linear * b.shift + a.shift};
}

inline AffineGerm affine_invert(const AffineGerm& a) {
  CycloNum inv = a.linear.inverse();
  return AffineGerm{inv, -(inv * a.shift)};
}

inline AffineGerm affine_power(const AffineGerm& a, long e) {
  AffineGerm base = e < 0 ? affine_invert(a) : a;
  AffineGerm out;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) out = affine_compose(out, base);
  return out;
}

/// Product g_{|w_1|}^{+-1} o g_{|w_2|}^{+-1} o ...; indices are 1-based, the sign selects the inverse.
inline AffineGerm affine_word(const std::vector<AffineGerm>& gens, const std::vector<int>& word) {
  AffineGerm out;
  for (int w : word) {
    const int i = w < 0 ? -w : w;
    if (i < 1 || i > static_cast<int>(gens.size())) throw InputError("affine_word: generator index out of range");
    out = affine_compose(out, w < 0 ? affine_invert(gens[i - 1]) : gens[i - 1]);
  }
  return out;
}

/// h_p(z) = eps z and h_q(z) = delta z + (delta - 1), eps = zeta_n, delta = zeta_m.
struct StandardGenerators {
  int n, m;
  AffineGerm hp, hq;
};

inline StandardGenerators standard_generators(int n, int m) {
  if (n < 1 || m < 1) throw InputError("standard generators need n, m >= 1");
  CycloNum eps = primitive_root(n), delta = primitive_root(m);
  return {n, m, AffineGerm{eps, CycloNum(0)}, AffineGerm{delta, delta - CycloNum(1)}};
}

// ---------------------------------------------------------------------------
// Integer fast path for the subgroup of Z[zeta_d] x mu_d generated by h_p, h_q.

namespace detail {

struct IntAffine {
  int e = 0;                  // linear part zeta_d^e
  std::vector<long long> t;  // shift in the power basis of Q(zeta_d)

  friend bool operator==(const IntAffine& a, const IntAffine& b) { return a.e == b.e && a.t == b.t; }
};

struct IntAffineHash {
  std::size_t operator()(const IntAffine& a) const {
    std::size_t h = std::hash<int>()(a.e);
    for (long long x : a.t) h = h * 1000003u ^ std::hash<long long>()(x);
    return h;
  }
};

class IntCycloRing {
 public:
  explicit IntCycloRing(int d) : data_(cyclo_data(d)) {}

  int order() const { return data_.order; }
  int phi() const { return data_.phi; }

  std::vector<long long> root_minus_one(int k) const {
    std::vector<long long> v = coords(k);
    v[0] -= 1;
    return v;
  }

  std::vector<long long> coords(int k) const {
    const auto& pc = data_.power_coords[mod_floor(k, data_.order)];
    return std::vector<long long>(pc.begin(), pc.end());
  }

  /// zeta^k * v.
  std::vector<long long> rotate(const std::vector<long long>& v, int k) const {
    std::vector<long long> out(data_.phi, 0);
    for (int i = 0; i < data_.phi; ++i) {
      if (v[i] == 0) continue;
      const auto& pc = data_.power_coords[mod_floor(i + k, data_.order)];
      for (int j = 0; j < data_.phi; ++j)
        if (pc[j] != 0) out[j] = int_add(out[j], int_mul(v[i], pc[j]));
    }
    return out;
  }

  IntAffine compose(const IntAffine& a, const IntAffine& b) const {
    IntAffine out;
    out.e = static_cast<int>(mod_floor(a.e + b.e, data_.order));
    out.t = rotate(b.t, a.e);
    for (int i = 0; i < data_.phi; ++i) out.t[i] = int_add(out.t[i], a.t[i]);
    return out;
  }

  CycloNum to_cyclo(const std::vector<long long>& v) const {
    std::vector<Rational> c;
    for (long long x : v) c.emplace_back(static_cast<long>(x));
    return CycloNum::from_coeffs(data_.order, c);
  }

 private:
  const CycloData& data_;
};

template <class Int>
HermiteLattice<Int> lattice_from(int dim, const std::vector<std::vector<long long>>& vecs) {
  HermiteLattice<Int> lat(dim);
  for (const auto& v : vecs) lat.insert(widen<Int>(v));
  return lat;
}

// Saturates the lattice under multiplication by zeta^a for each a in `rots`.
template <class Int>
void close_under_rotations(HermiteLattice<Int>& lat, const IntCycloRing& ring, const std::vector<int>& rots) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& row : lat.basis()) {
      std::vector<long long> v;
      for (const Int& x : row) {
        if constexpr (std::is_same_v<Int, long long>) {
          v.push_back(x);
        } else {
          if (!x.fits_slong_p()) throw Overflow();
          v.push_back(x.get_si());
        }
      }
      for (int a : rots) {
        std::vector<long long> r = ring.rotate(v, a);
        if (!lat.insert(widen<Int>(r))) changed = true;
      }
    }
  }
}

template <class Int>
std::vector<std::vector<long long>> rows_as_ll(const HermiteLattice<Int>& lat) {
  std::vector<std::vector<long long>> out;
  for (const auto& row : lat.basis()) {
    std::vector<long long> v;
    for (const Int& x : row) {
      if constexpr (std::is_same_v<Int, long long>) {
        v.push_back(x);
      } else {
        if (!x.fits_slong_p()) throw Overflow();
        v.push_back(x.get_si());
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

// BFS over words of length <= word_bound in h_p^{+-1}, h_q^{+-1}; returns the shifts of the
// distinct translations found.
inline std::vector<std::vector<long long>> standard_translation_vectors(const IntCycloRing& ring, int n, int m,
                                                                        int word_bound) {
  const int d = ring.order();
  const int a = d / n, b = d / m;
  std::vector<long long> zero(ring.phi(), 0);
  std::vector<IntAffine> gens{{a, zero}, {d - a, zero}, {b, ring.root_minus_one(b)}};
  {
    IntAffine hq_inv{d - b, ring.rotate(ring.root_minus_one(b), -b)};
    for (long long& x : hq_inv.t) x = -x;
    gens.push_back(std::move(hq_inv));
  }
  std::unordered_set<IntAffine, IntAffineHash> seen;
  std::vector<IntAffine> frontier{{0, zero}};
  seen.insert(frontier[0]);
  std::vector<std::vector<long long>> vecs;
  for (int len = 1; len <= word_bound; ++len) {
    std::vector<IntAffine> next;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        IntAffine y = ring.compose(x, g);
        if (!seen.insert(y).second) continue;
        if (y.e == 0) vecs.push_back(y.t);
        next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  return vecs;
}

}  // namespace detail

/// Shifts of the translations among words of length <= word_bound in h_p, h_q.
inline std::vector<CycloNum> translation_word_shifts(int n, int m, int word_bound) {
  if (n < 2 || m < 2) throw InputError("translation_lattice: n, m must be at least 2");
  detail::IntCycloRing ring(std::lcm(n, m));
  std::vector<CycloNum> out;
  for (const auto& v : detail::standard_translation_vectors(ring, n, m, word_bound)) out.push_back(ring.to_cyclo(v));
  return out;
}

/// Z-module generated by the translation shifts of words of length <= word_bound, closed under
/// multiplication by eps and delta.
inline ZModule translation_lattice(int n, int m, int word_bound = 8) {
  if (n < 2 || m < 2) throw InputError("translation_lattice: n, m must be at least 2");
  const int d = std::lcm(n, m);
  detail::IntCycloRing ring(d);
  const std::vector<int> rots{d / n, d / m};
  const auto vecs = detail::standard_translation_vectors(ring, n, m, word_bound);
  try {
    auto lat = detail::lattice_from<long long>(ring.phi(), vecs);
    detail::close_under_rotations(lat, ring, rots);
    return ZModule::from_integer_rows(d, detail::rows_as_ll(lat));
  } catch (const detail::Overflow&) {
    auto lat = detail::lattice_from<Integer>(ring.phi(), vecs);
    detail::close_under_rotations(lat, ring, rots);
    return ZModule::from_integer_rows(d, detail::rows_as_ll(lat));
  }
}

struct DiscretenessVerdict {
  bool discrete = false;
  int rank = 0;
};

/// Discrete in C iff rank <= 2 and, at rank 2, the basis ratio is non-real.
inline DiscretenessVerdict zmodule_discreteness(const ZModule& M) {
  DiscretenessVerdict v;
  v.rank = M.rank();
  if (v.rank <= 1) {
    v.discrete = true;
  } else if (v.rank == 2) {
    std::vector<CycloNum> b = M.basis();
    CycloNum ratio = b[0] / b[1];
    v.discrete = ratio.conj() != ratio;
  }
  return v;
}

inline bool lcm_is_crystallographic(int n, int m) {
  const int d = std::lcm(n, m);
  return d == 2 || d == 3 || d == 4 || d == 6;
}

/// Lattice verdict for (z^n, (z+1)^m), cross-checked against lcm(n, m) in {2, 3, 4, 6}.
inline bool is_formally_discrete_standard(int n, int m, int word_bound = 8) {
  DiscretenessVerdict v = zmodule_discreteness(translation_lattice(n, m, word_bound));
  const bool predicate = lcm_is_crystallographic(n, m);
  if (v.discrete != predicate)
    detail::invariant_failed("lattice discreteness disagrees with the lcm criterion for (" + std::to_string(n) +
                             "," + std::to_string(m) + ")");
  return v.discrete;
}

// ---------------------------------------------------------------------------
// G(k) = { lambda g^t }, multiplied by (lambda, t) x (mu, s) = (lambda mu, t mu^k + s).

struct GkElement {
  int k = 1;
  CycloNum lambda{1};
  CycloNum t{0};

  friend bool operator==(const GkElement& a, const GkElement& b) {
    return a.k == b.k && a.lambda == b.lambda && a.t == b.t;
  }
  friend bool operator!=(const GkElement& a, const GkElement& b) { return !(a == b); }
};

inline GkElement gk_identity(int k) { return GkElement{k, CycloNum(1), CycloNum(0)}; }

inline GkElement gk_compose(const GkElement& a, const GkElement& b) {
  if (a.k != b.k) throw InputError("gk_compose: elements live in different groups G(k)");
  if (a.lambda.is_zero() || b.lambda.is_zero()) throw InputError("gk_compose: lambda must be nonzero");
  return GkElement{a.k, a.lambda * b.lambda, a.t * b.lambda.pow(a.k) + b.t};
}

inline GkElement gk_inverse(const GkElement& a) {
  return GkElement{a.k, a.lambda.inverse(), -(a.t * a.lambda.pow(-a.k))};
}

inline GkElement gk_power(const GkElement& a, long e) {
  GkElement base = e < 0 ? gk_inverse(a) : a;
  GkElement out = gk_identity(a.k);
  for (long i = 0; i < (e < 0 ? -e : e); ++i) out = gk_compose(out, base);
  return out;
}

/// Center C(k) = { lambda : lambda^k = 1 } (with t = 0).
inline bool gk_is_central(const GkElement& a) { return a.t.is_zero() && a.lambda.pow(a.k).is_one(); }

/// G_d(k) -> G_d(1), lambda g^t -> lambda^k g^t.
inline GkElement gk_flatten(const GkElement& a, int d) {
  if (d < 1) throw InputError("gk_flatten: d must be positive");
  if (std::gcd(d, a.k) != 1) throw InputError("gk_flatten: gcd(d, k) must be 1");
  if (!a.lambda.pow(d).is_one()) throw InputError("gk_flatten: lambda^d must be 1");
  return GkElement{1, a.lambda.pow(a.k), a.t};
}

}  // namespace compositum
