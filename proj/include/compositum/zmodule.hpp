#pragma once

// Finitely generated additive subgroups of Q(zeta_d), stored as a Hermite
// normal form of integer coordinate vectors over a common denominator.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"

namespace compositum {

namespace detail {

// Integer ops for the HNF template: checked 64-bit and GMP.
struct Overflow : std::overflow_error {
  Overflow() : std::overflow_error("int64 overflow in HNF") {}
};

inline long long int_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow();
  return r;
}
inline long long int_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow();
  return r;
}
inline long long int_sub(long long a, long long b) {
  long long r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow();
  return r;
}
inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline bool is_zero(long long a) { return a == 0; }

inline Integer int_mul(const Integer& a, const Integer& b) { return a * b; }
inline Integer int_add(const Integer& a, const Integer& b) { return a + b; }
inline Integer int_sub(const Integer& a, const Integer& b) { return a - b; }
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline bool is_zero(const Integer& a) { return sgn(a) == 0; }

template <class Int>
std::vector<Int> widen(const std::vector<long long>& v) {
  std::vector<Int> out;
  out.reserve(v.size());
  for (long long x : v) {
    if constexpr (std::is_same_v<Int, long long>) out.push_back(x);
    else out.push_back(Int(static_cast<long>(x)));
  }
  return out;
}

template <class Int>
void ext_gcd(const Int& a, const Int& b, Int& g, Int& x, Int& y) {
  // a x + b y = g >= 0
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (!is_zero(r)) {
    Int q = floor_div(old_r, r);
    Int tmp = int_sub(old_r, int_mul(q, r));
    old_r = r;
    r = tmp;
    tmp = int_sub(old_s, int_mul(q, s));
    old_s = s;
    s = tmp;
    tmp = int_sub(old_t, int_mul(q, t));
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = int_sub(Int(0), old_r);
    old_s = int_sub(Int(0), old_s);
    old_t = int_sub(Int(0), old_t);
  }
  g = old_r;
  x = old_s;
  y = old_t;
}

}  // namespace detail

/// Row-style Hermite normal form of a sublattice of Z^dim.
template <class Int>
class HermiteLattice {
 public:
  using Vec = std::vector<Int>;

  explicit HermiteLattice(int dim = 0) : dim_(dim) {}

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  const std::vector<Vec>& rows() const { return rows_; }

  /// Reduces v against the basis; returns true iff v was already a member.
  bool insert(Vec v) {
    for (int c = 0; c < dim_; ++c) {
      if (detail::is_zero(v[c])) continue;
      auto it = std::find_if(rows_.begin(), rows_.end(), [c](const Pivoted& r) { return r.col == c; });
      if (it == rows_.end()) {
        if (v[c] < 0)
          for (Int& x : v) x = detail::int_sub(Int(0), x);
        auto pos = std::find_if(rows_.begin(), rows_.end(), [c](const Pivoted& r) { return r.col > c; });
        rows_.insert(pos, Pivoted{c, std::move(v)});
        reduce();
        return false;
      }
      Vec& r = it->v;
      Int q = detail::floor_div(v[c], r[c]);
      if (detail::is_zero(detail::int_sub(v[c], detail::int_mul(q, r[c])))) {
        for (int i = c; i < dim_; ++i) v[i] = detail::int_sub(v[i], detail::int_mul(q, r[i]));
        continue;
      }
      Int g, x, y;
      detail::ext_gcd(r[c], v[c], g, x, y);
      Int rc = r[c] / g, vc = v[c] / g;
      Vec nr(dim_), nv(dim_);
      for (int i = 0; i < dim_; ++i) {
        nr[i] = detail::int_add(detail::int_mul(x, r[i]), detail::int_mul(y, v[i]));
        nv[i] = detail::int_sub(detail::int_mul(vc, r[i]), detail::int_mul(rc, v[i]));
      }
      r = std::move(nr);
      v = std::move(nv);
    }
    reduce();
    return true;
  }

  bool contains(Vec v) const {
    for (int c = 0; c < dim_; ++c) {
      if (detail::is_zero(v[c])) continue;
      auto it = std::find_if(rows_.begin(), rows_.end(), [c](const Pivoted& r) { return r.col == c; });
      if (it == rows_.end()) return false;
      const Vec& r = it->v;
      Int q = detail::floor_div(v[c], r[c]);
      if (!detail::is_zero(detail::int_sub(v[c], detail::int_mul(q, r[c])))) return false;
      for (int i = c; i < dim_; ++i) v[i] = detail::int_sub(v[i], detail::int_mul(q, r[i]));
    }
    return true;
  }

  std::vector<Vec> basis() const {
    std::vector<Vec> out;
    for (const Pivoted& r : rows_) out.push_back(r.v);
    return out;
  }

  friend bool operator==(const HermiteLattice& a, const HermiteLattice& b) {
    if (a.dim_ != b.dim_ || a.rows_.size() != b.rows_.size()) return false;
    for (std::size_t i = 0; i < a.rows_.size(); ++i)
      if (a.rows_[i].col != b.rows_[i].col || a.rows_[i].v != b.rows_[i].v) return false;
    return true;
  }

 private:
  struct Pivoted {
    int col;
    Vec v;
  };

  // Off-pivot entries above each pivot into [0, pivot).
  void reduce() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const int c = rows_[i].col;
      const Vec& piv = rows_[i].v;
      for (std::size_t j = 0; j < i; ++j) {
        Vec& row = rows_[j].v;
        Int q = detail::floor_div(row[c], piv[c]);
        if (detail::is_zero(q)) continue;
        for (int k = c; k < dim_; ++k) row[k] = detail::int_sub(row[k], detail::int_mul(q, piv[k]));
      }
    }
  }

  int dim_;
  std::vector<Pivoted> rows_;
};

/// Additive subgroup of Q(zeta_order) generated by finitely many elements.
class ZModule {
 public:
  ZModule() : order_(1), dim_(1), denom_(1), lattice_(1) {}

  static ZModule generated_by(int order, const std::vector<CycloNum>& gens) {
    ZModule m(order);
    m.add(gens);
    return m;
  }

  /// Builds from integer coordinate vectors (already at this order's power basis).
  static ZModule from_integer_rows(int order, const std::vector<std::vector<long long>>& rows) {
    ZModule m(order);
    for (const auto& r : rows) {
      m.lattice_.insert(detail::widen<Integer>(r));
    }
    return m;
  }

  int order() const { return order_; }
  int rank() const { return lattice_.rank(); }
  const Integer& denominator() const { return denom_; }

  void add(const std::vector<CycloNum>& gens) {
    for (const CycloNum& g : gens) {
      if (order_ % g.order() != 0) throw InputError("ZModule: generator outside the module's cyclotomic field");
      std::vector<Rational> c = g.coords_at(order_);
      Integer l = denom_;
      for (const Rational& r : c) l = lcm(l, Integer(r.get_den()));
      rescale(l);
      std::vector<Integer> v(dim_);
      for (int i = 0; i < dim_; ++i) {
        Rational s = c[i] * Rational(denom_);
        v[i] = s.get_num();
      }
      lattice_.insert(std::move(v));
    }
  }

  bool contains(const CycloNum& x) const {
    if (x.is_zero()) return true;
    if (order_ % x.order() != 0) return false;
    std::vector<Rational> c = x.coords_at(order_);
    std::vector<Integer> v(dim_);
    for (int i = 0; i < dim_; ++i) {
      Rational s = c[i] * Rational(denom_);
      if (s.get_den() != 1) return false;
      v[i] = s.get_num();
    }
    return lattice_.contains(std::move(v));
  }

  bool contains(const ZModule& other) const {
    for (const CycloNum& b : other.basis())
      if (!contains(b)) return false;
    return true;
  }

  std::vector<CycloNum> basis() const {
    std::vector<CycloNum> out;
    for (const auto& row : lattice_.basis()) {
      std::vector<Rational> c(dim_);
      for (int i = 0; i < dim_; ++i) {
        c[i] = Rational(row[i], denom_);
        c[i].canonicalize();
      }
      out.push_back(CycloNum::from_coeffs(order_, c));
    }
    return out;
  }

  ZModule multiplied_by(const CycloNum& x) const {
    std::vector<CycloNum> gens;
    for (const CycloNum& b : basis()) gens.push_back(b * x);
    return generated_by(order_, gens);
  }

  friend bool operator==(const ZModule& a, const ZModule& b) {
    return a.contains(b) && b.contains(a);
  }
  friend bool operator!=(const ZModule& a, const ZModule& b) { return !(a == b); }

  /// [this : sub] for a sublattice of equal rank, from Gram determinants.
  Integer index_of(const ZModule& sub) const {
    if (sub.rank() != rank() || !contains(sub)) throw InputError("index_of: not a full-rank sublattice");
    Rational ratio = gram_det(sub.basis()) / gram_det(basis());
    if (ratio.get_den() != 1) detail::invariant_failed("lattice index is not an integer");
    Integer root = sqrt(ratio.get_num());
    if (root * root != ratio.get_num()) detail::invariant_failed("lattice index is not a perfect square root");
    return root;
  }

  std::string str() const {
    std::string s = "<";
    bool first = true;
    for (const CycloNum& b : basis()) {
      if (!first) s += ", ";
      first = false;
      s += b.str();
    }
    return s + ">";
  }

 private:
  explicit ZModule(int order)
      : order_(order), dim_(cyclo_data(order).phi), denom_(1), lattice_(cyclo_data(order).phi) {}

  void rescale(const Integer& new_denom) {
    if (new_denom == denom_) return;
    Integer f = new_denom / denom_;
    HermiteLattice<Integer> scaled(dim_);
    for (auto row : lattice_.basis()) {
      for (Integer& x : row) x *= f;
      scaled.insert(std::move(row));
    }
    lattice_ = std::move(scaled);
    denom_ = new_denom;
  }

  Rational gram_det(const std::vector<CycloNum>& b) const {
    const std::size_t r = b.size();
    std::vector<std::vector<Rational>> coords;
    for (const CycloNum& x : b) coords.push_back(x.coords_at(order_));
    std::vector<std::vector<Rational>> g(r, std::vector<Rational>(r));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j)
        for (int k = 0; k < dim_; ++k) g[i][j] += coords[i][k] * coords[j][k];
    Rational det = 1;
    for (std::size_t c = 0; c < r; ++c) {
      std::size_t p = c;
      while (p < r && sgn(g[p][c]) == 0) ++p;
      if (p == r) return 0;
      if (p != c) {
        std::swap(g[p], g[c]);
        det = -det;
      }
      det *= g[c][c];
      for (std::size_t i = c + 1; i < r; ++i) {
        Rational f = g[i][c] / g[c][c];
        for (std::size_t j = c; j < r; ++j) g[i][j] -= f * g[c][j];
      }
    }
    return det;
  }

  int order_;
  int dim_;
  Integer denom_;
  HermiteLattice<Integer> lattice_;
};

}  // namespace compositum
