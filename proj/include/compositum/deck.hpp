#pragma once

// Deck groups T_p = { h : p o h = p } as truncated germs at infinity, bounded
// closure of the group they generate, and per-level residue reports.

#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "compositum/affine.hpp"
#include "compositum/cyclo.hpp"
#include "compositum/errors.hpp"
#include "compositum/germ.hpp"
#include "compositum/poly.hpp"
#include "compositum/zmodule.hpp"

namespace compositum {

namespace detail {

// Elements of Z[zeta_N] in the power basis; the deck recursion runs here so that no rational
// canonicalization happens in the inner loops.
using ZVec = std::vector<Integer>;

struct ZCyclo {
  const CycloData* data;

  ZVec zero() const { return ZVec(data->phi, Integer(0)); }

  ZVec from(const CycloNum& x) const {
    ZVec out = zero();
    std::vector<Rational> c = x.coords_at(data->order);
    for (int i = 0; i < data->phi; ++i) {
      if (c[i].get_den() != 1) invariant_failed("deck: coefficient is not integral");
      out[i] = c[i].get_num();
    }
    return out;
  }

  CycloNum to_cyclo(const ZVec& v, const Integer& den) const {
    std::vector<Rational> c(data->phi);
    for (int i = 0; i < data->phi; ++i) {
      c[i] = Rational(v[i], den);
      c[i].canonicalize();
    }
    return CycloNum::from_coeffs(data->order, c);
  }

  // acc += a * b
  void fma(ZVec& acc, const ZVec& a, const ZVec& b, std::vector<Integer>& scratch) const {
    const int phi = data->phi;
    scratch.assign(2 * phi - 1, Integer(0));
    bool any = false;
    for (int i = 0; i < phi; ++i) {
      if (sgn(a[i]) == 0) continue;
      for (int j = 0; j < phi; ++j)
        if (sgn(b[j]) != 0) {
          mpz_addmul(scratch[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
          any = true;
        }
    }
    if (!any) return;
    for (int i = 0; i < phi; ++i) acc[i] += scratch[i];
    for (int k = phi; k < 2 * phi - 1; ++k) {
      if (sgn(scratch[k]) == 0) continue;
      const auto& pc = data->power_coords[k % data->order];
      for (int i = 0; i < phi; ++i)
        if (pc[i] != 0) acc[i] += scratch[k] * pc[i];
    }
  }

  ZVec mul(const ZVec& a, const ZVec& b) const {
    ZVec out = zero();
    std::vector<Integer> scratch;
    fma(out, a, b, scratch);
    return out;
  }

  static bool is_zero(const ZVec& v) {
    for (const Integer& x : v)
      if (sgn(x) != 0) return false;
    return true;
  }
};

// p scaled to integral power-basis coordinates at order N, together with the pivot data:
// D = n Nm(lc) and lc^{-1} = M / Nm(lc) with M integral.
struct IntegralDeckData {
  ZCyclo ring;
  std::vector<ZVec> p;  // coefficients low to high
  ZVec m;
  Integer d;
  std::vector<Integer> d2pow;  // (D^2)^s
};

inline IntegralDeckData integral_deck_data(const Poly& p, int order, int max_pow) {
  IntegralDeckData out{ZCyclo{&cyclo_data(order)}, {}, {}, Integer(0), {}};
  Integer den = 1;
  for (const CycloNum& c : p.coeffs())
    for (const Rational& r : c.coords_at(order)) den = lcm(den, Integer(r.get_den()));
  Poly ps = p.scaled(CycloNum(Rational(den)));
  for (const CycloNum& c : ps.coeffs()) out.p.push_back(out.ring.from(c));
  const CycloNum& lc = ps.leading();
  CycloNum m(1);
  if (!lc.is_rational()) {
    const int lo = lc.order();
    for (long a = 2; a < lo; ++a)
      if (std::gcd(a, static_cast<long>(lo)) == 1) m *= lc.galois(a);
  }
  const CycloNum nm = lc * m;
  if (!nm.is_rational() || nm.rational_value().get_den() != 1) invariant_failed("deck: norm of the leading coefficient");
  out.m = out.ring.from(m);
  out.d = Integer(p.degree()) * nm.rational_value().get_num();
  const Integer d2 = out.d * out.d;
  out.d2pow.push_back(Integer(1));
  for (int s = 1; s <= max_pow; ++s) out.d2pow.push_back(out.d2pow.back() * d2);
  return out;
}

// Checks p(h(z)) = p(z) through the window with every power of the rescaled series
// recomputed from scratch: sum_k p_k D^{2(n-k)} [S^k]_{t-(n-k)} = p_{n-t} D^{2t}.
inline bool deck_identity_holds_integral(const IntegralDeckData& dd, const std::vector<ZVec>& s) {
  const ZCyclo& R = dd.ring;
  const int n = static_cast<int>(dd.p.size()) - 1;
  const std::size_t kk = s.size() - 1;
  std::vector<ZVec> lhs(kk + 1, R.zero()), pw(kk + 1, R.zero());
  pw[0][0] = 1;
  std::vector<Integer> scratch;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      std::vector<ZVec> next(kk + 1, R.zero());
      for (std::size_t i = 0; i <= kk; ++i) {
        if (ZCyclo::is_zero(pw[i])) continue;
        for (std::size_t j = 0; i + j <= kk; ++j) R.fma(next[i + j], pw[i], s[j], scratch);
      }
      pw = std::move(next);
    }
    if (ZCyclo::is_zero(dd.p[k])) continue;
    ZVec pk = dd.p[k];
    for (Integer& x : pk) x *= dd.d2pow[n - k];
    for (std::size_t t = static_cast<std::size_t>(n - k); t <= kk; ++t) R.fma(lhs[t], pk, pw[t - (n - k)], scratch);
  }
  for (std::size_t t = 0; t <= kk; ++t) {
    ZVec rhs = static_cast<int>(t) <= n ? dd.p[n - t] : R.zero();
    for (Integer& x : rhs) x *= dd.d2pow[t];
    if (lhs[t] != rhs) return false;
  }
  return true;
}

// Rescaled deck coefficients C_t = c_t D^{2t}, all in Z[zeta_N].
inline std::vector<ZVec> deck_recursion_integral(const IntegralDeckData& dd, const ZVec& eps, const ZVec& eps_inv,
                                                 int trunc) {
  const ZCyclo& R = dd.ring;
  const int n = static_cast<int>(dd.p.size()) - 1;
  const std::size_t kk = static_cast<std::size_t>(trunc);
  std::vector<ZVec> c(kk + 1, R.zero());
  c[0] = eps;
  std::vector<std::vector<ZVec>> pw(n + 1, std::vector<ZVec>(kk + 1, R.zero()));
  std::vector<ZVec> eps_pow(n + 1, R.zero());
  eps_pow[0][0] = 1;
  for (int k = 1; k <= n; ++k) eps_pow[k] = R.mul(eps_pow[k - 1], eps);
  for (int k = 0; k <= n; ++k) pw[k][0] = eps_pow[k];
  ZVec pivot = dd.m;  // eps^{1-n} M
  for (int k = 1; k < n; ++k) pivot = R.mul(pivot, eps_inv);
  std::vector<Integer> scratch;
  for (std::size_t t = 1; t <= kk; ++t) {
    for (int k = 1; k <= n; ++k) {
      ZVec acc = R.zero();
      for (std::size_t i = 0; i < t; ++i) R.fma(acc, c[i], pw[k - 1][t - i], scratch);
      pw[k][t] = std::move(acc);
    }
    ZVec rhs = static_cast<int>(t) <= n ? dd.p[n - t] : R.zero();
    for (Integer& x : rhs) x *= dd.d2pow[t];
    for (int k = std::max(0, n - static_cast<int>(t)); k <= n; ++k) {
      if (ZCyclo::is_zero(dd.p[k])) continue;
      ZVec term = R.zero();
      R.fma(term, dd.p[k], pw[k][t - (n - k)], scratch);
      const Integer& w = dd.d2pow[n - k];
      for (int i = 0; i < R.data->phi; ++i) rhs[i] -= term[i] * w;
    }
    ZVec ct = R.mul(rhs, pivot);
    for (Integer& x : ct) {
      Integer q, r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), dd.d.get_mpz_t());
      if (sgn(r) != 0) invariant_failed("deck recursion: rescaled coefficient is not integral");
      x = std::move(q);
    }
    c[t] = std::move(ct);
    if (ZCyclo::is_zero(c[t])) continue;
    for (int k = 1; k <= n; ++k) {
      ZVec inc = R.mul(eps_pow[k - 1], c[t]);
      for (int i = 0; i < R.data->phi; ++i) pw[k][t][i] += inc[i] * k;
    }
  }
  return c;
}

}  // namespace detail

/// The deck germ of p with linear coefficient eps (eps^deg p = 1), through window K.
inline Germ deck_germ(const Poly& p, const CycloNum& eps, int trunc) {
  const int n = p.degree();
  if (n < 1) throw InputError("deck_group: polynomial must be nonconstant");
  if (!eps.pow(n).is_one()) throw InputError("deck_germ: eps must be a deg p-th root of unity");
  const int order = std::lcm(std::lcm(n, p.coefficient_order()), eps.order());
  detail::IntegralDeckData dd = detail::integral_deck_data(p, order, trunc);
  std::vector<detail::ZVec> c =
      detail::deck_recursion_integral(dd, dd.ring.from(eps), dd.ring.from(eps.pow(n - 1)), trunc);
  if (!detail::deck_identity_holds_integral(dd, c)) detail::invariant_failed("deck germ fails p o h = p");
  std::vector<CycloNum> coeffs;
  coeffs.reserve(c.size());
  for (std::size_t t = 0; t < c.size(); ++t) coeffs.push_back(dd.ring.to_cyclo(c[t], dd.d2pow[t]));
  Germ h(std::move(coeffs), trunc, false);
  if (h.is_affine()) {
    Poly hp = Poly::linear(h.coefficient(1), h.coefficient(0));
    if (compose(p, hp) == p) h = Germ(h.stored(), trunc, true);
  }
  return h;
}

/// Exact check of p o h = p through the window of h.
inline bool deck_identity_holds(const Poly& p, const Germ& h) {
  const int order = std::lcm(std::lcm(p.degree(), p.coefficient_order()), h.coefficient_order());
  const int kk = h.trunc_order();
  detail::IntegralDeckData dd = detail::integral_deck_data(p, order, kk);
  // C_t = c_t D^{2t} must be integral for the rescaled identity to make sense; clear any
  // remaining denominators by one more global factor E, which scales S^k by E^k.
  std::vector<CycloNum> cs(kk + 1);
  Integer e = 1;
  for (int t = 0; t <= kk; ++t) {
    cs[t] = h.coefficient(1 - t).scaled(Rational(dd.d2pow[t]));
    for (const Rational& r : cs[t].coords_at(order)) e = lcm(e, Integer(r.get_den()));
  }
  if (e != 1) {
    // fall back to the direct rational check
    const std::size_t ks = static_cast<std::size_t>(kk);
    const series::Series<CycloNum> s = h.window();
    std::vector<CycloNum> lhs(ks + 1);
    series::Series<CycloNum> pw(ks + 1);
    pw[0] = CycloNum(1);
    const int n = p.degree();
    for (int k = 0; k <= n; ++k) {
      if (k > 0) pw = series::mul(pw, s, ks);
      const CycloNum& pk = p.coeffs()[k];
      if (pk.is_zero()) continue;
      for (std::size_t t = static_cast<std::size_t>(n - k); t <= ks; ++t) lhs[t] += pk * pw[t - (n - k)];
    }
    for (std::size_t t = 0; t <= ks; ++t)
      if (lhs[t] != p.coeff(n - static_cast<int>(t))) return false;
    return true;
  }
  std::vector<detail::ZVec> s;
  for (const CycloNum& x : cs) s.push_back(dd.ring.from(x));
  return detail::deck_identity_holds_integral(dd, s);
}

/// All deg p deck germs; entry k has linear coefficient zeta_n^k, so entry 1 generates.
inline std::vector<Germ> deck_group(const Poly& p, int trunc = kDefaultTrunc) {
  const int n = p.degree();
  if (n < 1) throw InputError("deck_group: polynomial must be nonconstant");
  std::vector<Germ> out;
  for (int k = 0; k < n; ++k) out.push_back(deck_germ(p, CycloNum::root(n, k), trunc));
  return out;
}

struct ClosureElement {
  Germ germ;
  std::vector<int> word;  // 1-based signed generator indices, composed left to right
  bool flagged = false;   // equal to another element within the window, distinct at 2K
};

struct GroupClosure {
  std::vector<ClosureElement> elements;
  std::vector<std::size_t> count_by_length;  // new elements first reached at each length
  std::size_t flagged = 0;
};

namespace detail {

inline Germ replay_word(const std::vector<Germ>& gens, const std::vector<Germ>& inverses, const std::vector<int>& word,
                        int trunc) {
  Germ g = Germ::identity(trunc);
  for (int w : word) g = compose(g, w > 0 ? gens[w - 1] : inverses[-w - 1]);
  return g;
}

inline int closure_order(const std::vector<Germ>& gens) {
  int n = 1;
  for (const Germ& g : gens) n = std::lcm(n, g.coefficient_order());
  return n;
}

}  // namespace detail

/// Distinct products of length <= word_bound in gens and their inverses. When gens2 (the same
/// generators at doubled truncation) is given, window collisions between non-exact germs are
/// re-decided at 2K; otherwise both are kept and flagged.
inline GroupClosure group_closure(const std::vector<Germ>& gens, int word_bound,
                                  const std::vector<Germ>* gens2 = nullptr) {
  if (gens.empty()) throw InputError("group_closure: no generators");
  const int trunc = gens[0].trunc_order();
  std::vector<Germ> inverses, inverses2;
  for (const Germ& g : gens) inverses.push_back(invert(g));
  if (gens2)
    for (const Germ& g : *gens2) inverses2.push_back(invert(g));
  std::vector<Germ> all = gens;
  all.insert(all.end(), inverses.begin(), inverses.end());
  // coefficients may grow in order under composition only through the generators' fields
  int order = detail::closure_order(all);

  GroupClosure out;
  std::unordered_map<std::string, std::vector<std::size_t>> index;
  auto key_of = [&](const Germ& g) { return g.key_at(order); };
  out.elements.push_back({Germ::identity(trunc), {}, false});
  index[key_of(out.elements[0].germ)].push_back(0);
  out.count_by_length.push_back(1);
  std::vector<std::size_t> frontier{0};
  const int ng = static_cast<int>(gens.size());
  for (int len = 1; len <= word_bound; ++len) {
    std::vector<std::size_t> next;
    for (std::size_t fi : frontier) {
      for (int s = 0; s < 2 * ng; ++s) {
        Germ y = compose(out.elements[fi].germ, all[s]);
        std::vector<int> word = out.elements[fi].word;
        word.push_back(s < ng ? s + 1 : -(s - ng + 1));
        const std::string key = key_of(y);
        auto& bucket = index[key];
        bool duplicate = false, flag = false;
        for (std::size_t j : bucket) {
          const ClosureElement& other = out.elements[j];
          if (y.is_exact() && other.germ.is_exact()) {
            duplicate = true;
            break;
          }
          if (gens2) {
            Germ a = detail::replay_word(*gens2, inverses2, word, 2 * trunc);
            Germ b = detail::replay_word(*gens2, inverses2, other.word, 2 * trunc);
            if (a.key_at(order) == b.key_at(order)) {
              duplicate = true;
              break;
            }
          } else {
            flag = true;
          }
        }
        if (duplicate) continue;
        if (flag) {
          ++out.flagged;
          for (std::size_t j : bucket) out.elements[j].flagged = true;
        }
        bucket.push_back(out.elements.size());
        next.push_back(out.elements.size());
        out.elements.push_back({std::move(y), std::move(word), flag});
      }
    }
    out.count_by_length.push_back(next.size());
    frontier = std::move(next);
  }
  return out;
}

struct LevelVerdict {
  int level = 1;
  int rank = 0;
  bool discrete = true;
};

struct GermGroupReport {
  std::vector<std::size_t> elements_found;           // by word length
  std::map<int, std::vector<CycloNum>> levels;      // level -> distinct residues
  std::vector<int> nontrivial_levels;               // ascending
  std::vector<LevelVerdict> lattice_verdicts;
  std::size_t outside_j1 = 0;                       // the Gamma / Gamma_1 part
  std::size_t identity_in_window = 0;               // non-exact words that vanish in the window
  int word_bound = 0;
  int trunc_order = 0;
  std::string verdict;
};

/// Residue evidence for formal discreteness of <T_p, T_q>, from words of length <= word_bound
/// in primitive deck generators. Violations are certificates; "consistent" holds only up to the bound.
inline GermGroupReport discreteness_report(const Poly& p, const Poly& q, int word_bound = 8, int trunc = kDefaultTrunc) {
  if (p.degree() < 1 || q.degree() < 1) throw InputError("discreteness_report: polynomials must be nonconstant");
  GermGroupReport rep;
  rep.word_bound = word_bound;
  rep.trunc_order = trunc;

  std::vector<Germ> gens, gens2;
  for (const Poly* f : {&p, &q}) {
    if (f->degree() < 2) continue;
    CycloNum eps = CycloNum::root(f->degree(), 1);
    gens.push_back(deck_germ(*f, eps, trunc));
    gens2.push_back(deck_germ(*f, eps, 2 * trunc));
  }
  if (gens.empty()) gens.push_back(Germ::identity(trunc)), gens2.push_back(Germ::identity(2 * trunc));
  bool all_exact = true;
  for (const Germ& g : gens) all_exact = all_exact && g.is_exact();
  GroupClosure cl = group_closure(gens, word_bound, all_exact ? nullptr : &gens2);
  rep.elements_found = cl.count_by_length;

  std::vector<Germ> inv2;
  for (const Germ& g : gens2) inv2.push_back(invert(g));
  const int field = detail::closure_order(gens);
  std::map<int, std::map<std::string, CycloNum>> residues;
  for (const ClosureElement& e : cl.elements) {
    const Germ& g = e.germ;
    if (!g.leading().is_one()) {
      ++rep.outside_j1;
      continue;
    }
    if (g.is_identity_in_window()) {
      if (!g.is_exact() && !e.word.empty()) ++rep.identity_in_window;
      continue;
    }
    Level lv = level(g);
    CycloNum res = residue(g);
    if (!g.is_exact()) {
      Germ g2 = detail::replay_word(gens2, inv2, e.word, 2 * trunc);
      if (level(g2) != lv || residue(g2) != res)
        throw TruncationInconclusive("residue does not reproduce at doubled truncation");
    }
    residues[lv.k].emplace(res.key_at(field), res);
  }
  for (auto& [k, m] : residues) {
    std::vector<CycloNum> list;
    int order = 1;
    for (auto& [key, r] : m) {
      list.push_back(r);
      order = std::lcm(order, r.order());
    }
    rep.levels[k] = list;
    rep.nontrivial_levels.push_back(k);
    DiscretenessVerdict v = zmodule_discreteness(ZModule::generated_by(order, list));
    rep.lattice_verdicts.push_back({k, v.rank, v.discrete});
  }
  if (rep.nontrivial_levels.size() > 1) {
    rep.verdict = "violates-(1)";
  } else {
    rep.verdict = "consistent-with-formal-discreteness-up-to-bound";
    for (const LevelVerdict& v : rep.lattice_verdicts)
      if (!v.discrete) rep.verdict = "violates-(2)";
  }
  return rep;
}

}  // namespace compositum
