#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "compositum/affine.hpp"
#include "compositum/classify.hpp"
#include "compositum/cyclo.hpp"
#include "compositum/deck.hpp"
#include "compositum/factorized.hpp"
#include "compositum/poly.hpp"
#include "compositum/polyalg.hpp"

namespace compositum {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool correct = false;
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;
  bool pass() const { return correct && seconds < budget_seconds; }
};

namespace detail::acc {

inline const Poly& Z() {
  static const Poly z = Poly::z();
  return z;
}

inline Poly shifted_power(long c, int m) { return (Z() + Poly(c)).pow(m); }

inline Poly random_int_poly(std::mt19937_64& rng, int deg, int bound = 4) {
  std::uniform_int_distribution<int> c(-bound, bound);
  std::vector<CycloNum> v(deg + 1);
  for (auto& x : v) x = CycloNum(c(rng));
  if (v[deg].is_zero()) v[deg] = CycloNum(1 + (rng() % bound));
  return Poly(std::move(v));
}

inline Poly random_affine(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-3, 3), d(1, 3);
  int a = c(rng);
  if (a == 0) a = 2;
  return Poly::linear(CycloNum(make_rational(a, d(rng))), CycloNum(c(rng)));
}

// Criterion bodies: return true on success, append a readable summary to `out`.

inline bool relation_count(std::ostream& out) {
  auto rels = enumerate_relations_BA_AB(3, 6);
  std::set<std::string> got;
  for (const auto& r : rels) got.insert(r.str());
  const std::set<std::string> want{"h_q h_p = h_p^2 h_q^5", "h_q^5 h_p^2 = h_p h_q"};
  out << rels.size() << " relations:";
  for (const auto& s : got) out << " [" << s << "]";
  return rels.size() == 2 && got == want;
}

inline bool relation_family(std::ostream& out) {
  bool ok = true;
  for (int n = 4; n <= 12; n += 2) {
    std::set<std::vector<int>> want;
    for (int l = 1; l < n; ++l)
      if ((2 * l) % n != 0)
        want.insert({l, int(mod_floor(-l + n / 2, n)), int(mod_floor(l + n / 2, n)), int(mod_floor(-l, n))});
    std::set<std::vector<int>> got;
    for (const auto& r : enumerate_relations_BA_AB(n, n)) got.insert(r.tuple());
    const bool good = got == want && static_cast<int>(got.size()) == n - 2;
    out << "n=" << n << ":" << got.size() << (good ? "" : "(mismatch)") << " ";
    ok = ok && good;
  }
  return ok;
}

inline bool odd_relations(std::ostream& out) {
  bool ok = true;
  for (int n = 3; n <= 15; n += 2) {
    const bool v = verify_lemma51(n);
    if (!v) out << "fails at n=" << n << " ";
    ok = ok && v;
  }
  out << "odd n in [3,15]";
  return ok;
}

inline bool three_roots(std::ostream& out) {
  bool ok = true;
  Rational worst = 10;
  for (int n = 3; n <= 45; n += 2) {
    const Lemma52Report r = lemma52_report(n);
    if (!r.ok()) out << "fails at n=" << n << " ";
    ok = ok && r.ok() && r.min_rhs_trace >= Rational(3, 2);
    if (r.min_rhs_trace < worst) worst = r.min_rhs_trace;
  }
  out << "odd n in [3,45]; min 2+T(eps^mu) = " << worst.get_str();
  return ok;
}

inline bool trace_functional(std::ostream& out) {
  bool ok = true;
  int checked = 0;
  for (int m = 1; m <= 100; ++m) {
    const Rational want = make_rational(mobius(m), euler_phi(m));
    ok = ok && trace_T(primitive_root(m)) == want;
    if (m % 2 == 1 && m > 1) {
      for (int g = 1; g < m; ++g) {
        const Rational t = trace_T(primitive_root(m).pow(g));
        ok = ok && t >= Rational(-1, 2) && t < Rational(1, 2);
        ++checked;
      }
    }
  }
  out << "m <= 100; " << checked << " odd-order powers in [-1/2, 1/2)";
  return ok;
}

inline bool lattice_grid(std::ostream& out) {
  int agree = 0;
  for (int n = 2; n <= 12; ++n)
    for (int m = 2; m <= 12; ++m) {
      const DiscretenessVerdict v = zmodule_discreteness(translation_lattice(n, m));
      const int d = std::lcm(n, m);
      const bool crys = d == 2 || d == 3 || d == 4 || d == 6;
      if (v.discrete == crys && is_formally_discrete_standard(n, m) == crys) ++agree;
    }
  out << agree << "/121 pairs agree";
  return agree == 121;
}

inline bool common_composite(std::ostream& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> e(1, 4), sd(1, 3), c(1, 4), e2(2, 5);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Poly s = random_int_poly(rng, sd(rng));
    const int a = e(rng), b = e(rng);
    const Poly p = compose(random_affine(rng), compose(Z().pow(a), s));
    const Poly q = trial % 3 == 0 ? compose(random_int_poly(rng, b), p)
                                  : compose(random_affine(rng), compose(Z().pow(b), s));
    auto w = minimal_common_composite(p, q);
    if (w && w->w.degree() == std::lcm(p.degree(), q.degree()) && compose(w->a, p) == w->w &&
        compose(w->b, q) == w->w)
      ++found;
  }
  int empty = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Poly l = random_affine(rng);
    const Poly p = compose(random_affine(rng), compose(Z().pow(e2(rng)), l));
    const Poly q = compose(random_affine(rng), compose(shifted_power(c(rng), e2(rng)), l));
    if (!minimal_common_composite(p, q)) ++empty;
  }
  out << "planted " << found << "/100 found; negatives " << empty << "/40 empty";
  return found == 100 && empty == 40;
}

inline bool irreducibility(std::ostream& out) {
  bool ok = true;
  for (int n = 2; n <= 8; ++n)
    for (int m = 2; m <= 8; ++m)
      ok = ok && centralizer(Z().pow(n), shifted_power(1, m)).order == 1 &&
           centralizer(shifted_power(1, m), Z().pow(n)).order == 1;
  const CentralizerResult c = centralizer(Z().pow(2), Z().pow(4) + Poly(1));
  const bool factor = c.order == 4 && c.inner == Z().pow(4) && compose(c.outer, c.inner) == Z().pow(4) + Poly(1);
  out << "grid trivial: " << (ok ? "yes" : "no") << "; |H| for (z^2, z^4+1) = " << c.order << ", inner "
      << to_string(c.inner);
  return ok && factor;
}

inline bool main_grid(std::ostream& out, std::uint64_t seed) {
  int grid_ok = 0;
  ClassifyOptions opt;
  for (int n = 2; n <= 8; ++n)
    for (int m = 2; m <= 8; ++m) {
      const int d = std::lcm(n, m);
      const bool crys = d == 2 || d == 3 || d == 4 || d == 6;
      const Classification c = classify_pair(Z().pow(n), shifted_power(1, m), opt);
      if (c.verdict == (crys ? Verdict::TranscendentalOnly : Verdict::NoSolutions)) ++grid_ok;
    }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(-4, 4);
  int square_i = 0, square_ii = 0;
  const int trials = 12;
  for (int t = 0; t < trials; ++t) {
    const Poly r = random_int_poly(rng, 1 + t % 3, 3);
    const CycloNum a(small(rng)), d(small(rng));
    CycloNum b(small(rng)), cc(small(rng));
    if (b.is_zero()) b = CycloNum(3);
    if (cc.is_zero()) cc = CycloNum(1);
    const Poly p = r * r + Poly(a);
    const Classification ii = classify_pair(p, (r * r).scaled(b) + r.scaled(cc) + Poly(d), opt);
    if (ii.verdict == Verdict::TranscendentalOnly && ii.reduced_deg_p == 2 && ii.reduced_deg_q == 2) ++square_ii;
    const Poly q0 = (r * r).scaled(b) + Poly(d);
    const Classification i = classify_pair(p, q0, opt);
    if (i.verdict == Verdict::RationalSolutions && i.witness && compose(i.witness->a, p) == i.witness->w &&
        compose(i.witness->b, q0) == i.witness->w)
      ++square_i;
  }
  out << "grid " << grid_ok << "/49; r^2+a vs b r^2+d " << square_i << "/" << trials << "; r^2+a vs b r^2+c r+d " << square_ii << "/"
      << trials;
  return grid_ok == 49 && square_i == trials && square_ii == trials;
}

inline bool deck_consistency(std::ostream& out, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int good = 0;
  for (int i = 0; i < 50; ++i) {
    const Poly p = random_int_poly(rng, 2 + i % 5);
    bool ok = true;
    for (int K : {64, 128}) {
      const auto group = deck_group(p, K);
      ok = ok && static_cast<int>(group.size()) == p.degree();
      for (const Germ& h : group) ok = ok && deck_identity_holds(p, h);
    }
    good += ok;
  }
  int lattice_ok = 0, pairs = 0;
  for (int n = 2; n <= 6; ++n)
    for (int m = 2; m <= 6; ++m) {
      ++pairs;
      GermGroupReport r = discreteness_report(Z().pow(n), shifted_power(1, m), 6, 16);
      const ZModule lat = translation_lattice(n, m);
      bool ok = !r.levels[1].empty();
      for (const CycloNum& x : r.levels[1]) ok = ok && lat.contains(x);
      lattice_ok += ok;
    }
  out << "deck identity " << good << "/50 at K=64,128; level-1 residues in lattice " << lattice_ok << "/" << pairs;
  return good == 50 && lattice_ok == pairs;
}

inline bool genus(std::ostream& out) {
  const long g1 = fiber_product_genus(Z().pow(2), Z().pow(3));
  const long g2 = fiber_product_genus(Z().pow(2), Z().pow(3) - Z().scaled(CycloNum(3)));
  const long m = local_galois_multiplicity({2, 3});
  out << "genus(z^2,z^3)=" << g1 << " genus(z^2,z^3-3z)=" << g2 << " multiplicity([2,3])=" << m;
  return g1 == 0 && g2 == 1 && m == 6;
}

inline bool probe(std::ostream& out, std::uint64_t seed) {
  double worst = 0;
  bool ok = true;
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}, {4, 4}, {2, 4}, {6, 6}, {2, 6}, {3, 6}}) {
    const ProbeResult r = invariant_function_probe(n, m, 200, seed);
    ok = ok && r.membership_ok && r.max_residual < 1e-9;
    worst = std::max(worst, r.max_residual);
  }
  std::ostringstream w;
  w.precision(3);
  w << worst;
  out << "8 pairs, max residual " << w.str();
  return ok;
}

inline bool framework(std::ostream& out) {
  const auto models = standard_models();
  int passed = 0;
  bool s3 = false, crys = false;
  for (const auto& fg : models) {
    const FrameworkReport a = check_factorization_axioms(fg), b = check_invariance_lemmas(fg),
                         c = check_relation_axioms(fg);
    if (a.ok() && b.ok() && c.ok() && a.exhaustive && b.exhaustive && c.exhaustive) {
      ++passed;
      s3 = s3 || fg.name() == "S3";
      crys = crys || fg.name().rfind("Aff", 0) == 0;
    }
  }
  out << passed << "/" << models.size() << " models exhaustive";
  return passed == static_cast<int>(models.size()) && passed >= 5 && s3 && crys;
}

}  // namespace detail::acc

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// The thirteen acceptance criteria, in order.
inline std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kDefaultSeed,
                                                   const std::function<void(const CriterionResult&)>& on_done = {}) {
  namespace a = detail::acc;
  struct Entry {
    int id;
    const char* title;
    double budget;
    std::function<bool(std::ostream&)> body;
  };
  const std::vector<Entry> entries{
      {1, "relation count (3,6)", 1, a::relation_count},
      {2, "even commutation family", 5, a::relation_family},
      {3, "odd-degree ABA relations, n <= 15", 60, a::odd_relations},
      {4, "three roots plus two, odd n <= 45", 120, a::three_roots},
      {5, "trace functional", 5, a::trace_functional},
      {6, "standard lattice grid 2..12", 10, a::lattice_grid},
      {7, "common composite decision", 30, [seed](std::ostream& o) { return a::common_composite(o, seed); }},
      {8, "irreducibility / centralizers", 10, a::irreducibility},
      {9, "main-result grid and r^2 families", 30, [seed](std::ostream& o) { return a::main_grid(o, seed); }},
      {10, "deck/germ consistency", 60, [seed](std::ostream& o) { return a::deck_consistency(o, seed); }},
      {11, "fiber-product genus", 1, a::genus},
      {12, "invariant-function probe", 30, [seed](std::ostream& o) { return a::probe(o, seed); }},
      {13, "factorized-group framework", 10, a::framework},
  };
  std::vector<CriterionResult> out;
  for (const Entry& s : entries) {
    CriterionResult r;
    r.id = s.id;
    r.title = s.title;
    r.budget_seconds = s.budget;
    std::ostringstream detail;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      r.correct = s.body(detail);
    } catch (const std::exception& e) {
      r.correct = false;
      detail << " exception: " << e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.detail = detail.str();
    if (on_done) on_done(r);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (r.pass() ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] " << r.title << " -- "
     << r.detail << " (" << r.seconds << " s, budget " << r.budget_seconds << " s)";
  return os.str();
}

}  // namespace compositum
