#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "compositum/affine.hpp"
#include "compositum/deck.hpp"

using namespace compositum;

namespace {

// Oracle: p(h(z)) by Horner on plain Laurent series; entry e + off holds the z^e coefficient.
// Returns true when p(h) - p vanishes at every exponent >= deg p - K.
bool substitution_oracle(const Poly& p, const Germ& h) {
  const int n = p.degree(), K = h.trunc_order();
  const int lo = -K - 2, hi = n + 1, off = -lo;
  std::vector<CycloNum> hz(hi - lo + 1);
  for (int j = 0; j <= K; ++j) hz[1 - j + off] = h.coefficient(1 - j);
  std::vector<CycloNum> acc(hi - lo + 1);
  for (int i = n; i >= 0; --i) {
    std::vector<CycloNum> next(hi - lo + 1);
    for (int a = lo; a <= hi; ++a) {
      if (acc[a + off].is_zero()) continue;
      for (int b = 1; b >= lo && a + b >= lo; --b)
        if (a + b <= hi && !hz[b + off].is_zero()) next[a + b + off] += acc[a + off] * hz[b + off];
    }
    next[off] += p.coeff(i);
    acc = std::move(next);
  }
  for (int e = n - K; e <= n; ++e)
    if (acc[e + off] != p.coeff(e)) return false;
  return true;
}

Poly random_poly(std::mt19937& rng, int deg) {
  std::uniform_int_distribution<int> c(-4, 4);
  std::vector<CycloNum> v(deg + 1);
  for (int i = 0; i < deg; ++i) v[i] = CycloNum(c(rng));
  int lead = 0;
  while (lead == 0) lead = c(rng);
  v[deg] = CycloNum(lead);
  return Poly(std::move(v));
}

bool same_window(const Germ& a, const Germ& b) {
  const int d = std::lcm(a.coefficient_order(), b.coefficient_order());
  return a.key_at(d) == b.key_at(d);
}

}  // namespace

TEST(Deck, Examples) {
  Poly z = Poly::z();
  auto t = deck_group(z * z, 16);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_TRUE(t[0].is_identity_in_window());
  EXPECT_EQ(t[1], Germ::affine(CycloNum(-1), CycloNum(0), 16));
  EXPECT_TRUE(t[1].is_exact());

  auto t2 = deck_group(z * z + z, 16);
  EXPECT_EQ(t2[1], Germ::affine(CycloNum(-1), CycloNum(-1), 16));
  EXPECT_TRUE(t2[1].is_exact());

  for (int m = 2; m <= 7; ++m) {
    auto tq = deck_group((z + Poly(1)).pow(m), 24);
    ASSERT_EQ(static_cast<int>(tq.size()), m);
    for (int k = 0; k < m; ++k) {
      CycloNum d = CycloNum::root(m, k);
      EXPECT_EQ(tq[k], Germ::affine(d, d - CycloNum(1), 24)) << m << " " << k;
      EXPECT_TRUE(tq[k].is_exact());
    }
  }
}

TEST(Deck, NonAffineAgainstOracle) {
  Poly z = Poly::z();
  Poly p = z.pow(3) + z;
  auto t = deck_group(p, 20);
  for (const Germ& h : t) {
    EXPECT_TRUE(substitution_oracle(p, h));
  }
  EXPECT_FALSE(t[1].is_exact());
  EXPECT_FALSE(t[1].is_affine());
  // h = w z + c_{-1}/z + ..., with c_{-1} = (w^2 - 1)/(3 w) from the z^1 coefficient
  CycloNum w = CycloNum::root(3);
  EXPECT_EQ(t[1].coefficient(0), CycloNum(0));
  EXPECT_EQ(t[1].coefficient(-1), (w * w - CycloNum(1)) * (w.scaled(Rational(3))).inverse());
}

TEST(Deck, RandomPolynomialsComposeBack) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 12; ++trial) {
    Poly p = random_poly(rng, 2 + trial % 5);
    auto t = deck_group(p, 32);
    ASSERT_EQ(static_cast<int>(t.size()), p.degree());
    for (const Germ& h : t) EXPECT_TRUE(substitution_oracle(p, h)) << to_string(p);
  }
}

TEST(Deck, TruncationConsistency) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 6; ++trial) {
    Poly p = random_poly(rng, 2 + trial % 4);
    auto a = deck_group(p, 24), b = deck_group(p, 48);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k].at_trunc(24)) << to_string(p);
  }
}

TEST(Deck, CyclicOfOrderDegree) {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 8; ++trial) {
    Poly p = random_poly(rng, 2 + trial % 4);
    const int n = p.degree();
    auto t = deck_group(p, 20);
    Germ g = Germ::identity(20);
    for (int k = 0; k < n; ++k) {
      EXPECT_TRUE(same_window(g, t[k])) << to_string(p) << " k=" << k;
      g = compose(g, t[1]);
    }
    EXPECT_TRUE(g.is_identity_in_window());
  }
}

TEST(Deck, RejectsConstant) { EXPECT_THROW(deck_group(Poly(3), 8), InputError); }

TEST(Deck, ClosureExamples) {
  Poly z = Poly::z();
  GroupClosure c = group_closure(deck_group(z * z, 16), 6);
  EXPECT_EQ(c.elements.size(), 2u);
  EXPECT_EQ(c.count_by_length[2], 0u);

  std::vector<Germ> gens = deck_group(z * z, 16);
  for (const Germ& h : deck_group((z + Poly(1)).pow(2), 16)) gens.push_back(h);
  GroupClosure c2 = group_closure(gens, 4);
  bool plus2 = false, minus2 = false;
  for (const auto& e : c2.elements) {
    plus2 = plus2 || e.germ == Germ::affine(CycloNum(1), CycloNum(2), 16);
    minus2 = minus2 || e.germ == Germ::affine(CycloNum(1), CycloNum(-2), 16);
  }
  EXPECT_TRUE(plus2);
  EXPECT_TRUE(minus2);
  EXPECT_EQ(c2.flagged, 0u);

  std::vector<Germ> g5 = deck_group(z * z, 16);
  for (const Germ& h : deck_group((z + Poly(1)).pow(5), 16)) g5.push_back(h);
  std::size_t prev = 0;
  for (int b = 1; b <= 4; ++b) {
    std::size_t count = group_closure(g5, b).elements.size();
    EXPECT_GT(count, prev) << "bound " << b;
    prev = count;
  }
}

TEST(Deck, ClosureWordsReplay) {
  Poly z = Poly::z();
  std::vector<Germ> gens{deck_group(z.pow(3) + z, 12)[1], deck_group(z * z, 12)[1]};
  GroupClosure c = group_closure(gens, 3);
  std::vector<Germ> inv;
  for (const Germ& g : gens) inv.push_back(invert(g));
  for (const auto& e : c.elements) {
    Germ g = Germ::identity(12);
    for (int w : e.word) g = compose(g, w > 0 ? gens[w - 1] : inv[-w - 1]);
    EXPECT_EQ(g, e.germ);
  }
}

TEST(Deck, ReportExamples) {
  Poly z = Poly::z();
  GermGroupReport r = discreteness_report(z * z, (z + Poly(1)).pow(2), 8, 16);
  EXPECT_EQ(r.nontrivial_levels, std::vector<int>{1});
  for (const CycloNum& x : r.levels[1]) EXPECT_TRUE(ZModule::generated_by(1, {CycloNum(2)}).contains(x));
  EXPECT_EQ(r.verdict, "consistent-with-formal-discreteness-up-to-bound");
  EXPECT_EQ(r.word_bound, 8);
  EXPECT_EQ(r.trunc_order, 16);
  EXPECT_GT(r.outside_j1, 0u);

  GermGroupReport r5 = discreteness_report(z.pow(5), (z + Poly(1)).pow(5), 8, 16);
  EXPECT_EQ(r5.nontrivial_levels, std::vector<int>{1});
  ASSERT_EQ(r5.lattice_verdicts.size(), 1u);
  EXPECT_EQ(r5.lattice_verdicts[0].rank, 4);
  EXPECT_EQ(r5.verdict, "violates-(2)");

  GermGroupReport rf = discreteness_report(z * z, Poly(2) * z * z + z, 8, 16);
  EXPECT_EQ(rf.nontrivial_levels, std::vector<int>{1});
  ZModule half = ZModule::generated_by(1, {CycloNum(Rational(1, 2))});
  for (const CycloNum& x : rf.levels[1]) EXPECT_TRUE(half.contains(x));
  // (-z) o (-z - 1/2) is the translation by 1/2, so the residues fill out (1/2)Z
  EXPECT_EQ(ZModule::generated_by(1, rf.levels[1]), half);
  EXPECT_EQ(rf.verdict, "consistent-with-formal-discreteness-up-to-bound");
}

TEST(Deck, ReportNonAffinePair) {
  Poly z = Poly::z();
  // z^3 + z is odd, so -z commutes with T_p and the group is cyclic of order 6
  GermGroupReport r = discreteness_report(z.pow(3) + z, z * z, 4, 12);
  EXPECT_EQ(r.elements_found, (std::vector<std::size_t>{1, 3, 2, 0, 0}));
  EXPECT_EQ(r.outside_j1, 5u);
  EXPECT_TRUE(r.nontrivial_levels.empty());
  EXPECT_EQ(r.verdict, "consistent-with-formal-discreteness-up-to-bound");

  GermGroupReport r2 = discreteness_report(z.pow(3) + z, z * z + z, 3, 10);
  for (std::size_t k = 1; k < r2.elements_found.size(); ++k) EXPECT_GT(r2.elements_found[k], 0u);
}

TEST(Deck, StandardGridAgreesWithLemma) {
  auto t0 = std::chrono::steady_clock::now();
  Poly z = Poly::z();
  for (int n = 2; n <= 8; ++n)
    for (int m = 2; m <= 8; ++m) {
      GermGroupReport r = discreteness_report(z.pow(n), (z + Poly(1)).pow(m), 8, 8);
      ZModule lat = translation_lattice(n, m);
      for (const CycloNum& x : r.levels[1]) EXPECT_TRUE(lat.contains(x)) << n << "," << m;
      const int d = std::lcm(n, m);
      const bool good = d == 2 || d == 3 || d == 4 || d == 6;
      EXPECT_EQ(r.verdict, good ? "consistent-with-formal-discreteness-up-to-bound" : "violates-(2)") << n << "," << m;
    }
  std::cerr << "grid ms "
            << std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count()
            << "\n";
}

TEST(Deck, CyclotomicAndNonMonicCoefficients) {
  Poly z = Poly::z();
  CycloNum w = CycloNum::root(3);
  Poly cases[] = {z * z * z + Poly(w) * z, Poly(CycloNum(Rational(3, 2))) * z.pow(3) + Poly(CycloNum(Rational(1, 5))) * z,
                  Poly(CycloNum::root(4) + CycloNum(2)) * z.pow(4) + z * z - Poly(7)};
  for (const Poly& p : cases) {
    for (int K : {16, 32}) {
      auto t = deck_group(p, K);
      for (const Germ& h : t) {
        EXPECT_TRUE(substitution_oracle(p, h)) << to_string(p) << " K=" << K;
        EXPECT_TRUE(deck_identity_holds(p, h));
      }
    }
  }
}

TEST(Deck, IdentityCheckRejectsPerturbation) {
  Poly z = Poly::z();
  Poly p = z.pow(4) + z - Poly(1);
  Germ h = deck_group(p, 20)[1];
  std::vector<CycloNum> c = h.stored();
  c.resize(21);
  c[17] += CycloNum(Rational(1, 3));
  Germ bad(c, 20, false);
  EXPECT_TRUE(deck_identity_holds(p, h));
  EXPECT_FALSE(deck_identity_holds(p, bad));
  EXPECT_FALSE(substitution_oracle(p, bad));
}
