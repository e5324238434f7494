#include <gtest/gtest.h>

#include <chrono>
#include <complex>
#include <random>

#include "compositum/classify.hpp"

using namespace compositum;

namespace {

using cplx = std::complex<double>;

const Poly Z = Poly::z();

Poly lin(long a, long b, long den = 1) { return Poly::linear(CycloNum(make_rational(a, den)), CycloNum(b)); }

Poly random_linear(std::mt19937& rng) {
  std::uniform_int_distribution<int> c(-5, 5);
  int a = 0;
  while (a == 0) a = c(rng);
  return Poly::linear(CycloNum(make_rational(a, 1 + (rng() % 3))), CycloNum(c(rng)));
}

Poly random_poly(std::mt19937& rng, int deg) {
  std::uniform_int_distribution<int> c(-3, 3);
  std::vector<CycloNum> v(deg + 1);
  for (int i = 0; i < deg; ++i) v[i] = CycloNum(c(rng));
  int lead = 0;
  while (lead == 0) lead = c(rng);
  v[deg] = CycloNum(lead);
  return Poly(std::move(v));
}

// Direct lattice sum for wp with a radius cutoff, as an oracle for the row-summed evaluator.
cplx wp_direct(cplx z, cplx w1, cplx w2, int R) {
  cplx s = 1.0 / (z * z);
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      if (a == 0 && b == 0) continue;
      const cplx w = double(a) * w1 + double(b) * w2;
      s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
    }
  return s;
}

cplx wp_prime_direct(cplx z, cplx w1, cplx w2, int R) {
  cplx s = 0;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b) {
      const cplx u = z - double(a) * w1 - double(b) * w2;
      s += 1.0 / (u * u * u);
    }
  return -2.0 * s;
}

}  // namespace

TEST(Recognizer, Examples) {
  auto a = standard_form_recognizer(Z * Z, (Z + Poly(1)).pow(2));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->beta, Z);
  EXPECT_EQ(a->y_change, Z);
  EXPECT_EQ(a->z_change, Z);
  EXPECT_EQ(a->n, 2);
  EXPECT_EQ(a->m, 2);

  // 2z^2 + z = 2 (z + 1/4)^2 - 1/8, so z_q = -1/4 and beta = 4z.
  auto b = standard_form_recognizer(Z * Z, Z * Z * Poly(2) + Z);
  ASSERT_TRUE(b);
  EXPECT_EQ(b->beta, lin(4, 0));
  EXPECT_EQ(b->y_change, lin(1, 0, 16));
  EXPECT_EQ(b->z_change, Poly::linear(CycloNum(make_rational(1, 8)), CycloNum(make_rational(-1, 8))));
  const Poly binv = lin(1, 0, 4);
  EXPECT_EQ(compose(Z * Z * Poly(2) + Z, binv),
            ((Z + Poly(1)).pow(2) - Poly(1)).scaled(CycloNum(make_rational(1, 8))));

  EXPECT_FALSE(standard_form_recognizer(Z.pow(3) + Z, (Z + Poly(1)).pow(3)));
  EXPECT_FALSE(standard_form_recognizer(Z * Z, Z * Z + Poly(3)));  // same centre
  EXPECT_THROW(standard_form_recognizer(Z, Z * Z), InputError);
}

TEST(Recognizer, RecomposesUnderRandomAffineChanges) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 5, m = 2 + (trial / 5) % 5;
    const Poly a = random_linear(rng), b = random_linear(rng), g = random_linear(rng);
    const Poly p = compose(a, compose(Z.pow(n), g));
    const Poly q = compose(b, compose((Z + Poly(1)).pow(m), g));
    auto sf = standard_form_recognizer(p, q);
    ASSERT_TRUE(sf);
    EXPECT_EQ(sf->n, n);
    EXPECT_EQ(sf->m, m);
    EXPECT_EQ(sf->beta, g);
    EXPECT_EQ(compose(sf->y_change, compose(Z.pow(n), sf->beta)), p);
    EXPECT_EQ(compose(sf->z_change, compose((Z + Poly(1)).pow(m), sf->beta)), q);
  }
}

TEST(Recognizer, CyclotomicCoefficients) {
  const CycloNum w = primitive_root(3);
  const Poly g = Poly::linear(w, CycloNum(1));
  const Poly p = compose(Z.pow(3), g), q = compose((Z + Poly(1)).pow(3), g).scaled(w) + Poly(w);
  auto sf = standard_form_recognizer(p, q);
  ASSERT_TRUE(sf);
  EXPECT_EQ(sf->beta, g);
}

TEST(Classify, Examples) {
  auto a = classify_pair(Z * Z, Z * Z + Poly(1));
  EXPECT_EQ(a.verdict, Verdict::RationalSolutions);
  ASSERT_TRUE(a.witness);
  EXPECT_EQ(a.witness->w, Z * Z + Poly(1));
  EXPECT_EQ(compose(a.witness->a, Z * Z), compose(a.witness->b, Z * Z + Poly(1)));

  auto b = classify_pair(Z * Z, (Z + Poly(1)).pow(2));
  EXPECT_EQ(b.verdict, Verdict::TranscendentalOnly);
  EXPECT_EQ(b.d, 2);
  EXPECT_EQ(b.lattice_rank, 1);
  EXPECT_FALSE(b.germ_report);

  auto c = classify_pair(Z.pow(5), (Z + Poly(1)).pow(5));
  EXPECT_EQ(c.verdict, Verdict::NoSolutions);
  EXPECT_EQ(c.d, 5);
  EXPECT_EQ(c.lattice_rank, 4);
  ASSERT_TRUE(c.germ_report);
  EXPECT_EQ(c.germ_report->verdict, "violates-(2)");
}

TEST(Classify, DegreeOne) {
  auto c = classify_pair(Z * Z + Z, lin(3, 1));
  EXPECT_EQ(c.verdict, Verdict::RationalSolutions);
  ASSERT_TRUE(c.witness);
  EXPECT_EQ(compose(c.witness->a, Z * Z + Z), compose(c.witness->b, lin(3, 1)));
  auto d = classify_pair(lin(-2, 5), Z.pow(4));
  EXPECT_EQ(d.verdict, Verdict::RationalSolutions);
  EXPECT_EQ(compose(d.witness->a, lin(-2, 5)), compose(d.witness->b, Z.pow(4)));
  EXPECT_THROW(classify_pair(Poly(3), Z), InputError);
}

TEST(Classify, NonStandardIrreducible) {
  auto c = classify_pair(Z.pow(3) + Z, (Z + Poly(1)).pow(2));
  EXPECT_EQ(c.verdict, Verdict::NoSolutions);
  EXPECT_FALSE(c.standard);
  EXPECT_NE(c.certificate.find("not affinely standard"), std::string::npos);
}

TEST(Classify, StandardGrid) {
  auto t0 = std::chrono::steady_clock::now();
  for (int n = 2; n <= 8; ++n)
    for (int m = 2; m <= 8; ++m) {
      auto c = classify_pair(Z.pow(n), (Z + Poly(1)).pow(m));
      const int d = std::lcm(n, m);
      const bool good = d == 2 || d == 3 || d == 4 || d == 6;
      EXPECT_EQ(c.verdict, good ? Verdict::TranscendentalOnly : Verdict::NoSolutions) << n << "," << m;
      EXPECT_EQ(c.reduced_deg_p, n);
      EXPECT_EQ(c.reduced_deg_q, m);
      ASSERT_TRUE(c.standard);
      EXPECT_EQ(c.d, d);
      if (!good) {
        ASSERT_TRUE(c.germ_report);
        EXPECT_NE(c.germ_report->verdict, "consistent-with-formal-discreteness-up-to-bound") << n << "," << m;
      }
    }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 30.0);
}

TEST(Classify, SquareFamilies) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> small(-4, 4);
  for (int trial = 0; trial < 12; ++trial) {
    const Poly r = random_poly(rng, 1 + trial % 3);
    const CycloNum a(small(rng)), d(small(rng));
    CycloNum b(small(rng)), cc(small(rng));
    if (b.is_zero()) b = CycloNum(2);
    if (cc.is_zero()) cc = CycloNum(-1);
    const Poly p = r * r + Poly(a);
    const Poly q = (r * r).scaled(b) + r.scaled(cc) + Poly(d);
    auto ii = classify_pair(p, q);
    EXPECT_EQ(ii.verdict, Verdict::TranscendentalOnly) << to_string(p) << " | " << to_string(q);
    EXPECT_EQ(ii.reduced_deg_p, 2);
    EXPECT_EQ(ii.reduced_deg_q, 2);
    EXPECT_EQ(ii.d, 2);

    const Poly q0 = (r * r).scaled(b) + Poly(d);
    auto i = classify_pair(p, q0);
    EXPECT_EQ(i.verdict, Verdict::RationalSolutions);
    ASSERT_TRUE(i.witness);
    EXPECT_EQ(compose(i.witness->a, p), i.witness->w);
    EXPECT_EQ(compose(i.witness->b, q0), i.witness->w);
  }
}

TEST(Classify, AffineInvariance) {
  std::mt19937 rng(5);
  const std::vector<std::pair<Poly, Poly>> base{
      {Z * Z, Z * Z + Poly(1)},
      {Z * Z, (Z + Poly(1)).pow(2)},
      {Z.pow(3), (Z + Poly(1)).pow(6)},
      {Z.pow(5), (Z + Poly(1)).pow(5)},
      {Z.pow(3) + Z, (Z + Poly(1)).pow(2)},
      {Z.pow(4), compose(Z * Z + Z, Z * Z)},
  };
  ClassifyOptions opt;
  opt.germ_diagnostics = false;
  for (const auto& [p, q] : base) {
    const Verdict v = classify_pair(p, q, opt).verdict;
    for (int trial = 0; trial < 4; ++trial) {
      const Poly al = random_linear(rng), be = random_linear(rng), ga = random_linear(rng);
      const Poly p2 = compose(al, compose(p, ga)), q2 = compose(be, compose(q, ga));
      auto c = classify_pair(p2, q2, opt);
      EXPECT_EQ(c.verdict, v) << to_string(p2) << " | " << to_string(q2);
      if (c.witness) {
        EXPECT_EQ(compose(c.witness->a, p2), c.witness->w);
        EXPECT_EQ(compose(c.witness->b, q2), c.witness->w);
      }
      if (c.standard) {
        EXPECT_EQ(compose(c.standard->y_change, compose(Z.pow(c.standard->n), c.standard->beta)), c.p_tilde);
        EXPECT_EQ(compose(c.standard->z_change, compose((Z + Poly(1)).pow(c.standard->m), c.standard->beta)),
                  c.q_tilde);
      }
    }
  }
}

TEST(Probe, WeierstrassAgreesWithLatticeSum) {
  const cplx w1(1.0, 0.0), w2(0.3, 1.1);
  detail::Weierstrass wp(w1, w2);
  for (cplx z : {cplx(0.21, 0.13), cplx(-0.4, 0.35), cplx(0.05, -0.47)}) {
    EXPECT_LT(std::abs(wp.wp(z) - wp_direct(z, w1, w2, 400)) / std::abs(wp.wp(z)), 1e-5);
    EXPECT_LT(std::abs(wp.wp_prime(z) - wp_prime_direct(z, w1, w2, 400)) / std::abs(wp.wp_prime(z)), 1e-5);
    // periodicity and parity
    EXPECT_LT(std::abs(wp.wp(z + w2) - wp.wp(z)), 1e-9 * std::abs(wp.wp(z)));
    EXPECT_LT(std::abs(wp.wp(-z) - wp.wp(z)), 1e-9 * std::abs(wp.wp(z)));
  }
}

TEST(Probe, Pairs) {
  const std::vector<std::pair<int, int>> pairs{{2, 2}, {2, 3}, {3, 3}, {4, 4}, {2, 4}, {6, 6}, {2, 6}, {3, 6}};
  for (const auto& [n, m] : pairs) {
    auto r = invariant_function_probe(n, m, 200, 3);
    EXPECT_TRUE(r.membership_ok);
    EXPECT_LT(r.max_residual, 1e-9) << n << "," << m << " " << r.function;
    EXPECT_EQ(r.d, std::lcm(n, m));
  }
  auto a = invariant_function_probe(2, 2, 50);
  EXPECT_EQ(a.rank, 1);
  EXPECT_EQ(a.function, "cos(2 pi z / c)");
  auto b = invariant_function_probe(4, 4, 50);
  EXPECT_EQ(b.rank, 2);
  EXPECT_EQ(b.function, "wp^2");
  // 1 - delta^{-1} = 1 + i lies in (i - 1) Z[i]
  const ZModule L = ZModule::generated_by(4, {primitive_root(4) - CycloNum(1), CycloNum(-1) - primitive_root(4)});
  EXPECT_EQ(translation_lattice(4, 4), L);
  EXPECT_EQ(invariant_function_probe(2, 3, 10).function, "wp'^2");
}

TEST(Probe, DetectsNonInvariantFunction) {
  // wp itself is not invariant under the order-4 rotation; the residual check must see that.
  const ZModule L = translation_lattice(4, 4);
  auto bs = L.basis();
  detail::Weierstrass wp(bs[0].to_complex(), bs[1].to_complex());
  const cplx z(0.17, 0.29), i(0, 1);
  EXPECT_GT(std::abs(wp.wp(i * z) - wp.wp(z)), 1e-3);
  EXPECT_LT(std::abs(wp.wp(i * z) + wp.wp(z)), 1e-9 * std::abs(wp.wp(z)));
}

TEST(Probe, Preconditions) {
  EXPECT_THROW(invariant_function_probe(5, 5, 10), InputError);
  EXPECT_THROW(invariant_function_probe(2, 5, 10), InputError);
  EXPECT_THROW(invariant_function_probe(1, 2, 10), InputError);
}

TEST(Probe, MixedDegreesNeedEnlargedLattice) {
  EXPECT_FALSE(invariant_function_probe(4, 4, 5).enlarged);
  EXPECT_FALSE(invariant_function_probe(3, 3, 5).enlarged);
  for (auto [n, m] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {2, 6}, {3, 6}}) {
    auto r = invariant_function_probe(n, m, 5);
    EXPECT_TRUE(r.enlarged) << n << "," << m;
    const CycloNum delta = primitive_root(m);
    EXPECT_FALSE(translation_lattice(n, m).contains(CycloNum(1) - delta.inverse())) << n << "," << m;
  }
  // On the bare translation lattice of (2,4), wp^2 is not invariant under h_q.
  auto bs = translation_lattice(2, 4).basis();
  detail::Weierstrass wp(bs[0].to_complex(), bs[1].to_complex());
  const cplx z(0.31, 0.17), i(0, 1);
  const cplx a = wp.wp(i * z + i - 1.0), b = wp.wp(z);
  EXPECT_GT(std::abs(a * a - b * b), 1e-3 * std::abs(b * b));
}
