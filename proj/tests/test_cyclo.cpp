#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "compositum/cyclo.hpp"

using namespace compositum;

namespace {

CycloNum random_cyclo(std::mt19937& rng, int order) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 4);
  std::vector<Rational> c;
  for (int i = 0; i < order; ++i) c.push_back(make_rational(coef(rng), den(rng)));
  return CycloNum::from_coeffs(order, c);
}

}  // namespace

TEST(Cyclo, FieldOpsExamples) {
  EXPECT_EQ(CycloNum::root(4) * CycloNum::root(4), CycloNum(-1));
  EXPECT_EQ(CycloNum::root(3) + CycloNum::root(3, 2), CycloNum(-1));
  CycloNum diff = CycloNum::root(6) - CycloNum::root(3);
  EXPECT_EQ(diff, CycloNum(1));
  EXPECT_TRUE(diff.is_rational());
  // numeric oracle
  std::complex<double> z6 = std::polar(1.0, M_PI / 3), z3 = std::polar(1.0, 2 * M_PI / 3);
  EXPECT_NEAR(std::abs(z6 - z3 - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(diff.to_complex() - (z6 - z3)), 0.0, 1e-12);
}

TEST(Cyclo, InverseOfZeroThrows) { EXPECT_THROW(CycloNum().inverse(), DivisionByZero); }

TEST(Cyclo, InverseRoundTrip) {
  std::mt19937 rng(7);
  for (int n : {3, 5, 7, 8, 12, 15}) {
    for (int trial = 0; trial < 10; ++trial) {
      CycloNum x = random_cyclo(rng, n);
      if (x.is_zero()) continue;
      EXPECT_TRUE((x * x.inverse()).is_one()) << x.str();
    }
  }
}

TEST(Cyclo, PrimitiveRoot) {
  EXPECT_EQ(primitive_root(1), CycloNum(1));
  EXPECT_EQ(primitive_root(2), CycloNum(-1));
  CycloNum x = primitive_root(6);
  EXPECT_EQ(x.pow(3), CycloNum(-1));
  EXPECT_TRUE((x * x - x + CycloNum(1)).is_zero());
}

TEST(Cyclo, MobiusPhi) {
  EXPECT_EQ(mobius(6), 1);
  EXPECT_EQ(euler_phi(6), 2);
  EXPECT_EQ(mobius(4), 0);
  EXPECT_EQ(euler_phi(4), 2);
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(euler_phi(1), 1);
  EXPECT_EQ(euler_phi(2), 1);
  EXPECT_EQ(euler_phi(3), 2);
  // brute-force oracle
  for (long m = 1; m <= 200; ++m) {
    long count = 0;
    for (long a = 1; a <= m; ++a) count += std::gcd(a, m) == 1;
    EXPECT_EQ(euler_phi(m), count);
    long sum = 0;  // sum_{d | m} mu(d) = [m == 1]
    for (long d : divisors(m)) sum += mobius(d);
    EXPECT_EQ(sum, m == 1 ? 1 : 0);
  }
}

TEST(Cyclo, TraceExamples) {
  EXPECT_EQ(trace_T(CycloNum(1)), Rational(1));
  EXPECT_EQ(trace_T(CycloNum::root(6)), Rational(1, 2));
  EXPECT_EQ(trace_T(CycloNum::root(5)), Rational(-1, 4));
  // numeric oracle for the order-6 case: cos(pi/3)
  EXPECT_NEAR(trace_T(CycloNum::root(6)).get_d(), std::cos(M_PI / 3), 1e-12);
}

TEST(Cyclo, TraceOfPrimitiveRootsIsMobiusOverPhi) {
  for (int m = 1; m <= 100; ++m) {
    Rational expect(mobius(m), euler_phi(m));
    expect.canonicalize();
    for (int a = 1; a <= m; ++a) {
      if (std::gcd(a, m) != 1) continue;
      CycloNum d = CycloNum::root(m, a);
      Rational t = trace_T(d);
      ASSERT_EQ(t, expect) << "m=" << m << " a=" << a;
      if (m % 2 == 1 && m > 1 && m <= 45) {
        EXPECT_GE(t, Rational(-1, 2));
        EXPECT_LT(t, Rational(1, 2));
      }
    }
  }
}

TEST(Cyclo, TraceIndependentOfRepresentingOrder) {
  // an order-3 element lifted to order 12 by summing with a zero combination
  CycloNum x = CycloNum::root(3) + CycloNum::root(12, 3) - CycloNum::root(4);
  EXPECT_EQ(x.order(), 12);
  EXPECT_EQ(x, CycloNum::root(3));
  EXPECT_EQ(trace_T(x), Rational(-1, 2));
}

TEST(Cyclo, TraceIsLinear) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    int n1 = 2 + trial % 9, n2 = 3 + trial % 7;
    CycloNum x = random_cyclo(rng, n1), y = random_cyclo(rng, n2);
    Rational a = make_rational(num(rng), den(rng)), b = make_rational(num(rng), den(rng));
    EXPECT_EQ(trace_T(x.scaled(a) + y.scaled(b)), a * trace_T(x) + b * trace_T(y));
  }
}

TEST(Cyclo, LiftingInvariance) {
  std::mt19937 rng(3);
  for (int n : {3, 4, 5, 6, 9, 10}) {
    for (int trial = 0; trial < 8; ++trial) {
      CycloNum x = random_cyclo(rng, n), y = random_cyclo(rng, n);
      if (y.is_zero()) continue;
      CycloNum lhs = (x * y + x) / y;
      // same expression with operands lifted to order 2n
      CycloNum x2 = CycloNum::from_coeffs(2 * n, x.coords_at(2 * n));
      CycloNum y2 = CycloNum::from_coeffs(2 * n, y.coords_at(2 * n));
      CycloNum rhs = (x2 * y2 + x2) / y2;
      EXPECT_EQ(lhs, rhs);
      EXPECT_EQ(lhs.key_at(4 * n), rhs.key_at(4 * n));
    }
  }
}

TEST(Cyclo, NumericEmbeddingMatchesArithmetic) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    int n1 = 2 + trial % 10, n2 = 2 + (trial * 7) % 11;
    CycloNum x = random_cyclo(rng, n1), y = random_cyclo(rng, n2);
    EXPECT_NEAR(std::abs((x * y).to_complex() - x.to_complex() * y.to_complex()), 0.0, 1e-9);
    EXPECT_NEAR(std::abs((x + y).to_complex() - (x.to_complex() + y.to_complex())), 0.0, 1e-9);
  }
}

TEST(Cyclo, RootOfUnityIndex) {
  auto idx = CycloNum::root(6, 5).root_of_unity_index();
  ASSERT_TRUE(idx);
  EXPECT_EQ(*idx, std::make_pair(6, 5));
  idx = CycloNum(-1).root_of_unity_index();
  ASSERT_TRUE(idx);
  EXPECT_EQ(*idx, std::make_pair(2, 1));
  idx = (-CycloNum::root(3)).root_of_unity_index();  // -omega^2 ... = zeta_6^5
  ASSERT_TRUE(idx);
  EXPECT_EQ(idx->first, 6);
  EXPECT_FALSE(CycloNum(2).root_of_unity_index());
}
