#include <gtest/gtest.h>

#include <minslope/bundle_geometry.hpp>

#include <cmath>

using namespace minslope;

TEST(ChowRing, HirzebruchSurfaceByHand) {
  // m = 0, n = 1: eta^2 = h eta, h^2 = 0, h eta = d
  for (int d : {1, 3}) {
    ChowRing R(0, 1, d);
    EXPECT_EQ(R.integrate(R.monomial(1, 1)), d);
    EXPECT_EQ(R.integrate(R.monomial(0, 2)), d);
    EXPECT_EQ(R.integrate(R.monomial(2, 0)), 0);
    const Rational a(7, 3), b(1, 2);
    BundleParams P{0, 1, a, b, d};
    // (h + a eta)^2 = 2a + a^2, (h + a eta)(h + b eta) = a + b + ab
    EXPECT_EQ(chow_alpha_top(P), d * (2 * a + a * a));
    EXPECT_EQ(chow_alpha_beta(P), d * (a + b + a * b));
    EXPECT_EQ(mu_s_exact(P, 0), Rational(2 * (a + b + a * b) / (2 * a + a * a)));
  }
}

TEST(ChowRing, ClosedFormsOverRationalGrid) {
  const std::vector<Rational> grid{Rational(1, 3), Rational(1), Rational(3, 2), Rational(5, 2), Rational(4)};
  for (int m = 0; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n)
      for (const auto& a : grid)
        for (const auto& b : grid) {
          BundleParams P{m, n, a, b, 1};
          ASSERT_EQ(chow_alpha_top(P), alpha_top_closed(P));
          ASSERT_EQ(chow_alpha_beta(P), alpha_beta_closed(P));
          ASSERT_EQ(P.dim() * chow_alpha_beta(P) / chow_alpha_top(P), mu_s_exact(P, 0));
        }
}

TEST(ChowRing, IdentitySuites) {
  auto bundle = bundle_identity_check(4);
  EXPECT_TRUE(bundle.ok()) << bundle.failures.front();
  auto comb = combinatorial_identity_check(12);
  EXPECT_TRUE(comb.ok()) << comb.failures.front();
  EXPECT_EQ(comb.checked, 144);
  auto pair = pairing_table_check(6);
  EXPECT_TRUE(pair.ok()) << pair.failures.front();
}

TEST(ChowRing, CombinatorialIdentityFailsAtZeroQ) {
  // outside the stated range the alternating sum is 0, not 1
  EXPECT_EQ(alternating_sum(3, 0), 0);
  EXPECT_EQ(alternating_sum(3, 4), binom(7, 4));
}

TEST(BundleSlopes, IntegralsExactVsQuadrature) {
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      double exact = to_double(I_exact(m, n, Rational(1, 5), Rational(13, 4)));
      EXPECT_NEAR(I_num(m, n, 0.2, 3.25), exact, 1e-12 * exact);
    }
  BundleParams P{1, 2, 3, Rational(1, 2), 1};
  EXPECT_NEAR(mu_s(P, 0.75), to_double(mu_s_exact(P, Rational(3, 4))), 1e-13);
}

TEST(BundleSlopes, UnstableExample) {
  auto P = parse_bundle_params("0,1,4,1");
  auto lz = lambda_and_zeta(P);
  EXPECT_EQ(lz.mu0, Rational(3, 4));
  EXPECT_EQ(lz.verdict, Verdict::Unstable);
  EXPECT_NEAR(lz.lambda, 9 - 5 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(lz.zeta_inv, (2 + std::sqrt(3.0)) / 5, 1e-12);
  // the minimal slope equals the bubble slope at the free boundary
  EXPECT_NEAR(lz.zeta_inv, lz.zeta_check, 1e-12);
  EXPECT_LT(lz.zeta_inv, to_double(lz.mu0));
  EXPECT_LE(lz.bracket.width(), 1e-14);
}

TEST(BundleSlopes, StableAndSemistable) {
  auto s = lambda_and_zeta(parse_bundle_params("0,1,1,2"));
  EXPECT_EQ(s.mu0, Rational(10, 3));
  EXPECT_EQ(s.verdict, Verdict::Stable);
  EXPECT_EQ(s.lambda, 0);

  auto ss = lambda_and_zeta(parse_bundle_params("0,1,4,1.6"));
  EXPECT_EQ(ss.mu0, 1);
  EXPECT_EQ(ss.verdict, Verdict::Semistable);
  EXPECT_EQ(ss.lambda, 0);
}

TEST(BundleSlopes, LambdaRootOfBlowupSlope) {
  // at lambda, mu_lambda (1 + lambda) = n, for several unstable bundles
  for (const char* s : {"0,1,4,1", "1,1,3,1/4", "0,2,5,1/2", "2,2,2,1/10"}) {
    auto P = parse_bundle_params(s);
    auto lz = lambda_and_zeta(P);
    ASSERT_EQ(lz.verdict, Verdict::Unstable) << s;
    EXPECT_NEAR(mu_s(P, lz.lambda) * (1 + lz.lambda), P.n, 1e-10) << s;
    EXPECT_GT(lz.lambda, 0);
    EXPECT_LT(lz.lambda, P.ad());
  }
}

TEST(BundleParamsParse, Errors) {
  EXPECT_THROW(parse_bundle_params("0,1,4"), InputError);
  EXPECT_THROW(parse_bundle_params("0.5,1,4,1"), InputError);
  EXPECT_THROW(parse_bundle_params("0,0,4,1"), InputError);
  EXPECT_THROW(parse_bundle_params("0,1,-4,1"), InputError);
  EXPECT_THROW(parse_bundle_params("0,1,4,x"), InputError);
  auto P = parse_bundle_params("1, 2, 7/3, 0.5, 3");
  EXPECT_EQ(P.a, Rational(7, 3));
  EXPECT_EQ(P.b, Rational(1, 2));
  EXPECT_EQ(P.d, 3);
}

TEST(Rationals, DecimalsAreExact) {
  EXPECT_EQ(parse_rational("0.3"), Rational(3, 10));
  EXPECT_EQ(parse_rational("-2.5e-1"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("6/-4"), Rational(-3, 2));
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
  EXPECT_THROW(parse_rational("1.2.3"), InputError);
}
