#include <gtest/gtest.h>

#include <random>

#include "dp4/family.hpp"
#include "oracles.hpp"

using namespace dp4;

namespace {

std::vector<FpPoly> factors_of(const FpPoly& f) {
  std::vector<FpPoly> out;
  for (const auto& [g, m] : factor(f).factors) {
    EXPECT_EQ(m, 1);
    out.push_back(g);
  }
  return out;
}

FpPoly xi_for(std::uint32_t p, std::uint32_t a) {
  auto P = make_params(p, a, RatFuncField::make(p)->one());
  return displayed_forms(P).xi;
}

long long necklace(long long q, int n) {
  auto mu = [](int m) {
    int r = 1;
    for (int d = 2; d * d <= m; ++d)
      if (m % d == 0) {
        m /= d;
        if (m % d == 0) return 0;
        r = -r;
      }
    return m > 1 ? -r : r;
  };
  long long s = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) {
      long long qq = 1;
      for (int i = 0; i < n / d; ++i) qq *= q;
      s += mu(d) * qq;
    }
  return s / n;
}

}  // namespace

TEST(Factor, XiAtSeven) {
  auto k = RatFuncField::make(7);
  auto fs = factors_of(xi_for(7, 3));
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0], parse_poly(*k, "t^4+5t^2+2t+4"));
  EXPECT_EQ(fs[1], parse_poly(*k, "t^10+4t^9+t^8+3t^7+5t^6+2t^5+5t^3+t^2+4t+6"));
}

TEST(Factor, XiAtEleven) {
  auto k = RatFuncField::make(11);
  auto fs = factors_of(xi_for(11, 8));
  ASSERT_EQ(fs.size(), 3u);
  EXPECT_EQ(fs[0], parse_poly(*k, "t^2+2t+10"));
  EXPECT_EQ(fs[1], parse_poly(*k, "t^6+4t^5+6t^4+9t^3+2t^2+6t+7"));
  EXPECT_EQ(fs[2], parse_poly(*k, "t^6+9t^5+5t^4+5t^3+3t^2+2t+10"));
}

TEST(Factor, SquareOfT) {
  auto k = RatFuncField::make(5);
  auto F = factor(parse_poly(*k, "t^2"));
  ASSERT_EQ(F.factors.size(), 1u);
  EXPECT_EQ(F.factors[0].first, k->poly_t());
  EXPECT_EQ(F.factors[0].second, 2);
}

TEST(Factor, RemultiplyRandom) {
  std::mt19937_64 rng(5);
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    auto fp = PrimeField::make(p);
    for (int i = 0; i < 40; ++i) {
      FpPoly f = oracle::random_poly(fp, 1 + int(rng() % 30), rng);
      if (i % 4 == 0) f = f * f * oracle::random_poly(fp, 2, rng);
      if (f.degree() < 1) continue;
      auto F = factor(f);
      EXPECT_EQ(F.expand(fp), f);
      for (const auto& [g, m] : F.factors) EXPECT_TRUE(g.is_monic() && oracle::irreducible_by_gcd(g));
      EXPECT_EQ(factor(f).factors, F.factors);  // reproducible
    }
  }
}

TEST(Factor, ZeroPolynomialRejected) {
  auto fp = PrimeField::make(5);
  EXPECT_ANY_THROW(factor(FpPoly(fp)));
}

TEST(Discriminant, Quadratic) {
  auto fp = PrimeField::make(5);
  FpPoly f(fp, {fp->from_int(-1), 0, 1});
  EXPECT_EQ(discriminant(f), 4u);
}

TEST(Discriminant, CubicOfPEqThreeFamily) {
  auto k = RatFuncField::make(3);
  auto P = make_params(3, std::nullopt, k->one(), k);
  KPoly f3 = displayed_forms(P).f3;
  EXPECT_TRUE(k->equal(discriminant(f3), parse_ratfunc(*k, "t^3*(t^2+2t+2)*(t^4+2t^3+t+1)")));
}

TEST(Discriminant, RootProductOracle) {
  std::mt19937_64 rng(7);
  auto fp = PrimeField::make(7);
  auto G = make_gf(7, 6);
  for (int i = 0; i < 20; ++i) {
    FpPoly f = oracle::random_poly(fp, 2, rng) + FpPoly::monomial(fp, fp->from_int(1 + rng() % 6), 3);
    if (gcd(f, f.derivative()).degree() > 0) continue;
    auto fg = f.map(G, [&](std::uint32_t c) { return G->from_base(c); });
    auto rs = roots(fg);
    ASSERT_EQ(rs.size(), 3u);
    auto prod = G->one();
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) prod = G->mul(prod, G->pow(G->sub(rs[a], rs[b]), 2));
    // disc = lead^(2n-2) prod (r_i - r_j)^2
    prod = G->mul(prod, G->pow(G->from_base(f.lead()), 4));
    EXPECT_TRUE(G->equal(prod, G->from_base(discriminant(f))));
  }
}

TEST(Discriminant, ZeroIffRepeatedFactor) {
  std::mt19937_64 rng(9);
  auto fp = PrimeField::make(5);
  for (int i = 0; i < 100; ++i) {
    FpPoly f = oracle::random_poly(fp, 6, rng);
    if (i % 3 == 0) f = f * oracle::random_poly(fp, 1, rng).monic() * oracle::random_poly(fp, 1, rng).monic();
    if (f.degree() < 1) continue;
    EXPECT_EQ(discriminant(f) == 0, gcd(f, f.derivative()).degree() > 0);
  }
}

TEST(Irreducibles, DegreeOneOverThree) {
  auto fp = PrimeField::make(3);
  auto all = IrreducibleStream<PrimeField>(fp, 1).all();
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].to_string("t"), "t");
  EXPECT_EQ(all[1].to_string("t"), "t+1");
  EXPECT_EQ(all[2].to_string("t"), "t+2");
}

TEST(Irreducibles, CountsAndMembership) {
  auto k = RatFuncField::make(3);
  EXPECT_EQ(IrreducibleStream<PrimeField>(k->prime_field_ptr(), 2).all().size(), 3u);
  auto cubics = IrreducibleStream<PrimeField>(k->prime_field_ptr(), 3).all();
  EXPECT_NE(std::find(cubics.begin(), cubics.end(), parse_poly(*k, "t^3+2t^2+t+1")), cubics.end());
  for (std::uint32_t p : {3u, 5u, 7u})
    for (int n = 1; n <= 4; ++n) {
      auto all = IrreducibleStream<PrimeField>(PrimeField::make(p), n).all();
      EXPECT_EQ(static_cast<long long>(all.size()), necklace(p, n)) << p << " " << n;
      for (std::size_t i = 1; i < all.size(); ++i) EXPECT_TRUE(detail::canonical_less(all[i - 1], all[i]));
    }
}

TEST(PolyText, RoundTrip) {
  auto k = RatFuncField::make(7);
  for (std::string s : {"t^4+5*t^2+2*t+4", "6*t^3+1", "t", "3"})
    EXPECT_EQ(parse_poly(*k, s).to_string("t"), s);
}
