#include <gtest/gtest.h>

#include <random>

#include "dp4/family.hpp"
#include "dp4/hensel.hpp"
#include "oracles.hpp"

using namespace dp4;

namespace {

std::vector<std::pair<int, int>> pattern(const std::vector<LocalFactor>& fs) {
  std::vector<std::pair<int, int>> out;
  for (const auto& g : fs) out.emplace_back(g.degree(), g.e);
  std::sort(out.begin(), out.end());
  return out;
}

KPoly family_cubic(std::uint32_t p, std::shared_ptr<const RatFuncField> k) {
  auto P = p == 3 ? make_params(3, std::nullopt, k->one(), k) : make_params(p, std::nullopt, k->one(), k);
  return displayed_forms(P).f3;
}

}  // namespace

TEST(Complete, GeometricSeries) {
  auto k = RatFuncField::make(5);
  LocalField K(k, Place::finite(k->poly_t()), 4);
  auto s = K.complete(parse_ratfunc(*k, "1/(1-t)"));
  EXPECT_EQ(K.valuation(s), 0);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(K.residue().is_one(K.digit(s, i)));
}

TEST(Complete, TAtInfinity) {
  auto k = RatFuncField::make(5);
  LocalField K(k, Place::infinity(), 3);
  auto s = K.complete(k->t());
  EXPECT_EQ(K.valuation(s), -1);
  EXPECT_TRUE(K.residue().is_one(K.leading(s)));
  EXPECT_TRUE(K.residue().is_zero(K.digit(s, 0)));
}

TEST(Complete, AlphaOverT) {
  auto k = RatFuncField::make(7);
  LocalField K(k, Place::finite(k->poly_t()), 8);
  auto s = K.complete(parse_ratfunc(*k, "3/t"));
  EXPECT_EQ(K.valuation(s), -1);
  EXPECT_TRUE(K.residue().equal(K.leading(s), K.residue().from_int(3)));
}

TEST(HenselFactor, CubicAtOmegaOneSeven) {
  auto k = RatFuncField::make(7);
  auto K = std::make_shared<const LocalField>(k, Place::finite(parse_poly(*k, "t^4+5t^2+2t+4")), 24);
  auto fs = hensel_factor(K, family_cubic(7, k));
  EXPECT_EQ(pattern(fs), (std::vector<std::pair<int, int>>{{1, 1}, {2, 2}}));
  for (const auto& g : fs) EXPECT_EQ(g.e * g.f, g.degree());
}

TEST(HenselFactor, CubicAtPEqThree) {
  auto k = RatFuncField::make(3);
  auto K = std::make_shared<const LocalField>(k, Place::finite(parse_poly(*k, "t^2+2t+2")), 24);
  auto fs = hensel_factor(K, family_cubic(3, k));
  EXPECT_EQ(pattern(fs), (std::vector<std::pair<int, int>>{{1, 1}, {2, 2}}));
}

TEST(HenselFactor, GoodPlacesMatchResidueFactorization) {
  auto k = RatFuncField::make(7);
  KPoly f3 = family_cubic(7, k);
  const RatFunc disc = discriminant(f3);
  int n = 0;
  for (const auto& nu : places_up_to_degree(k->prime_field_ptr(), 2)) {
    if (valuation(disc, nu) != 0) continue;
    bool integral = true;
    for (const auto& c : f3.coeffs()) integral = integral && valuation(c, nu) >= 0;
    if (!integral) continue;
    auto K = std::make_shared<const LocalField>(k, nu, 16);
    auto fs = hensel_factor(K, f3);
    auto R = residue_field(k->prime_field_ptr(), nu);
    std::vector<GF::Elem> red;
    for (const auto& c : f3.coeffs()) red.push_back(*reduce_integral(*R, c, nu));
    std::vector<int> want, got;
    for (const auto& [g, m] : factor(ResiduePoly(R, red)).factors) want.push_back(g.degree());
    int sum = 0;
    for (const auto& g : fs) {
      EXPECT_EQ(g.e, 1);
      got.push_back(g.degree());
      sum += g.e * g.f;
    }
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want) << nu.to_string();
    EXPECT_EQ(sum, 3);
    ++n;
  }
  EXPECT_GT(n, 20);
}

TEST(HenselFactor, WildRamificationIsAnError) {
  auto k = RatFuncField::make(3);
  auto K = std::make_shared<const LocalField>(k, Place::finite(k->poly_t()), 16);
  KPoly f(k, {k->neg(k->t()), k->zero(), k->zero(), k->one()});  // x^3 - t
  EXPECT_ANY_THROW(hensel_factor(K, f));
}

TEST(IsSquareLocal, SquaresAndUniformizers) {
  std::mt19937_64 rng(8);
  auto k = RatFuncField::make(5);
  for (const auto& nu : {Place::finite(k->poly_t()), Place::infinity(), Place::finite(parse_poly(*k, "t^2+2"))}) {
    LocalField K(k, nu, 12);
    for (int i = 0; i < 30; ++i) {
      RatFunc x = k->div(k->random_poly(rng, 4), k->random_poly(rng, 2));
      if (k->is_zero(x)) continue;
      auto s = K.complete(x);
      EXPECT_TRUE(is_square_local(K, K.mul(s, s)));
      EXPECT_FALSE(is_square_local(K, K.mul(K.pi_pow(1), K.mul(s, s))));
      auto r = sqrt_local(K, K.mul(s, s));
      ASSERT_TRUE(r.has_value());
      EXPECT_TRUE(K.equal(K.mul(*r, *r), K.mul(s, s)));
    }
  }
}

TEST(IsSquareLocal, DigitwiseHenselOracle) {
  std::mt19937_64 rng(9);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto k = RatFuncField::make(p);
    for (const auto& nu : {Place::finite(k->poly_t()), Place::infinity(),
                           Place::finite(oracle::random_irreducible(k->prime_field_ptr(), 2, rng))}) {
      LocalField K(k, nu, 8);
      const GF& R = K.residue();
      for (int i = 0; i < 100; ++i) {
        std::vector<GF::Elem> u(8);
        for (auto& x : u) x = R.random(rng);
        while (R.is_zero(u[0])) u[0] = R.random(rng);
        const int v = int(rng() % 5) - 2;
        auto w = K.from_digits(v, u);
        EXPECT_EQ(is_square_local(K, w), v % 2 == 0 && oracle::digitwise_square(R, u, 8));
      }
    }
  }
}

TEST(ExtIsSquare, InvariantUnderSquares) {
  std::mt19937_64 rng(10);
  auto k = RatFuncField::make(7);
  KPoly f3 = family_cubic(7, k);
  for (const char* q : {"t^4+5t^2+2t+4", "t+2", "t^2+1"}) {
    auto K = std::make_shared<const LocalField>(k, Place::finite(parse_poly(*k, q)), 24);
    for (const auto& g : hensel_factor(K, f3)) {
      for (int i = 0; i < 10; ++i) {
        auto elem = [&] {
          std::vector<LaurentSeries> c;
          for (int j = 0; j < g.degree(); ++j) c.push_back(K->complete(k->random_poly(rng, 3)));
          return LocalPoly(K, c);
        };
        LocalPoly w = elem(), s = elem();
        if (w.is_zero() || s.is_zero()) continue;
        const bool a = ext_is_square(g, w);
        EXPECT_EQ(ext_is_square(g, (w * s * s) % g.poly), a) << q;
        EXPECT_TRUE(ext_is_square(g, (s * s) % g.poly));
      }
    }
  }
}

TEST(Precision, RetryDoubles) {
  std::vector<int> seen;
  int r = with_precision_retry(16, [&](int prec) {
    seen.push_back(prec);
    if (prec < 64) throw precision_exhausted("more");
    return prec;
  });
  EXPECT_EQ(r, 64);
  EXPECT_EQ(seen, (std::vector<int>{16, 32, 64}));
  EXPECT_THROW(with_precision_retry(16, [](int) -> int { throw precision_exhausted("never"); }), precision_exhausted);
}
