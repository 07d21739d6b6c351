#include <gtest/gtest.h>

#include <random>

#include "dp4/certificate.hpp"
#include "dp4/family.hpp"
#include "oracles.hpp"

using namespace dp4;

namespace {

struct Cubic {
  std::shared_ptr<const RatFuncField> k;
  DisplayedForms D;
  std::shared_ptr<const Algebra> A;
  AlgebraElem eps3;  // displayed -alpha (t+1) theta
};

Cubic family_cubic(std::uint32_t p, std::uint32_t a) {
  Cubic c;
  c.k = RatFuncField::make(p);
  c.D = displayed_forms(make_params(p, a, c.k->one(), c.k));
  c.A = make_algebra(c.k, c.D.f3);
  c.eps3 = c.A->mul(c.A->from_base(c.D.eps3_coeff), c.A->generator());
  return c;
}

}  // namespace

TEST(Cubic, FamilyCubicsAreIrreducible) {
  for (auto [p, a] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{5, 3}, {7, 3}, {11, 8}, {13, 2}}) {
    auto c = family_cubic(p, a);
    EXPECT_TRUE(cubic_is_irreducible(*c.k, c.D.f3)) << p;
  }
  auto k3 = RatFuncField::make(3);
  EXPECT_TRUE(cubic_is_irreducible(*k3, displayed_forms(make_params(3, std::nullopt, k3->one(), k3)).f3));
}

TEST(Cubic, ReducibleDetected) {
  auto k = RatFuncField::make(5);
  const RatFunc t = k->t();
  // (x - t/(t+1)) (x^2 + 2)
  KPoly f = KPoly(k, {k->neg(k->div(t, k->add(t, k->one()))), k->one()}) * KPoly(k, {k->from_int(2), k->zero(), k->one()});
  EXPECT_FALSE(cubic_is_irreducible(*k, f));
  EXPECT_THROW(cubic_is_irreducible(*k, KPoly(k, {k->one(), k->one()})), std::invalid_argument);
}

TEST(Norm, GeneratorAndMultiplicativity) {
  std::mt19937_64 rng(12);
  auto c = family_cubic(7, 3);
  const RatFuncField& k = *c.k;
  // N(theta) = -f3(0) for a monic cubic
  EXPECT_TRUE(k.equal(norm(*c.A, c.A->generator()), k.neg(c.D.f3.coeff(0))));
  for (int i = 0; i < 10; ++i) {
    AlgebraElem x{k.random_poly(rng, 2), k.random_poly(rng, 2), k.random_poly(rng, 2)};
    AlgebraElem y{k.random_poly(rng, 2), k.random_poly(rng, 2), k.random_poly(rng, 2)};
    EXPECT_TRUE(k.equal(norm(*c.A, c.A->mul(x, y)), k.mul(norm(*c.A, x), norm(*c.A, y))));
  }
  // eps3 has square norm
  EXPECT_TRUE(is_global_square(k, norm(*c.A, c.eps3)));
}

TEST(LocalSquareInAlgebra, ReferenceVerdicts) {
  auto c7 = family_cubic(7, 3);
  for (const char* w : {"t^4+5t^2+2t+4", "t^10+4t^9+t^8+3t^7+5t^6+2t^5+5t^3+t^2+4t+6"})
    EXPECT_TRUE(local_square_in_algebra(c7.A, c7.eps3, Place::finite(parse_poly(*c7.k, w))));
  auto c11 = family_cubic(11, 8);
  for (const auto& nu : places_dividing(c11.D.xi)) EXPECT_TRUE(local_square_in_algebra(c11.A, c11.eps3, nu));
  auto bad = family_cubic(11, 2);
  int non = 0;
  for (const auto& nu : places_dividing(bad.D.xi)) non += !local_square_in_algebra(bad.A, bad.eps3, nu);
  EXPECT_EQ(non, 2);
}

TEST(LocalSquareInAlgebra, FastAndFullRoutesAgree) {
  std::mt19937_64 rng(13);
  auto c = family_cubic(5, 3);
  const RatFuncField& k = *c.k;
  for (int i = 0; i < 8; ++i) {
    AlgebraElem z{k.random_poly(rng, 2), k.random_poly(rng, 2), k.random_poly(rng, 1)};
    if (c.A->is_zero(z)) continue;
    LocalSquareTester T(c.A, z);
    for (const auto& nu : places_up_to_degree(k.prime_field_ptr(), 2)) {
      auto f = T.fast(nu);
      if (!f) continue;
      EXPECT_EQ(f->square, T.full(nu).square) << nu.to_string();
    }
  }
}

TEST(LocalSquareInAlgebra, SquaresAreSquares) {
  std::mt19937_64 rng(14);
  auto c = family_cubic(7, 3);
  const RatFuncField& k = *c.k;
  std::vector<Place> places{Place::finite(parse_poly(k, "t^4+5t^2+2t+4")), Place::finite(k.poly_t()),
                            Place::finite(t_plus_one(k)), Place::infinity()};
  for (int i = 0; i < 4; ++i) {
    AlgebraElem s{k.random_poly(rng, 2), k.random_poly(rng, 1), k.random_poly(rng, 1)};
    if (c.A->is_zero(s)) continue;
    for (const auto& nu : places) EXPECT_TRUE(local_square_in_algebra(c.A, c.A->mul(s, s), nu)) << nu.to_string();
  }
}

TEST(ModSquares, EqualAndWitness) {
  std::mt19937_64 rng(15);
  auto c = family_cubic(7, 3);
  const RatFuncField& k = *c.k;
  AlgebraElem s{k.random_poly(rng, 2), k.one(), k.random_poly(rng, 1)};
  auto v = mod_squares_equal(c.A, c.eps3, c.A->mul(c.eps3, c.A->mul(s, s)));
  EXPECT_TRUE(v.equal_likely);
  auto w = mod_squares_equal(c.A, c.eps3, c.A->mul(c.eps3, c.A->from_base(k.t())));
  EXPECT_FALSE(w.equal_likely);
  ASSERT_TRUE(w.witness.has_value());
  // the norm of t is t^3, so the witness is a place with odd valuation: t or inf
  EXPECT_TRUE(*w.witness == Place::finite(k.poly_t()) || w.witness->is_infinite());
}

TEST(ModSquares, PencilEpsilonMatchesDisplayedForPGreaterThanThree) {
  for (auto [p, a] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{7, 3}, {11, 8}, {13, 2}}) {
    auto ctx = FamilyContext::make(p, a);
    auto c = family_cubic(p, a);
    auto z = ctx->algebra()->mul(ctx->algebra()->from_base(c.D.eps3_coeff), ctx->algebra()->generator());
    EXPECT_TRUE(mod_squares_equal(ctx->algebra(), ctx->eps3(), z).equal_likely) << p;
  }
}
