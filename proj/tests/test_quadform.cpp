#include <gtest/gtest.h>

#include <random>

#include "dp4/design.hpp"
#include "dp4/family.hpp"
#include "oracles.hpp"

using namespace dp4;

namespace {

KMatrix diag_matrix(const RatFuncField& k, const std::vector<RatFunc>& d) {
  KMatrix m = zero_matrix(k, int(d.size()), int(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m[i][i] = d[i];
  return m;
}

KMatrix congruent(const RatFuncField& k, const KMatrix& M, const KMatrix& P) {
  return matmul(k, matmul(k, transpose<RatFuncField>(P), M), P);
}

}  // namespace

TEST(Diagonalize, Congruence) {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 60; ++i) {
    auto k = RatFuncField::make(std::vector<std::uint32_t>{3, 5, 7, 11, 13}[i % 5]);
    const int n = 2 + i % 4;
    KMatrix M = oracle::random_symmetric(*k, n, 2, rng);
    if (i % 3 == 0)
      for (int j = 0; j < n; ++j) M[j][j] = k->zero();
    auto D = diagonalize(*k, M);
    EXPECT_TRUE(matrices_equal(*k, congruent(*k, M, D.P), diag_matrix(*k, D.diag)));
    EXPECT_FALSE(k->is_zero(det(*k, D.P)));
    EXPECT_EQ(D.rank, rank(*k, M));
  }
}

TEST(Diagonalize, HyperbolicPlane) {
  auto k = RatFuncField::make(5);
  KMatrix H{{k->zero(), k->one()}, {k->one(), k->zero()}};
  auto D = diagonalize(*k, H);
  EXPECT_EQ(D.rank, 2);
  // discriminant -1 modulo squares
  EXPECT_TRUE(is_global_square(*k, k->neg(k->mul(D.diag[0], D.diag[1]))));
}

TEST(Matrix, DetRankKernel) {
  auto k = RatFuncField::make(7);
  const RatFunc t = k->t();
  KMatrix M{{t, k->one()}, {k->one(), k->inv(t)}};
  EXPECT_TRUE(k->is_zero(det(*k, M)));
  EXPECT_EQ(rank(*k, M), 1);
  auto v = kernel_vector(*k, M);
  ASSERT_TRUE(v.has_value());
  for (int i = 0; i < 2; ++i) EXPECT_TRUE(k->is_zero(k->add(k->mul(M[i][0], (*v)[0]), k->mul(M[i][1], (*v)[1]))));
  EXPECT_TRUE(k->equal(det(*k, identity_matrix(*k, 4)), k->one()));
}

TEST(Charpoly, FamilyFactorization) {
  auto P = make_params(7, 3, RatFuncField::make(7)->one());
  Pencil pen = build_family(P);
  DisplayedForms D = displayed_forms(P);
  EXPECT_EQ(pen.f, (quadratic_factor(P.k) * D.f3).scale(D.c));
}

TEST(Charpoly, CongruenceScalesByDetSquared) {
  std::mt19937_64 rng(21);
  auto P = make_params(5, 3, parse_ratfunc(*RatFuncField::make(5), "t+2"));
  const RatFuncField& k = *P.k;
  Pencil pen = build_family(P);
  for (int i = 0; i < 5; ++i) {
    KMatrix T = zero_matrix(k, 5, 5);
    for (auto& row : T)
      for (auto& x : row) x = k.random_poly(rng, 1);
    const RatFunc dt = det(k, T);
    if (k.is_zero(dt)) continue;
    KPoly g = charpoly(P.k, congruent(k, pen.M0, T), congruent(k, pen.Minf, T));
    EXPECT_EQ(g, pen.f.scale(k.mul(dt, dt)));
  }
}

TEST(Pencil, Validation) {
  auto k = RatFuncField::make(5);
  KMatrix Z = zero_matrix(*k, 5, 5), I = identity_matrix(*k, 5);
  EXPECT_THROW(Pencil::make(k, I, I), degenerate_pencil);  // (1+x)^5
  KMatrix A = I;
  A[0][1] = k->one();
  EXPECT_THROW(Pencil::make(k, A, I), std::invalid_argument);
  EXPECT_THROW(Pencil::make(k, zero_matrix(*k, 4, 4), zero_matrix(*k, 4, 4)), std::invalid_argument);
  (void)Z;
}

TEST(Epsilon, IndependentOfHyperplane) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    auto k = RatFuncField::make(p);
    auto P = p == 3 ? make_params(3, std::nullopt, parse_ratfunc(*k, "t^4+2t^3+t^2+t"), k)
                    : make_params(p, std::nullopt, parse_ratfunc(*k, "t^3+t+1"), k);
    Pencil pen = build_family(P);
    KPoly f3 = exact_div(pen.f, quadratic_factor(k)).monic();
    for (const KPoly& g : {quadratic_factor(k), f3}) {
      auto e0 = epsilon_invariant(pen, g, 0);
      for (int c = 1; c < 5; ++c) {
        EpsilonInvariant e;
        try {
          e = epsilon_invariant(pen, g, c);
        } catch (const std::invalid_argument&) {
          break;
        }
        EXPECT_NE(e.hyperplane, e0.hyperplane);
        EXPECT_TRUE(mod_squares_equal(e0.field, e0.value, e.value).equal_likely) << p << " choice " << c;
      }
    }
    EXPECT_EQ(epsilon_invariants(pen, {quadratic_factor(k), f3}).size(), 2u);
  }
}

TEST(Epsilon, DisplayedFormsForPGreaterThanThree) {
  for (std::uint32_t p : {7u, 11u, 13u}) {
    auto k = RatFuncField::make(p);
    auto P = make_params(p, std::nullopt, parse_ratfunc(*k, "t^2+1"), k);
    InvariantsReport r = invariants(P);
    for (const auto& c : r.checks) EXPECT_TRUE(c.ok) << p << " " << c.name << " " << c.detail;
  }
}

TEST(LocalCriteria, ConicSymbolAndHypothesis) {
  auto k = RatFuncField::make(3);
  const Place pt = Place::finite(k->poly_t());
  // -x^2 + t y^2 + 2 z^2: symbol (t, 2)_t = -1
  EXPECT_EQ(conic_symbol(*k, k->from_int(-1), k->t(), k->from_int(2), pt), Sign::Minus);
  EXPECT_EQ(conic_symbol(*k, k->one(), k->from_int(-1), k->t(), pt), Sign::Plus);
  KMatrix H{{k->one(), k->zero()}, {k->zero(), k->one()}};  // x^2 + y^2, -det = -1 nonsquare mod 3
  KMatrix C = identity_matrix(*k, 3);
  EXPECT_THROW(line_on_rank5_local(*k, H, C, pt), lemma_hypothesis_not_met);
  KMatrix Hy{{k->zero(), k->one()}, {k->one(), k->zero()}};
  EXPECT_TRUE(line_on_rank5_local(*k, Hy, C, pt));
}

TEST(Design, SpecializationHasXCoefficientT) {
  for (std::uint32_t p : {5u, 7u, 11u, 13u}) {
    auto k = RatFuncField::make(p);
    const std::uint32_t a = find_alpha(p).alpha;
    auto rep = generic_design_check(k, specialization(*k, a, parse_ratfunc(*k, "t^3+t+1")),
                                    {k->zero(), k->one(), k->t()});
    EXPECT_TRUE(rep.x_coefficient_is_t);
    EXPECT_TRUE(rep.charpoly_matches);
    EXPECT_TRUE(rep.eps2_scaled);
    // the unscaled identity needs -alpha to be a square
    const bool minus_alpha_square = oracle::euler_fp(p, -std::int64_t(a)) == 1;
    EXPECT_EQ(rep.eps2_displayed, minus_alpha_square) << p;
    for (const auto& s : rep.samples) {
      EXPECT_TRUE(s.pivots_match);
      EXPECT_EQ(s.conic, s.displayed);
    }
  }
}

TEST(Design, RandomParametersOverFive) {
  std::mt19937_64 rng(22);
  auto k = RatFuncField::make(5);
  int done = 0;
  for (int i = 0; i < 40 && done < 10; ++i) {
    DesignParams P{k->random_poly(rng, 2), k->random_poly(rng, 2), k->random_poly(rng, 2), k->random_poly(rng, 2),
                   k->random_poly(rng, 2), k->random_poly(rng, 2), k->random_poly(rng, 2), k->random_poly(rng, 1)};
    try {
      auto rep = generic_design_check(k, P, {k->zero(), k->one(), k->t()});
      EXPECT_TRUE(rep.charpoly_matches);
      EXPECT_TRUE(rep.eps2_scaled);
      for (const auto& s : rep.samples) EXPECT_TRUE(s.pivots_match);
      // at B = 0 the pivots are b1, b2, (b1 b4 - b3^2)/b1
      EXPECT_EQ(rep.samples[0].conic, rep.samples[0].displayed);
      ++done;
    } catch (const degenerate_pencil&) {
    } catch (const std::domain_error&) {
    }
  }
  EXPECT_EQ(done, 10);
}

TEST(Design, DegenerateRejected) {
  auto k = RatFuncField::make(5);
  DesignParams P{k->t(), k->one(), k->one(), k->from_int(2), k->one(), k->from_int(2), k->from_int(2), k->one()};
  EXPECT_THROW(generic_design_check(k, P, {k->one()}), std::domain_error);  // b1 b4 = b3^2
}
