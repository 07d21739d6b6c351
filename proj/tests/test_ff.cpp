#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dp4/factor.hpp"
#include "oracles.hpp"

using namespace dp4;

TEST(PrimeField, SquaresMatchExamples) {
  auto F7 = PrimeField::make(7);
  EXPECT_FALSE(is_square(*F7, F7->from_int(3)));
  EXPECT_TRUE(is_square(*F7, F7->one()));
  auto F13 = PrimeField::make(13);
  std::set<std::uint32_t> sq;
  for (std::uint32_t x = 0; x < 13; ++x)
    if (is_square(*F13, x)) sq.insert(x);
  EXPECT_EQ(sq, (std::set<std::uint32_t>{0, 1, 3, 4, 9, 10, 12}));
}

TEST(PrimeField, EulerAgreesWithSquaring) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 101u}) {
    auto F = PrimeField::make(p);
    std::set<std::uint32_t> brute;
    for (std::uint32_t y = 0; y < p; ++y) brute.insert(F->mul(y, y));
    for (std::uint32_t x = 0; x < p; ++x) EXPECT_EQ(is_square(*F, x), brute.count(x) == 1) << p << " " << x;
  }
}

TEST(PrimeField, Sqrt) {
  auto F7 = PrimeField::make(7);
  EXPECT_EQ(sqrt(*F7, F7->from_int(4)), std::optional<std::uint32_t>(2));
  EXPECT_FALSE(sqrt(*F7, F7->from_int(3)).has_value());
  auto F11 = PrimeField::make(11);
  EXPECT_EQ(sqrt(*F11, F11->from_int(5)), std::optional<std::uint32_t>(4));
}

TEST(PrimeField, RejectsCharacteristicTwo) {
  EXPECT_THROW(PrimeField::make(2), unsupported_characteristic);
  EXPECT_THROW(PrimeField::make(9), std::invalid_argument);
}

TEST(PrimeField, SqrtProperties) {
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 97u}) {
    auto F = PrimeField::make(p);
    std::uint32_t n = 2;
    while (is_square(*F, n)) ++n;
    for (std::uint32_t x = 1; x < p; ++x) {
      EXPECT_TRUE(is_square(*F, F->mul(x, x)));
      EXPECT_FALSE(is_square(*F, F->mul(n, F->mul(x, x))));
      auto r = sqrt(*F, x);
      EXPECT_EQ(r.has_value(), is_square(*F, x));
      if (r) {
        EXPECT_EQ(F->mul(*r, *r), x);
        EXPECT_LE(*r, F->neg(*r));
      }
    }
  }
}

TEST(ExtField, ModulusIsLeastIrreducible) {
  auto G = make_gf(3, 2);
  EXPECT_EQ(G->modulus().to_string("a"), "a^2+1");
  auto H = make_gf(5, 3);
  EXPECT_TRUE(is_irreducible(H->modulus()));
  // every smaller monic cubic is reducible
  IrreducibleStream<PrimeField> s(PrimeField::make(5), 3);
  u128 i = 0;
  EXPECT_EQ(*s.next(i), H->modulus());
}

TEST(ExtField, SquaresAndSqrt) {
  std::mt19937_64 rng(3);
  for (auto [p, d] : std::vector<std::pair<std::uint32_t, int>>{{3, 2}, {5, 2}, {7, 3}, {3, 4}}) {
    auto G = make_gf(p, d);
    std::set<std::vector<std::uint32_t>> brute;
    for (u128 i = 0; i < G->order(); ++i) {
      auto y = G->from_index(i);
      brute.insert(G->mul(y, y));
    }
    for (u128 i = 0; i < G->order(); ++i) {
      auto x = G->from_index(i);
      EXPECT_EQ(is_square(*G, x), brute.count(x) == 1);
      auto r = sqrt(*G, x);
      EXPECT_EQ(r.has_value(), is_square(*G, x));
      if (r) EXPECT_TRUE(G->equal(G->mul(*r, *r), x));
    }
  }
}

TEST(ExtField, Frobenius) {
  std::mt19937_64 rng(11);
  for (auto [p, d] : std::vector<std::pair<std::uint32_t, int>>{{3, 5}, {5, 4}, {7, 6}, {11, 3}, {13, 2}}) {
    auto G = make_gf(p, d);
    for (int i = 0; i < 50; ++i) {
      auto x = G->random(rng), y = G->random(rng);
      EXPECT_TRUE(G->equal(G->pow(G->add(x, y), p), G->add(G->pow(x, p), G->pow(y, p))));
      if (!G->is_zero(x)) EXPECT_TRUE(G->is_one(G->mul(x, G->inv(x))));
    }
  }
}
