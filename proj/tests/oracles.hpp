#pragma once

// Brute-force and textbook oracles, kept independent of the library routines
// they check: plain integer arithmetic, polynomial powmod, exhaustive search.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dp4/factor.hpp"
#include "dp4/funcfield.hpp"
#include "dp4/laurent.hpp"
#include "dp4/quadform.hpp"

namespace oracle {

using namespace dp4;

inline std::uint64_t powmod_int(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return r;
}

/// Euler criterion in F_p: +1, -1 or 0.
inline int euler_fp(std::uint32_t p, std::int64_t a) {
  std::int64_t r = ((a % std::int64_t(p)) + p) % p;
  if (r == 0) return 0;
  return powmod_int(std::uint64_t(r), (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Euler criterion in F_p[t]/(q): b^((p^deg q - 1)/2) mod q.
inline int euler_mod(const FpPoly& b, const FpPoly& q) {
  FpPoly r = b % q;
  if (r.is_zero()) return 0;
  u128 n = 1;
  for (int i = 0; i < q.degree(); ++i) n *= q.field().characteristic();
  FpPoly e = powmod(r, (n - 1) / 2, q);
  return e.degree() == 0 && e.lead() == 1 ? 1 : -1;
}

/// Irreducibility by gcd(t^{p^i} - t, f) = 1 for i <= n/2.
inline bool irreducible_by_gcd(const FpPoly& f) {
  const int n = f.degree();
  if (n < 1) return false;
  const FpPoly m = f.monic();
  const FpPoly t = FpPoly::x(f.field_ptr());
  FpPoly x = t;
  for (int i = 1; i <= n / 2; ++i) {
    x = powmod(x, f.field().characteristic(), m);
    if (gcd(x - t, m).degree() > 0) return false;
  }
  return true;
}

/// Exhaustive square test in F_p[t]/(q).
inline bool square_mod_brute(const FpPoly& b, const FpPoly& q) {
  const auto& fp = q.field_ptr();
  const FpPoly r = b % q;
  const int d = q.degree();
  u128 n = 1;
  for (int i = 0; i < d; ++i) n *= fp->characteristic();
  for (u128 i = 0; i < n; ++i) {
    std::vector<PrimeField::Elem> c(d);
    u128 x = i;
    for (auto& ci : c) {
      ci = PrimeField::Elem(x % fp->characteristic());
      x /= fp->characteristic();
    }
    FpPoly y(fp, c);
    if ((y * y - r) % q == FpPoly(fp)) return true;
  }
  return false;
}

/// Digit-wise Hensel: does some y with y^2 = u mod pi^n exist, for a unit
/// digit vector u (u[0] != 0)? Each new digit of y is found by exhaustive
/// search over the residue field.
inline bool digitwise_square(const GF& R, const std::vector<GF::Elem>& u, int n) {
  const u128 q = R.order();
  std::vector<GF::Elem> roots0;
  for (u128 i = 0; i < q; ++i) {
    auto y = R.from_index(i);
    if (R.equal(R.mul(y, y), u[0])) roots0.push_back(y);
  }
  for (const auto& y0 : roots0) {
    std::vector<GF::Elem> y{y0};
    bool ok = true;
    for (int k = 1; k < n && ok; ++k) {
      // coefficient k of y^2 with y_k unknown: 2 y0 y_k + sum_{0<i<k} y_i y_{k-i}
      ok = false;
      for (u128 i = 0; i < q; ++i) {
        auto yk = R.from_index(i);
        auto s = R.mul(R.from_int(2), R.mul(y0, yk));
        for (int j = 1; j < k; ++j) s = R.add(s, R.mul(y[j], y[k - j]));
        if (R.equal(s, k < int(u.size()) ? u[k] : R.zero())) {
          y.push_back(yk);
          ok = true;
          break;
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

/// Random polynomial in F_p[t] of degree <= d, nonzero.
template <class Rng>
FpPoly random_poly(const std::shared_ptr<const PrimeField>& fp, int d, Rng& rng) {
  for (;;) {
    std::vector<PrimeField::Elem> c(d + 1);
    for (auto& x : c) x = fp->random(rng);
    FpPoly f(fp, std::move(c));
    if (!f.is_zero()) return f;
  }
}

/// Random monic irreducible of degree d.
template <class Rng>
FpPoly random_irreducible(const std::shared_ptr<const PrimeField>& fp, int d, Rng& rng) {
  for (;;) {
    FpPoly f = random_poly(fp, d - 1, rng) + FpPoly::monomial(fp, fp->one(), d);
    if (irreducible_by_gcd(f)) return f;
  }
}

/// Random symmetric n x n matrix over F_p(t) with small polynomial entries.
template <class Rng>
KMatrix random_symmetric(const RatFuncField& k, int n, int deg, Rng& rng) {
  KMatrix M = zero_matrix(k, n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) M[i][j] = M[j][i] = k.random_poly(rng, deg);
  return M;
}

}  // namespace oracle
