#pragma once

#include <cstdlib>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/extfield.hpp"
#include "dp4/factor.hpp"
#include "dp4/funcfield.hpp"
#include "dp4/hensel.hpp"
#include "dp4/laurent.hpp"

// Etale algebras k[x]/f over k = F_p(t) for f of degree <= 3: norms, rational
// root test, and local square classes at places of k.

namespace dp4 {

using Algebra = ExtField<RatFuncField>;
using AlgebraElem = Algebra::Elem;

inline std::shared_ptr<const Algebra> make_algebra(const std::shared_ptr<const RatFuncField>& k, const KPoly& f,
                                                   std::string gen = "theta") {
  return std::make_shared<const Algebra>(k, f.monic(), std::move(gen));
}

/// N(z) = Res_x(f, z(x)) for monic f.
inline RatFunc norm(const Algebra& A, const AlgebraElem& z) {
  return resultant(A.modulus(), A.to_poly(z));
}

// ---------------------------------------------------------------------------
// Rational roots.

namespace detail {

/// All monic divisors of a nonzero polynomial.
inline std::vector<FpPoly> monic_divisors(const FpPoly& f) {
  std::vector<FpPoly> out{FpPoly::one(f.field_ptr())};
  if (f.degree() < 1) return out;
  for (const auto& [g, m] : factor(f).factors) {
    std::vector<FpPoly> next;
    for (const auto& d : out) {
      FpPoly cur = d;
      for (int i = 0; i <= m; ++i) {
        next.push_back(cur);
        cur *= g;
      }
    }
    out = std::move(next);
  }
  return out;
}

inline FpPoly lcm(const FpPoly& a, const FpPoly& b) { return exact_div(a * b, gcd(a, b)).monic(); }

}  // namespace detail

/// True iff f (coefficients in F_p(t)) has a root in F_p(t). Candidate roots
/// u/w of the primitive model satisfy u | a_0 and w | a_n up to F_p^x.
inline bool has_rational_root(const RatFuncField& k, const KPoly& f) {
  const int n = f.degree();
  if (n < 1) throw std::invalid_argument("has_rational_root: constant polynomial");
  if (k.is_zero(f.coeffs()[0])) return true;
  const auto& fp = k.prime_field_ptr();
  FpPoly L = FpPoly::one(fp);
  for (const auto& c : f.coeffs()) L = detail::lcm(L, c.den);
  std::vector<FpPoly> a;
  for (const auto& c : f.coeffs()) a.push_back(exact_div(c.num * L, c.den));
  const auto us = detail::monic_divisors(a.front());
  const auto ws = detail::monic_divisors(a.back());
  const PrimeField& F = *fp;
  for (const auto& w : ws) {
    std::vector<FpPoly> wp{FpPoly::one(fp)};
    for (int i = 0; i < n; ++i) wp.push_back(wp.back() * w);
    for (const auto& u0 : us) {
      if (gcd(u0, w).degree() > 0) continue;
      for (std::uint32_t s = 1; s < F.characteristic(); ++s) {
        FpPoly u = u0.scale(F.from_int(s));
        FpPoly acc(fp), up = FpPoly::one(fp);
        for (int i = 0; i <= n; ++i) {
          acc += a[i] * up * wp[n - i];
          up *= u;
        }
        if (acc.is_zero()) return true;
      }
    }
  }
  return false;
}

inline bool cubic_is_irreducible(const RatFuncField& k, const KPoly& f) {
  if (f.degree() != 3) throw std::invalid_argument("cubic_is_irreducible: degree must be 3");
  return !has_rational_root(k, f);
}

// ---------------------------------------------------------------------------
// Local square classes.

struct LocalComponent {
  int degree = 1;
  int e = 1;
  int f = 1;
  LocalSquareVerdict verdict;
};

struct LocalAlgebraReport {
  Place place = Place::infinity();
  std::vector<LocalComponent> components;
  bool square = true;
  bool fast_path = false;
  int precision = 0;
};

/// Residue of a nu-integral element (zero when v > 0).
inline std::optional<GF::Elem> reduce_integral(const GF& R, const RatFunc& x, const Place& nu) {
  if (x.num.is_zero()) return R.zero();
  const int v = valuation(x, nu);
  if (v < 0) return std::nullopt;
  if (v > 0) return R.zero();
  return unit_residue(R, x, nu);
}

/// Tests z in (k_nu (x) k[x]/f)^{x2}. At places of good reduction for (f, z)
/// the verdict comes from residues modulo each irreducible factor of f mod nu;
/// elsewhere f is factored over k_nu.
class LocalSquareTester {
 public:
  LocalSquareTester(std::shared_ptr<const Algebra> A, AlgebraElem z) : A_(std::move(A)), z_(std::move(z)) {
    if (A_->is_zero(z_)) throw std::domain_error("local square test of zero");
    if (A_->degree() >= 2) disc_ = discriminant(A_->modulus());
    norm_ = norm(*A_, z_);
  }

  const RatFunc& norm_value() const { return norm_; }

  bool is_square_at(const Place& nu) const { return report(nu).square; }

  LocalAlgebraReport report(const Place& nu) const {
    if (auto r = fast(nu)) return *r;
    return full(nu);
  }

  /// Full route regardless of reduction type.
  LocalAlgebraReport full(const Place& nu) const {
    const KPoly& f = A_->modulus();
    const int dv = f.degree() >= 2 ? integral_disc_valuation(f, nu) : 0;
    int vz = 0;
    for (const auto& c : z_)
      if (!c.num.is_zero()) vz = std::max(vz, std::abs(valuation(c, nu)));
    const int start = default_local_precision(dv) + 2 * vz;
    return with_precision_retry(start, [&](int prec) {
      auto K = std::make_shared<const LocalField>(A_->base_ptr(), nu, prec);
      LocalAlgebraReport rep;
      rep.place = nu;
      rep.precision = prec;
      std::vector<LaurentSeries> wc;
      for (const auto& c : z_) wc.push_back(K->complete(c));
      LocalPoly w(K, std::move(wc));
      for (const auto& g : hensel_factor(K, f)) {
        LocalComponent comp{g.degree(), g.e, g.f, ext_square_class(g, w)};
        rep.square = rep.square && comp.verdict.square;
        rep.components.push_back(std::move(comp));
      }
      return rep;
    });
  }

  /// Residue route; empty when (f, z) does not have good reduction at nu.
  std::optional<LocalAlgebraReport> fast(const Place& nu) const {
    const KPoly& f = A_->modulus();
    if (f.degree() >= 2 && valuation(disc_, nu) != 0) return std::nullopt;
    if (valuation(norm_, nu) != 0) return std::nullopt;
    auto R = residue_field(A_->base().prime_field_ptr(), nu);
    std::vector<GF::Elem> fc, zc;
    for (const auto& c : f.coeffs()) {
      auto r = reduce_integral(*R, c, nu);
      if (!r) return std::nullopt;
      fc.push_back(*r);
    }
    for (const auto& c : z_) {
      auto r = reduce_integral(*R, c, nu);
      if (!r) return std::nullopt;
      zc.push_back(*r);
    }
    ResiduePoly fb(R, std::move(fc)), zb(R, std::move(zc));
    LocalAlgebraReport rep;
    rep.place = nu;
    rep.fast_path = true;
    for (const auto& [g, m] : factor(fb).factors) {
      ResiduePoly zr = zb % g;
      GF::Elem n = resultant(g, zr);
      LocalComponent comp;
      comp.degree = comp.f = g.degree();
      comp.verdict.valuation = 0;
      comp.verdict.residue = zr.to_string("x");
      comp.verdict.square = is_square(*R, n);
      rep.square = rep.square && comp.verdict.square;
      rep.components.push_back(std::move(comp));
    }
    return rep;
  }

 private:
  std::shared_ptr<const Algebra> A_;
  AlgebraElem z_;
  RatFunc disc_;
  RatFunc norm_;
};

inline bool local_square_in_algebra(const std::shared_ptr<const Algebra>& A, const AlgebraElem& z, const Place& nu) {
  return LocalSquareTester(A, z).is_square_at(nu);
}

// ---------------------------------------------------------------------------
// Comparing square classes.

struct ModSquaresVerdict {
  bool equal_likely = true;
  std::optional<Place> witness;
  std::string reason;
};

/// A place at which the nonzero x is not a local square, if x is not a global square.
inline std::optional<Place> nonsquare_witness(const RatFuncField& k, const RatFunc& x) {
  if (is_global_square(k, x)) return std::nullopt;
  FpPoly s = squarefree_part(x.num * x.den);
  if (s.degree() >= 1) return places_dividing(s).front();
  return Place::infinity();
}

/// Finite places of degree <= max_degree where f is integral with unit discriminant.
inline std::vector<Place> default_sample_places(const Algebra& A, int max_degree = 3) {
  const KPoly& f = A.modulus();
  RatFunc disc = f.degree() >= 2 ? discriminant(f) : A.base().one();
  std::vector<Place> out;
  for (auto& nu : places_up_to_degree(A.base().prime_field_ptr(), max_degree)) {
    bool ok = valuation(disc, nu) == 0;
    for (const auto& c : f.coeffs())
      if (ok && !c.num.is_zero() && valuation(c, nu) < 0) ok = false;
    if (ok) out.push_back(std::move(nu));
  }
  return out;
}

/// One-sided comparison of z1, z2 modulo squares: a "not equal" verdict is
/// exact (with a witness place), "equal" means no sample place refuted it.
inline ModSquaresVerdict mod_squares_equal(const std::shared_ptr<const Algebra>& A, const AlgebraElem& z1,
                                           const AlgebraElem& z2, const std::vector<Place>& places) {
  AlgebraElem r = A->div(z1, z2);
  LocalSquareTester T(A, r);
  ModSquaresVerdict v;
  if (auto w = nonsquare_witness(A->base(), T.norm_value())) {
    v.equal_likely = false;
    v.witness = w;
    v.reason = "norm of the quotient is not a square";
    return v;
  }
  for (const auto& nu : places) {
    if (!T.is_square_at(nu)) {
      v.equal_likely = false;
      v.witness = nu;
      v.reason = "quotient is not a local square";
      return v;
    }
  }
  return v;
}

inline ModSquaresVerdict mod_squares_equal(const std::shared_ptr<const Algebra>& A, const AlgebraElem& z1,
                                           const AlgebraElem& z2) {
  return mod_squares_equal(A, z1, z2, default_sample_places(*A));
}

}  // namespace dp4
