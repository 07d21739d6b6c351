#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dp4/etale.hpp"
#include "dp4/ff.hpp"
#include "dp4/funcfield.hpp"
#include "dp4/quadform.hpp"

// The two pencil families over F_p(t): the alpha-family for p > 3 and the
// fixed family for p = 3, with their closed-form invariants.

namespace dp4 {

enum class Variant { PGt3, PEq3 };

inline std::string to_string(Variant v) { return v == Variant::PGt3 ? "p-gt-3" : "p-eq-3"; }

inline Variant variant_for(std::uint32_t p) { return p == 3 ? Variant::PEq3 : Variant::PGt3; }

class closed_form_mismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Choice of alpha.

struct AlphaReport {
  std::uint32_t p = 0;
  std::uint32_t alpha = 0;
  bool nonsquare = false;        // alpha not in F_p^x2
  bool plus_one_square = false;  // alpha + 1 in F_p^x2
  bool three_minus_nonzero = false;
  bool three_minus_nonsquare = false;  // 3 alpha - 1 not in F_p^x2
  bool fallback = false;               // only the first three conditions hold

  bool first_three() const { return nonsquare && plus_one_square && three_minus_nonzero; }
  bool all_four() const { return first_three() && three_minus_nonsquare; }
};

namespace detail {

inline void require_alpha_prime(std::uint32_t p) {
  PrimeField::make(p);
  if (p == 3) throw std::invalid_argument("the alpha family requires p > 3");
}

/// 1 for a nonzero square, -1 for a nonsquare, 0 for zero.
inline int legendre_fp(std::uint32_t p, std::int64_t a) {
  auto F = PrimeField::make(p);
  return quadratic_character(*F, F->from_int(a));
}

}  // namespace detail

inline AlphaReport alpha_conditions(std::uint32_t p, std::uint32_t a) {
  detail::require_alpha_prime(p);
  AlphaReport r;
  r.p = p;
  r.alpha = a % p;
  r.nonsquare = detail::legendre_fp(p, a) == -1;
  r.plus_one_square = detail::legendre_fp(p, std::int64_t(a) + 1) == 1;
  r.three_minus_nonzero = detail::legendre_fp(p, 3 * std::int64_t(a) - 1) != 0;
  r.three_minus_nonsquare = detail::legendre_fp(p, 3 * std::int64_t(a) - 1) == -1;
  r.fallback = !r.all_four();
  return r;
}

struct AlphaCount {
  std::uint64_t N = 0;
  double bound = 0;  // (p - 5 sqrt(p) - 12) / 8
};

/// N = #{x : chi(x) = -1, chi(x+1) = 1, chi(3x-1) = -1}.
inline AlphaCount count_alpha(std::uint32_t p) {
  detail::require_alpha_prime(p);
  AlphaCount c;
  for (std::uint32_t a = 1; a < p; ++a)
    if (alpha_conditions(p, a).all_four()) ++c.N;
  c.bound = (double(p) - 5.0 * std::sqrt(double(p)) - 12.0) / 8.0;
  return c;
}

// ---------------------------------------------------------------------------
// Parameters and pencils.

struct FamilyParams {
  std::shared_ptr<const RatFuncField> k;
  std::uint32_t p = 0;
  std::uint32_t alpha = 0;  // unused for p = 3
  RatFunc d;
  Variant variant = Variant::PGt3;

  RatFunc alpha_elem() const { return k->from_int(alpha); }
};

inline Pencil build_family(const FamilyParams& P) {
  const RatFuncField& k = *P.k;
  const RatFunc t = k.t(), d = P.d;
  auto R = [&](std::int64_t v) { return k.from_int(v); };
  KMatrix M0 = zero_matrix(k, 5, 5), Mi = zero_matrix(k, 5, 5);
  M0[0][0] = d;
  M0[1][1] = k.neg(k.mul(d, t));
  if (P.variant == Variant::PGt3) {
    const RatFunc a = P.alpha_elem();
    M0[2][2] = k.add(k.powi(t, 2), k.powi(t, 3));
    M0[2][3] = M0[3][2] = k.mul(a, t);
    M0[3][4] = M0[4][3] = k.powi(t, 2);
    Mi[0][1] = Mi[1][0] = k.neg(d);
    Mi[2][2] = k.div(a, t);
    Mi[3][3] = k.powi(t, 2);
    Mi[2][4] = Mi[4][2] = a;
    Mi[4][4] = k.div(k.mul(k.sub(k.mul(R(3), a), R(1)), t), k.add(a, R(1)));
  } else {
    const RatFunc half = k.inv(R(2));
    M0[2][2] = k.add(t, k.powi(t, 2));
    M0[2][3] = M0[3][2] = k.mul(t, half);
    M0[3][4] = M0[4][3] = k.neg(k.mul(t, half));
    Mi[0][1] = Mi[1][0] = k.mul(d, half);
    Mi[2][2] = R(-1);
    Mi[3][3] = t;
    Mi[2][4] = Mi[4][2] = k.neg(half);
    Mi[4][4] = R(1);
  }
  return Pencil::make(P.k, std::move(M0), std::move(Mi));
}

// ---------------------------------------------------------------------------
// Closed forms.

struct DisplayedForms {
  RatFunc c;
  KPoly f3;
  RatFunc Delta;
  RatFunc Delta_f3;
  FpPoly xi;
  RatFunc eps2;         // element of k, viewed in k[x]/(x^2+t)
  RatFunc eps3_coeff;   // eps3 = eps3_coeff * theta
  std::vector<FpPoly> omegas;  // displayed factorization of xi, for the reference primes
};

namespace detail {

inline std::vector<FpPoly> displayed_omegas(const RatFuncField& k, std::uint32_t p, std::uint32_t alpha) {
  std::vector<std::string> s;
  if (p == 3) s = {"t^2+2t+2", "t^4+2t^3+t+1"};
  if (p == 7 && alpha == 3) s = {"t^4+5t^2+2t+4", "t^10+4t^9+t^8+3t^7+5t^6+2t^5+5t^3+t^2+4t+6"};
  if (p == 11 && alpha == 8)
    s = {"t^2+2t+10", "t^6+4t^5+6t^4+9t^3+2t^2+6t+7", "t^6+9t^5+5t^4+5t^3+3t^2+2t+10"};
  std::vector<FpPoly> out;
  for (const auto& x : s) out.push_back(parse_poly(k, x));
  return out;
}

}  // namespace detail

inline DisplayedForms displayed_forms(const FamilyParams& P) {
  const RatFuncField& k = *P.k;
  const RatFunc t = k.t(), t1 = k.add(t, k.one()), d = P.d;
  auto R = [&](std::int64_t v) { return k.from_int(v); };
  auto pw = [&](const RatFunc& x, int e) { return k.powi(x, e); };
  DisplayedForms D;
  if (P.variant == Variant::PGt3) {
    const RatFunc a = P.alpha_elem(), am1 = k.sub(a, R(1)), ap1 = k.add(a, R(1));
    const RatFunc a3m1 = k.sub(k.mul(R(3), a), R(1));
    const RatFunc aam = k.mul(a, pw(am1, 2));  // alpha (alpha-1)^2
    D.c = k.div(k.mul(k.mul(pw(d, 2), aam), pw(t, 2)), ap1);
    D.f3 = KPoly(P.k, {k.div(k.mul(k.mul(pw(t, 4), t1), ap1), aam), t,
                       k.neg(k.div(k.mul(k.mul(pw(t, 3), t1), a3m1), aam)), k.one()});
    RatFunc xi = k.mul(k.mul(k.mul(pw(t, 10), ap1), pw(a3m1, 3)), pw(t1, 4));
    RatFunc mid = k.add(k.add(k.mul(R(9), pw(a, 2)), k.mul(R(12), a)), R(1));
    xi = k.sub(xi, k.mul(k.mul(k.mul(k.mul(R(2), pw(a, 2)), pw(t, 5)), k.mul(pw(am1, 4), mid)), pw(t1, 2)));
    xi = k.sub(xi, k.mul(pw(a, 4), pw(am1, 8)));
    D.xi = xi.num;
    D.Delta = k.neg(k.div(k.mul(k.mul(k.mul(k.mul(R(4096), pw(a, 4)), pw(t, 36)), pw(t1, 4)), k.mul(pw(d, 16), xi)),
                          pw(ap1, 8)));
    D.Delta_f3 = k.div(k.mul(k.mul(R(4), pw(t, 3)), xi), k.mul(pw(a, 4), pw(am1, 8)));
    D.eps2 = k.mul(k.mul(d, a), k.mul(t, t1));
    D.eps3_coeff = k.neg(k.mul(a, t1));
  } else {
    D.c = k.mul(k.mul(R(2), t), pw(d, 2));
    D.f3 = KPoly(P.k, {parse_ratfunc(k, "2t^3+2t^2"), t, parse_ratfunc(k, "t^2+t"), k.one()});
    const RatFunc w = parse_ratfunc(k, "(t^2+2t+2)*(t^4+2t^3+t+1)");
    D.xi = k.mul(R(2), w).num;
    D.Delta = k.mul(k.mul(k.mul(R(2), pw(d, 16)), k.mul(pw(t, 20), pw(t1, 4))), w);
    D.Delta_f3 = k.mul(pw(t, 3), w);
    D.eps2 = k.mul(k.mul(d, t), k.sub(t, R(1)));
    D.eps3_coeff = parse_ratfunc(k, "t^7+2t^6+2t^3+t^2+1");
  }
  D.omegas = detail::displayed_omegas(k, P.p, P.alpha);
  return D;
}

/// True iff -alpha(t+1)theta is a local square at every place dividing xi.
inline bool eps3_square_on_xi(std::uint32_t p, std::uint32_t a) {
  FamilyParams P;
  P.k = RatFuncField::make(p);
  P.p = p;
  P.alpha = a;
  P.d = P.k->one();
  DisplayedForms D = displayed_forms(P);
  auto A = make_algebra(P.k, D.f3);
  auto z = A->mul(A->from_base(D.eps3_coeff), A->generator());
  LocalSquareTester T(A, z);
  for (const auto& nu : places_dividing(D.xi))
    if (!T.is_square_at(nu)) return false;
  return true;
}

/// Smallest alpha with all four conditions. When there is none (p = 7, 11),
/// the smallest alpha with the first three for which eps3 is a local square
/// at every place dividing xi.
inline AlphaReport find_alpha(std::uint32_t p) {
  detail::require_alpha_prime(p);
  for (std::uint32_t a = 1; a < p; ++a) {
    auto r = alpha_conditions(p, a);
    if (r.all_four()) return r;
  }
  for (std::uint32_t a = 1; a < p; ++a) {
    auto r = alpha_conditions(p, a);
    if (r.first_three() && eps3_square_on_xi(p, a)) return r;
  }
  throw std::logic_error("no alpha for p = " + std::to_string(p));
}

inline FamilyParams make_params(std::uint32_t p, std::optional<std::uint32_t> alpha, const RatFunc& d,
                                std::shared_ptr<const RatFuncField> k = nullptr) {
  if (!k) k = RatFuncField::make(p);
  if (k->characteristic() != p) throw std::invalid_argument("field characteristic does not match p");
  if (k->is_zero(d)) throw std::invalid_argument("d must be nonzero");
  FamilyParams fp;
  fp.k = std::move(k);
  fp.p = p;
  fp.d = d;
  fp.variant = variant_for(p);
  if (p == 3) {
    if (alpha) throw std::invalid_argument("alpha is not used for p = 3");
    return fp;
  }
  std::uint32_t a = alpha ? *alpha % p : find_alpha(p).alpha;
  if (!alpha_conditions(p, a).first_three())
    throw std::invalid_argument("alpha = " + std::to_string(a) + " violates the alpha conditions for p = " + std::to_string(p));
  fp.alpha = a;
  return fp;
}

// ---------------------------------------------------------------------------
// Invariants.

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct InvariantsReport {
  FamilyParams params;
  Pencil pencil;
  DisplayedForms displayed;
  KPoly f;
  KPoly f3;
  RatFunc c;
  RatFunc Delta;
  RatFunc Delta_f3;
  FpPoly xi;
  std::vector<Place> xi_places;
  EpsilonInvariant eps2;
  EpsilonInvariant eps3;
  std::vector<Place> S_d;
  std::vector<CheckResult> checks;

  bool all_ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

inline FpPoly t_plus_one(const RatFuncField& k) { return k.poly_t() + k.poly_const(1); }

inline KPoly quadratic_factor(const std::shared_ptr<const RatFuncField>& k) {
  return KPoly(k, {k->t(), k->zero(), k->one()});
}

/// Places dividing numerator or denominator of a nonzero x.
inline std::vector<Place> support(const RatFunc& x) {
  std::vector<Place> out;
  if (x.num.degree() >= 1)
    for (auto& v : places_dividing(x.num)) out.push_back(v);
  if (x.den.degree() >= 1)
    for (auto& v : places_dividing(x.den)) out.push_back(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Computes f, f3, Delta, Delta_f3, xi and both epsilon invariants from the
/// pencil and compares them with the displayed closed forms. Exact forms that
/// disagree raise closed_form_mismatch; epsilon comparisons are reported.
inline InvariantsReport invariants(const FamilyParams& P) {
  const RatFuncField& k = *P.k;
  Pencil pen = build_family(P);
  DisplayedForms D = displayed_forms(P);
  KPoly q = quadratic_factor(P.k);
  auto [f3, rem] = divmod(pen.f, q);
  if (!rem.is_zero()) throw closed_form_mismatch("x^2+t does not divide the characteristic polynomial");
  const RatFunc c = f3.lead();
  f3 = f3.monic();

  std::vector<CheckResult> checks;
  auto hard = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({name, ok, detail});
    if (!ok) throw closed_form_mismatch(name + ": " + detail);
  };
  hard("f3", f3 == D.f3, "computed " + f3.to_string("x") + ", displayed " + D.f3.to_string("x"));
  hard("c", k.equal(c, D.c), "computed " + k.to_string(c) + ", displayed " + k.to_string(D.c));
  KPoly expect = (q * D.f3).scale(D.c);
  hard("f", pen.f == expect, "f = c (x^2+t) f3");
  RatFunc Delta = discriminant(pen.f);
  hard("Delta", k.equal(Delta, D.Delta), "computed " + k.to_string(Delta));
  RatFunc Df3 = discriminant(f3);
  hard("Delta_f3", k.equal(Df3, D.Delta_f3), "computed " + k.to_string(Df3));
  if (!D.omegas.empty()) {
    FpPoly prod = FpPoly::one(D.xi.field_ptr());
    for (const auto& w : D.omegas) prod *= w;
    bool ok = prod == D.xi.monic();
    for (const auto& w : D.omegas) ok = ok && is_irreducible(w);
    hard("xi factorization", ok, "xi = " + D.xi.to_string("t"));
  }

  checks.push_back({"xi squarefree", gcd(D.xi, D.xi.derivative()).degree() == 0, "xi = " + D.xi.to_string("t")});

  EpsilonInvariant e2 = epsilon_invariant(pen, q);
  EpsilonInvariant e3 = epsilon_invariant(pen, f3);
  {
    auto v = mod_squares_equal(e2.field, e2.value, e2.field->from_base(D.eps2));
    checks.push_back({"eps2 displayed form", v.equal_likely,
                      v.equal_likely ? "equal modulo squares at all sampled places"
                                     : v.reason + " at " + v.witness->to_string()});
  }
  {
    auto z = e3.field->mul(e3.field->from_base(D.eps3_coeff), e3.field->generator());
    auto v = mod_squares_equal(e3.field, e3.value, z);
    checks.push_back({"eps3 displayed form", v.equal_likely,
                      v.equal_likely ? "equal modulo squares at all sampled places"
                                     : v.reason + " at " + v.witness->to_string()});
  }
  for (auto* e : {&e2, &e3}) {
    RatFunc n = norm(*e->field, e->value);
    checks.push_back({"eps norm square (" + e->factor.to_string("x") + ")", is_global_square(k, n), k.to_string(n)});
    bool nonsq = static_cast<bool>(nonsquare_witness(k, n)) ||
                 !mod_squares_equal(e->field, e->value, e->field->one()).equal_likely;
    checks.push_back({"eps nonsquare (" + e->factor.to_string("x") + ")", nonsq, ""});
  }

  std::vector<Place> S = support(P.d);
  auto xp = places_dividing(D.xi);
  for (const auto& v : xp) S.push_back(v);
  S.push_back(Place::finite(k.poly_t()));
  S.push_back(Place::finite(t_plus_one(k)));
  S.push_back(Place::infinity());
  std::sort(S.begin(), S.end());
  S.erase(std::unique(S.begin(), S.end()), S.end());

  return InvariantsReport{P, std::move(pen), D, expect, f3, c, Delta, Df3, D.xi, xp, std::move(e2), std::move(e3),
                          std::move(S), std::move(checks)};
}

}  // namespace dp4
