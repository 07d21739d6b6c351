#pragma once

#include <string>
#include <vector>

#include "dp4/etale.hpp"
#include "dp4/family.hpp"
#include "dp4/quadform.hpp"

// Identities for the generic pencil
//   M0   = diag(d, -dt) + [[a2, a3, 0], [a3, 0, a4], [0, a4, 0]]
//   Minf = [[0, -d], [-d, 0]] + [[b1, 0, b3], [0, b2, 0], [b3, 0, b4]]
// from which both families are specializations.

namespace dp4 {

struct DesignParams {
  RatFunc a2, a3, a4, b1, b2, b3, b4, d;
};

struct DesignSample {
  RatFunc B;
  std::vector<RatFunc> pivots;    // diagonalization of the rank-3 part of B Q0 + Qinf
  std::vector<RatFunc> betas;     // displayed beta_1, beta_2, beta_3
  bool pivots_match = false;      // pivots == betas exactly
  Sign conic = Sign::Plus;        // conic symbol of the pivots at t
  Sign displayed = Sign::Plus;    // (-b1 b2, -b1 b4 + b3^2)_t
};

struct DesignReport {
  KPoly f3;                 // monic cubic factor of the charpoly
  KPoly f3_displayed;       // displayed coefficient formulas
  bool charpoly_matches = false;
  bool x_coefficient_is_t = false;
  bool eps2_displayed = false;   // eps2 ~ d f3(sqrt(-t))
  bool eps2_scaled = false;      // eps2 ~ d b2 (b1 b4 - b3^2) f3(sqrt(-t))
  std::vector<DesignSample> samples;
};

inline DesignParams specialization(const RatFuncField& k, std::uint32_t alpha, const RatFunc& d) {
  const RatFunc t = k.t(), a = k.from_int(alpha);
  DesignParams P;
  P.a2 = k.add(k.powi(t, 2), k.powi(t, 3));
  P.a3 = k.mul(a, t);
  P.a4 = k.powi(t, 2);
  P.b1 = k.div(a, t);
  P.b2 = k.powi(t, 2);
  P.b3 = a;
  P.b4 = k.div(k.mul(k.sub(k.mul(k.from_int(3), a), k.one()), t), k.add(a, k.one()));
  P.d = d;
  return P;
}

inline std::pair<KMatrix, KMatrix> design_matrices(const RatFuncField& k, const DesignParams& P) {
  KMatrix M0 = zero_matrix(k, 5, 5), Mi = zero_matrix(k, 5, 5);
  M0[0][0] = P.d;
  M0[1][1] = k.neg(k.mul(P.d, k.t()));
  M0[2][2] = P.a2;
  M0[2][3] = M0[3][2] = P.a3;
  M0[3][4] = M0[4][3] = P.a4;
  Mi[0][1] = Mi[1][0] = k.neg(P.d);
  Mi[2][2] = P.b1;
  Mi[2][4] = Mi[4][2] = P.b3;
  Mi[3][3] = P.b2;
  Mi[4][4] = P.b4;
  return {M0, Mi};
}

inline KPoly displayed_design_cubic(const std::shared_ptr<const RatFuncField>& kp, const DesignParams& P) {
  const RatFuncField& k = *kp;
  const RatFunc e = k.sub(k.mul(P.b1, P.b4), k.powi(P.b3, 2));  // b1 b4 - b3^2
  const RatFunc den = k.mul(P.b2, e);                            // b1 b2 b4 - b2 b3^2
  const RatFunc x2 = k.div(k.mul(P.a2, P.b4), e);
  RatFunc x1 = k.neg(k.mul(k.powi(P.a3, 2), P.b4));
  x1 = k.add(x1, k.mul(k.from_int(2), k.mul(k.mul(P.a3, P.a4), P.b3)));
  x1 = k.sub(x1, k.mul(k.powi(P.a4, 2), P.b1));
  x1 = k.div(x1, den);
  const RatFunc x0 = k.neg(k.div(k.mul(P.a2, k.powi(P.a4, 2)), den));
  return KPoly(kp, {x0, x1, x2, k.one()});
}

inline std::vector<RatFunc> displayed_betas(const RatFuncField& k, const DesignParams& P, const RatFunc& B) {
  auto m = [&](std::initializer_list<RatFunc> xs) {
    RatFunc r = k.one();
    for (const auto& x : xs) r = k.mul(r, x);
    return r;
  };
  const RatFunc B2 = k.powi(B, 2), B3 = k.powi(B, 3);
  const RatFunc beta1 = k.add(k.mul(B, P.a2), P.b1);
  const RatFunc num2 = k.add(k.add(k.neg(m({B2, P.a3, P.a3})), m({B, P.a2, P.b2})), m({P.b1, P.b2}));
  const RatFunc beta2 = k.div(num2, beta1);
  RatFunc num3 = m({B3, P.a2, P.a4, P.a4});
  num3 = k.add(num3, m({B2, P.a3, P.a3, P.b4}));
  num3 = k.sub(num3, m({k.from_int(2), B2, P.a3, P.a4, P.b3}));
  num3 = k.add(num3, m({B2, P.a4, P.a4, P.b1}));
  num3 = k.sub(num3, m({B, P.a2, P.b2, P.b4}));
  num3 = k.sub(num3, m({P.b1, P.b2, P.b4}));
  num3 = k.add(num3, m({P.b2, P.b3, P.b3}));
  const RatFunc den3 = k.sub(k.sub(m({B2, P.a3, P.a3}), m({B, P.a2, P.b2})), m({P.b1, P.b2}));
  return {beta1, beta2, k.div(num3, den3)};
}

/// Errors: degenerate_pencil when the charpoly is not separable of degree 5,
/// std::domain_error when b1 b4 = b3^2 or b2 = 0.
inline DesignReport generic_design_check(const std::shared_ptr<const RatFuncField>& kp, const DesignParams& P,
                                         const std::vector<RatFunc>& Bs) {
  const RatFuncField& k = *kp;
  if (k.is_zero(P.b2) || k.equal(k.mul(P.b1, P.b4), k.powi(P.b3, 2)))
    throw std::domain_error("degenerate design: b2 (b1 b4 - b3^2) = 0");
  auto [M0, Mi] = design_matrices(k, P);
  Pencil pen = Pencil::make(kp, M0, Mi);
  DesignReport rep;
  KPoly q = quadratic_factor(kp);
  auto [f3, r] = divmod(pen.f, q);
  rep.f3 = f3.monic();
  rep.f3_displayed = displayed_design_cubic(kp, P);
  rep.charpoly_matches = r.is_zero() && rep.f3 == rep.f3_displayed;
  rep.x_coefficient_is_t = k.equal(rep.f3_displayed.coeff(1), k.t());

  EpsilonInvariant e2 = epsilon_invariant(pen, q);
  const Algebra& K2 = *e2.field;
  AlgebraElem f3s = K2.zero();
  for (int i = rep.f3.degree(); i >= 0; --i)
    f3s = K2.add(K2.mul(f3s, K2.generator()), K2.from_base(rep.f3.coeff(i)));
  AlgebraElem z = K2.mul(K2.from_base(P.d), f3s);
  rep.eps2_displayed = mod_squares_equal(e2.field, e2.value, z).equal_likely;
  const RatFunc scale = k.mul(P.b2, k.sub(k.mul(P.b1, P.b4), k.powi(P.b3, 2)));
  rep.eps2_scaled = mod_squares_equal(e2.field, e2.value, K2.mul(K2.from_base(scale), z)).equal_likely;

  const Place pt = Place::finite(k.poly_t());
  for (const auto& B : Bs) {
    DesignSample s;
    s.B = B;
    KMatrix M = lincomb(k, B, M0, k.one(), Mi);
    auto D = diagonalize(k, submatrix<RatFuncField>(M, {2, 3, 4}));
    if (D.rank != 3) throw std::domain_error("rank-3 part is degenerate at B = " + k.to_string(B));
    s.pivots = D.diag;
    s.betas = displayed_betas(k, P, B);
    s.pivots_match = true;
    for (int i = 0; i < 3; ++i) s.pivots_match = s.pivots_match && k.equal(s.pivots[i], s.betas[i]);
    s.conic = conic_symbol(k, s.pivots[0], s.pivots[1], s.pivots[2], pt);
    s.displayed = hilbert(k, k.neg(k.mul(P.b1, P.b2)), k.add(k.neg(k.mul(P.b1, P.b4)), k.powi(P.b3, 2)), pt);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

}  // namespace dp4
