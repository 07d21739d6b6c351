#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/factor.hpp"
#include "dp4/funcfield.hpp"
#include "dp4/laurent.hpp"

// Factorization of low-degree polynomials over a completion k_nu and square
// tests in the resulting local fields k_nu[x]/g.

namespace dp4 {

using ResiduePoly = Poly<GF>;

/// A monic irreducible factor of f over k_nu with ramification index e and
/// residue degree f (e*f = deg).
struct LocalFactor {
  LocalPoly poly;
  int e = 1;
  int f = 1;
  int degree() const { return poly.degree(); }
};

/// max(2 v(disc) + 8, 16).
inline int default_local_precision(int disc_valuation) {
  return std::max(2 * std::max(disc_valuation, 0) + 8, 16);
}

namespace detail {

inline LocalPoly lift_poly(const std::shared_ptr<const LocalField>& K, const ResiduePoly& g) {
  std::vector<LaurentSeries> c;
  for (const auto& a : g.coeffs()) c.push_back(K->constant(a));
  return LocalPoly(K, std::move(c));
}

/// Reduction of an integral polynomial modulo pi.
inline ResiduePoly reduce_poly(const LocalField& K, const LocalPoly& F) {
  std::vector<GF::Elem> c;
  for (int i = 0; i <= F.degree(); ++i) c.push_back(K.reduce(F.coeffs()[i]));
  return ResiduePoly(K.residue_ptr(), std::move(c));
}

/// Digit k of every coefficient.
inline ResiduePoly digit_poly(const LocalField& K, const LocalPoly& F, int k) {
  std::vector<GF::Elem> c;
  for (int i = 0; i <= F.degree(); ++i) c.push_back(K.digit(F.coeffs()[i], k));
  return ResiduePoly(K.residue_ptr(), std::move(c));
}

/// Multiplies coefficient i by pi^{a*i + b}.
inline LocalPoly rescale(const LocalField& K, const LocalPoly& F, int a, int b) {
  std::vector<LaurentSeries> c;
  for (int i = 0; i <= F.degree(); ++i) c.push_back(K.shift(F.coeffs()[i], a * i + b));
  return LocalPoly(F.field_ptr(), std::move(c));
}

inline int min_coeff_valuation(const LocalField& K, const LocalPoly& F) {
  int m = kInfiniteValuation;
  for (const auto& c : F.coeffs())
    if (!c.is_exact_zero()) m = std::min(m, K.valuation(c));
  return m;
}

/// Lifts F = G*H from the coprime residue factorization Fbar = g*h (g, h monic).
inline std::pair<LocalPoly, LocalPoly> hensel_lift_pair(const LocalPoly& F, const ResiduePoly& g,
                                                        const ResiduePoly& h) {
  const auto& Kp = F.field_ptr();
  const LocalField& K = *Kp;
  auto [one, s, t] = xgcd(g, h);
  if (one.degree() != 0) throw std::logic_error("hensel: residue factors are not coprime");
  LocalPoly G = lift_poly(Kp, g), H = lift_poly(Kp, h);
  for (int k = 1; k < K.precision(); ++k) {
    LocalPoly E = F - G * H;
    ResiduePoly e = digit_poly(K, E, k);
    if (e.is_zero()) continue;
    ResiduePoly hk = (s * e) % h, gk = (t * e) % g;
    G += detail::rescale(K, lift_poly(Kp, gk), 0, k);
    H += detail::rescale(K, lift_poly(Kp, hk), 0, k);
  }
  return {G, H};
}

inline LaurentSeries newton_root(const LocalField& K, const LocalPoly& P, LaurentSeries r) {
  const LocalPoly dP = P.derivative();
  for (int it = 0; (1 << it) <= 2 * K.precision() + 4; ++it) {
    LaurentSeries num = P.eval(r);
    if (num.known_zero()) break;
    r = K.sub(r, K.div(num, dP.eval(r)));
  }
  return r;
}

/// All roots in O_nu of a nonzero integral polynomial (residue-tree search).
inline void integral_roots_rec(const LocalPoly& P, int depth, std::vector<LaurentSeries>& out) {
  const auto& Kp = P.field_ptr();
  const LocalField& K = *Kp;
  if (depth > 4 * K.precision()) throw precision_exhausted("root search did not separate roots");
  const int m = min_coeff_valuation(K, P);
  if (m == kInfiniteValuation) throw precision_exhausted("root search on a zero polynomial");
  LocalPoly Q = rescale(K, P, 0, -m);
  ResiduePoly Qb = reduce_poly(K, Q);
  if (Qb.degree() < 1) return;
  ResiduePoly dQb = Qb.derivative();
  const GF& R = K.residue();
  for (const auto& r : roots(Qb)) {
    if (!R.is_zero(dQb.eval(r))) {
      out.push_back(newton_root(K, Q, K.constant(r)));
      continue;
    }
    // P(r + pi z)
    LocalPoly sub(Kp, {K.constant(r), K.pi_pow(1)});
    std::vector<LaurentSeries> deeper;
    integral_roots_rec(Q.compose(sub), depth + 1, deeper);
    for (auto& z : deeper) out.push_back(K.add(K.constant(r), K.shift(z, 1)));
  }
}

inline LocalPoly linear_factor(const std::shared_ptr<const LocalField>& K, const LaurentSeries& root) {
  return LocalPoly(K, {K->neg(root), K->one()});
}

/// Degree-2 integral piece whose reduction is a square of a linear polynomial.
inline void quadratic_piece(const LocalPoly& H, std::vector<LocalFactor>& out) {
  const auto& Kp = H.field_ptr();
  const LocalField& K = *Kp;
  const auto half = K.from_int(2);
  LaurentSeries B = H.coeff(1), C = H.coeff(0);
  LaurentSeries hb = K.div(B, half);
  LaurentSeries delta = K.sub(K.mul(hb, hb), C);
  const int v = K.valuation(delta);
  if (v == kInfiniteValuation) throw std::domain_error("hensel: polynomial is not squarefree");
  if (v & 1) {
    out.push_back({H, 2, 1});
    return;
  }
  if (!is_square(K.residue(), K.leading(delta))) {
    out.push_back({H, 1, 2});
    return;
  }
  LaurentSeries sq = *sqrt_local(K, delta);
  out.push_back({linear_factor(Kp, K.add(K.neg(hb), sq)), 1, 1});
  out.push_back({linear_factor(Kp, K.sub(K.neg(hb), sq)), 1, 1});
}

/// Ramification of an irreducible integral cubic whose reduction is a cube.
inline LocalFactor classify_cubic(LocalPoly H) {
  const auto& Kp = H.field_ptr();
  const LocalField& K = *Kp;
  LocalPoly original = H;
  for (int guard = 0; guard < 4 * K.precision(); ++guard) {
    ResiduePoly Hb = reduce_poly(K, H);
    auto fac = factor(Hb);
    if (fac.factors.size() == 1 && fac.factors[0].second == 1) return {original, 1, 3};
    if (fac.factors.size() != 1 || fac.factors[0].first.degree() != 1)
      throw precision_exhausted("cubic classified as irreducible has a split reduction");
    const GF::Elem r = K.residue().neg(fac.factors[0].first.coeffs()[0]);
    LocalPoly G = H.compose(LocalPoly(Kp, {K.constant(r), K.one()}));
    const int v0 = K.valuation(G.coeff(0));
    if (v0 % 3 != 0) {
      if (K.characteristic() == 3) throw wild_ramification("totally ramified cubic in characteristic 3");
      return {original, 3, 1};
    }
    H = rescale(K, G, v0 / 3, -v0);
  }
  throw precision_exhausted("cubic classification did not terminate");
}

inline void cubic_piece(const LocalPoly& H, std::vector<LocalFactor>& out) {
  const auto& Kp = H.field_ptr();
  std::vector<LaurentSeries> rs;
  integral_roots_rec(H, 0, rs);
  if (rs.empty()) {
    out.push_back(classify_cubic(H));
    return;
  }
  LocalPoly lin = linear_factor(Kp, rs[0]);
  out.push_back({lin, 1, 1});
  quadratic_piece(H / lin, out);
}

inline bool factor_less(const LocalField& K, const LocalFactor& a, const LocalFactor& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = 0; i <= a.degree(); ++i) {
    int c = K.compare(a.poly.coeffs()[i], b.poly.coeffs()[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

}  // namespace detail

/// Shift s >= 0 such that y = pi^s x turns monic f into an integral monic polynomial.
inline int integral_shift(const KPoly& f, const Place& nu) {
  const int n = f.degree();
  int s = 0;
  for (int i = 0; i < n; ++i) {
    const auto& c = f.coeffs()[i];
    if (c.num.is_zero()) continue;
    const int v = valuation(c, nu);
    if (v < 0) s = std::max(s, (-v + (n - i) - 1) / (n - i));
  }
  return s;
}

/// Valuation at nu of the discriminant of the integral model of monic f.
inline int integral_disc_valuation(const KPoly& f, const Place& nu) {
  const int n = f.degree();
  if (n < 2) return 0;
  return valuation(discriminant(f), nu) + integral_shift(f, nu) * n * (n - 1);
}

/// Factors a monic squarefree f in k[x] over k_nu. Repeated residue factors are
/// supported when they are powers of linear polynomials of multiplicity <= 3.
inline std::vector<LocalFactor> hensel_factor(const std::shared_ptr<const LocalField>& Kp, const KPoly& f) {
  const LocalField& K = *Kp;
  if (f.degree() < 1) throw std::invalid_argument("hensel_factor: constant polynomial");
  KPoly fm = f.monic();
  const int n = fm.degree();
  const int s = integral_shift(fm, K.place());
  std::vector<LaurentSeries> C;
  for (int i = 0; i <= n; ++i) C.push_back(K.shift(K.complete(fm.coeffs()[i]), s * (n - i)));
  LocalPoly F(Kp, std::move(C));

  auto fac = factor(detail::reduce_poly(K, F));
  std::vector<ResiduePoly> pieces;
  for (const auto& [g, m] : fac.factors) {
    ResiduePoly h = ResiduePoly::one(K.residue_ptr());
    for (int i = 0; i < m; ++i) h *= g;
    pieces.push_back(h);
  }
  std::vector<LocalPoly> lifted;
  LocalPoly rest = F;
  for (std::size_t j = 0; j + 1 < pieces.size(); ++j) {
    ResiduePoly others = ResiduePoly::one(K.residue_ptr());
    for (std::size_t l = j + 1; l < pieces.size(); ++l) others *= pieces[l];
    auto [G, H] = detail::hensel_lift_pair(rest, pieces[j], others);
    lifted.push_back(G);
    rest = H;
  }
  lifted.push_back(rest);

  std::vector<LocalFactor> integral;
  for (std::size_t j = 0; j < lifted.size(); ++j) {
    const int dg = fac.factors[j].first.degree(), m = fac.factors[j].second;
    if (m == 1)
      integral.push_back({lifted[j], 1, dg});
    else if (dg == 1 && m == 2)
      detail::quadratic_piece(lifted[j], integral);
    else if (dg == 1 && m == 3)
      detail::cubic_piece(lifted[j], integral);
    else
      throw std::invalid_argument("hensel_factor: unsupported repeated residue factor of degree " +
                                  std::to_string(dg * m));
  }
  std::vector<LocalFactor> out;
  for (auto& lf : integral) {
    const int r = lf.degree();
    out.push_back({detail::rescale(K, lf.poly, s, -s * r), lf.e, lf.f});
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return detail::factor_less(K, a, b); });
  return out;
}

// ---------------------------------------------------------------------------
// Squares in k_nu[x]/g.

struct LocalSquareVerdict {
  bool square = false;
  int valuation = 0;     // normalized valuation in L
  std::string residue;   // residue of w / pi_L^{valuation}
};

namespace detail {

/// v(x), or a lower bound when x is zero to precision (flagged by `known`).
struct ValBound {
  int v;
  bool known;
};
inline ValBound val_bound(const LocalField& K, const LaurentSeries& x) {
  if (x.is_exact_zero()) return {kInfiniteValuation, true};
  if (x.known_zero()) return {x.abs, false};
  return {K.valuation(x), true};
}

inline LaurentSeries det3(const LocalField& K, const std::vector<std::vector<LaurentSeries>>& m) {
  auto t = [&](int a, int b, int c) { return K.mul(m[0][a], K.mul(m[1][b], m[2][c])); };
  LaurentSeries r = K.add(K.add(t(0, 1, 2), t(1, 2, 0)), t(2, 0, 1));
  return K.sub(r, K.add(K.add(t(2, 1, 0), t(0, 2, 1)), t(1, 0, 2)));
}

}  // namespace detail

/// N_{L/k_nu}(w) for L = k_nu[x]/g, as the determinant of multiplication by w.
inline LaurentSeries local_norm(const LocalPoly& g, const LocalPoly& w) {
  const LocalField& K = g.field();
  const int n = g.degree();
  std::vector<std::vector<LaurentSeries>> m(n, std::vector<LaurentSeries>(n, K.zero()));
  LocalPoly col = w % g;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m[i][j] = col.coeff(i);
    col = col.shift(1) % g;
  }
  if (n == 1) return m[0][0];
  if (n == 2) return K.sub(K.mul(m[0][0], m[1][1]), K.mul(m[0][1], m[1][0]));
  if (n == 3) return detail::det3(K, m);
  throw std::invalid_argument("local_norm: degree > 3 unsupported");
}

inline LocalSquareVerdict ext_square_class(const LocalFactor& g, const LocalPoly& w_in) {
  const LocalField& K = g.poly.field();
  const GF& R = K.residue();
  LocalPoly w = w_in % g.poly;
  if (w.is_zero()) throw precision_exhausted("element vanishes to precision in local factor");
  LocalSquareVerdict out;
  if (g.degree() == 1) {
    LaurentSeries val = w.eval(K.neg(g.poly.coeff(0)));
    out.valuation = K.valuation(val);
    if (out.valuation == kInfiniteValuation) throw std::domain_error("ext_is_square of zero");
    GF::Elem r = K.leading(val);
    out.residue = R.to_string(r);
    out.square = !(out.valuation & 1) && is_square(R, r);
    return out;
  }
  if (g.degree() == 3) {
    LaurentSeries N = local_norm(g.poly, w);
    const int vN = K.valuation(N);
    if (vN == kInfiniteValuation) throw std::domain_error("ext_is_square of zero");
    out.valuation = vN * g.e / 3;
    GF::Elem r = K.leading(N);
    out.residue = R.to_string(r);
    out.square = !(vN & 1) && is_square(R, r);
    return out;
  }
  if (g.degree() != 2) throw std::invalid_argument("ext_is_square: degree > 3 unsupported");

  // w = A + B*eta with eta = x + b/2, eta^2 = D
  const LaurentSeries b = g.poly.coeff(1), c = g.poly.coeff(0);
  const LaurentSeries hb = K.div(b, K.from_int(2));
  const LaurentSeries D = K.sub(K.mul(hb, hb), c);
  const LaurentSeries A = K.sub(w.coeff(0), K.mul(w.coeff(1), hb));
  const LaurentSeries B = w.coeff(1);
  const int vD = K.valuation(D);
  const GF::Elem u = K.leading(D);
  auto va = detail::val_bound(K, A);
  if (vD & 1) {
    // pi_L = eta / pi^k, pi_L^2 = pi * (D / pi^vD)
    const int k = (vD - 1) / 2;
    auto vb = detail::val_bound(K, B);
    const long la = va.v == kInfiniteValuation ? long(kInfiniteValuation) : 2L * va.v;
    const long lb = vb.v == kInfiniteValuation ? long(kInfiniteValuation) : 2L * (vb.v + k) + 1;
    if ((!va.known && la >= lb) || (!vb.known && lb >= la) || (!va.known && !vb.known))
      throw precision_exhausted("cannot separate valuations in ramified quadratic");
    if (la < lb) {
      out.valuation = int(la);
      const GF::Elem ui = va.v >= 0 ? R.inv(u) : u;
      GF::Elem r = R.mul(K.leading(A), R.pow(ui, u128(va.v >= 0 ? va.v : -va.v)));
      out.residue = R.to_string(r);
      out.square = is_square(R, r);
    } else {
      out.valuation = int(lb);
      out.residue = R.to_string(K.leading(B));
      out.square = false;
    }
    return out;
  }
  if (is_square(R, u)) throw std::logic_error("ext_is_square: quadratic factor splits over k_nu");
  // unramified: eta' = eta / pi^{vD/2}, eta'^2 = unit with nonsquare residue u
  const LaurentSeries Bp = K.shift(B, vD / 2);
  auto vb = detail::val_bound(K, Bp);
  if (!va.known && !vb.known) throw precision_exhausted("element vanishes to precision");
  const int m = std::min(va.v, vb.v);
  if ((!va.known && va.v <= m) || (!vb.known && vb.v <= m))
    throw precision_exhausted("cannot determine valuation in unramified quadratic");
  out.valuation = m;
  GF::Elem a0 = va.v == m ? K.leading(A) : R.zero();
  GF::Elem b0 = vb.v == m ? K.leading(Bp) : R.zero();
  auto wrap = [&](const GF::Elem& x) { return R.is_compound(x) ? "(" + R.to_string(x) + ")" : R.to_string(x); };
  out.residue = wrap(a0) + "+" + wrap(b0) + "*s";
  GF::Elem nrm = R.sub(R.mul(a0, a0), R.mul(R.mul(b0, b0), u));
  out.square = !(m & 1) && is_square(R, nrm);
  return out;
}

inline bool ext_is_square(const LocalFactor& g, const LocalPoly& w) { return ext_square_class(g, w).square; }

}  // namespace dp4
