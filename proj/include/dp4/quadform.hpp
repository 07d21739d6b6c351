#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/etale.hpp"
#include "dp4/funcfield.hpp"
#include "dp4/poly.hpp"

// Symmetric matrices over a field context, diagonalization by congruence,
// pencils of quadrics and their characteristic polynomial, epsilon invariants
// and the local line criterion for rank 5 forms.

namespace dp4 {

template <class F>
using Matrix = std::vector<std::vector<typename F::Elem>>;

class degenerate_pencil : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class lemma_hypothesis_not_met : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class F>
Matrix<F> zero_matrix(const F& f, int rows, int cols) {
  return Matrix<F>(rows, std::vector<typename F::Elem>(cols, f.zero()));
}

template <class F>
Matrix<F> identity_matrix(const F& f, int n) {
  Matrix<F> m = zero_matrix(f, n, n);
  for (int i = 0; i < n; ++i) m[i][i] = f.one();
  return m;
}

template <class F>
Matrix<F> transpose(const Matrix<F>& a) {
  if (a.empty()) return a;
  Matrix<F> r(a[0].size(), std::vector<typename F::Elem>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) r[j][i] = a[i][j];
  return r;
}

template <class F>
Matrix<F> matmul(const F& f, const Matrix<F>& a, const Matrix<F>& b) {
  const int n = int(a.size()), m = int(b[0].size()), l = int(b.size());
  Matrix<F> r = zero_matrix(f, n, m);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < l; ++k) {
      if (f.is_zero(a[i][k])) continue;
      for (int j = 0; j < m; ++j) r[i][j] = f.add(r[i][j], f.mul(a[i][k], b[k][j]));
    }
  return r;
}

template <class F>
Matrix<F> lincomb(const F& f, const typename F::Elem& s, const Matrix<F>& a, const typename F::Elem& u,
                  const Matrix<F>& b) {
  Matrix<F> r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] = f.add(f.mul(s, a[i][j]), f.mul(u, b[i][j]));
  return r;
}

template <class F>
bool matrices_equal(const F& f, const Matrix<F>& a, const Matrix<F>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (!f.equal(a[i][j], b[i][j])) return false;
  }
  return true;
}

template <class F>
bool is_symmetric(const F& f, const Matrix<F>& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (!f.equal(a[i][j], a[j][i])) return false;
  return true;
}

/// Principal submatrix on the given indices.
template <class F>
Matrix<F> submatrix(const Matrix<F>& a, const std::vector<int>& idx) {
  Matrix<F> r(idx.size(), std::vector<typename F::Elem>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r[i][j] = a[idx[i]][idx[j]];
  return r;
}

template <class F, class G, class Fn>
Matrix<G> map_matrix(const Matrix<F>& a, Fn&& fn) {
  Matrix<G> r;
  for (const auto& row : a) {
    std::vector<typename G::Elem> out;
    for (const auto& x : row) out.push_back(fn(x));
    r.push_back(std::move(out));
  }
  return r;
}

namespace detail {

/// Row echelon form in place; returns (rank, determinant sign/product).
template <class F>
std::pair<int, typename F::Elem> eliminate(const F& f, Matrix<F>& a) {
  const int n = int(a.size()), m = a.empty() ? 0 : int(a[0].size());
  auto det = f.one();
  int r = 0;
  for (int c = 0; c < m && r < n; ++c) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (!f.is_zero(a[i][c])) {
        piv = i;
        break;
      }
    if (piv < 0) {
      det = f.zero();
      continue;
    }
    if (piv != r) {
      std::swap(a[piv], a[r]);
      det = f.neg(det);
    }
    det = f.mul(det, a[r][c]);
    auto inv = f.inv(a[r][c]);
    for (int i = r + 1; i < n; ++i) {
      if (f.is_zero(a[i][c])) continue;
      auto q = f.mul(a[i][c], inv);
      for (int j = c; j < m; ++j) a[i][j] = f.sub(a[i][j], f.mul(q, a[r][j]));
    }
    ++r;
  }
  if (r < n) det = f.zero();
  return {r, det};
}

}  // namespace detail

template <class F>
typename F::Elem det(const F& f, Matrix<F> a) {
  if (a.empty()) return f.one();
  return detail::eliminate(f, a).second;
}

template <class F>
int rank(const F& f, Matrix<F> a) {
  if (a.empty()) return 0;
  return detail::eliminate(f, a).first;
}

/// A nonzero vector v with a v = 0, if one exists.
template <class F>
std::optional<std::vector<typename F::Elem>> kernel_vector(const F& f, Matrix<F> a) {
  const int n = int(a.size()), m = int(a[0].size());
  // reduced row echelon form
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < m && r < n; ++c) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (!f.is_zero(a[i][c])) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[piv], a[r]);
    auto inv = f.inv(a[r][c]);
    for (int j = 0; j < m; ++j) a[r][j] = f.mul(a[r][j], inv);
    for (int i = 0; i < n; ++i) {
      if (i == r || f.is_zero(a[i][c])) continue;
      auto q = a[i][c];
      for (int j = 0; j < m; ++j) a[i][j] = f.sub(a[i][j], f.mul(q, a[r][j]));
    }
    pivcol.push_back(c);
    ++r;
  }
  int free_col = -1;
  for (int c = 0, k = 0; c < m; ++c) {
    if (k < int(pivcol.size()) && pivcol[k] == c) {
      ++k;
      continue;
    }
    free_col = c;
    break;
  }
  if (free_col < 0) return std::nullopt;
  std::vector<typename F::Elem> v(m, f.zero());
  v[free_col] = f.one();
  for (int i = 0; i < int(pivcol.size()); ++i) v[pivcol[i]] = f.neg(a[i][free_col]);
  return v;
}

template <class F>
struct Diagonalization {
  std::vector<typename F::Elem> diag;
  Matrix<F> P;  // P^T Q P = diag
  int rank = 0;
};

/// Congruence diagonalization in odd characteristic: pivots on the diagonal
/// when possible, otherwise replaces e_k by e_k + e_j for some j with Q(e_k, e_j) != 0.
template <class F>
Diagonalization<F> diagonalize(const F& f, const Matrix<F>& Q) {
  const int n = int(Q.size());
  Matrix<F> A = Q;
  Matrix<F> P = identity_matrix(f, n);
  auto col_axpy = [&](int dst, int src, const typename F::Elem& c) {
    // e_dst <- e_dst + c e_src
    for (int i = 0; i < n; ++i) A[i][dst] = f.add(A[i][dst], f.mul(c, A[i][src]));
    for (int j = 0; j < n; ++j) A[dst][j] = f.add(A[dst][j], f.mul(c, A[src][j]));
    for (int i = 0; i < n; ++i) P[i][dst] = f.add(P[i][dst], f.mul(c, P[i][src]));
  };
  auto swap_basis = [&](int a, int b) {
    std::swap(A[a], A[b]);
    for (int i = 0; i < n; ++i) std::swap(A[i][a], A[i][b]);
    for (int i = 0; i < n; ++i) std::swap(P[i][a], P[i][b]);
  };
  for (int k = 0; k < n; ++k) {
    if (f.is_zero(A[k][k])) {
      int j = -1;
      for (int i = k + 1; i < n; ++i)
        if (!f.is_zero(A[i][i])) {
          j = i;
          break;
        }
      if (j >= 0) {
        swap_basis(k, j);
      } else {
        for (int i = k + 1; i < n; ++i)
          if (!f.is_zero(A[k][i])) {
            j = i;
            break;
          }
        if (j < 0) continue;
        col_axpy(k, j, f.one());
      }
    }
    auto inv = f.inv(A[k][k]);
    for (int j = k + 1; j < n; ++j) {
      if (f.is_zero(A[k][j])) continue;
      col_axpy(j, k, f.neg(f.mul(A[k][j], inv)));
    }
  }
  Diagonalization<F> out;
  for (int i = 0; i < n; ++i) {
    out.diag.push_back(A[i][i]);
    if (!f.is_zero(A[i][i])) ++out.rank;
  }
  out.P = std::move(P);
  return out;
}

// ---------------------------------------------------------------------------
// Pencils over k = F_p(t).

using KMatrix = Matrix<RatFuncField>;

/// det(M0 + x Minf) as a polynomial in x, by interpolation at x = 0, 1, t, t^2, ...
inline KPoly charpoly(const std::shared_ptr<const RatFuncField>& k, const KMatrix& M0, const KMatrix& Minf) {
  const int n = int(M0.size());
  std::vector<RatFunc> xs{k->zero(), k->one()};
  for (int i = 1; int(xs.size()) <= n; ++i) xs.push_back(k->powi(k->t(), i));
  std::vector<RatFunc> ys;
  for (const auto& x : xs) ys.push_back(det(*k, lincomb(*k, k->one(), M0, x, Minf)));
  KPoly result(k);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    KPoly basis = KPoly::one(k);
    RatFunc denom = k->one();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis *= KPoly(k, {k->neg(xs[j]), k->one()});
      denom = k->mul(denom, k->sub(xs[i], xs[j]));
    }
    result += basis.scale(k->div(ys[i], denom));
  }
  return result;
}

struct Pencil {
  std::shared_ptr<const RatFuncField> k;
  KMatrix M0;
  KMatrix Minf;
  KPoly f;  // charpoly

  /// Validates symmetry and that the characteristic polynomial is separable of degree 5.
  static Pencil make(std::shared_ptr<const RatFuncField> k, KMatrix M0, KMatrix Minf) {
    if (M0.size() != 5 || Minf.size() != 5) throw std::invalid_argument("pencil matrices must be 5x5");
    for (int i = 0; i < 5; ++i)
      if (M0[i].size() != 5 || Minf[i].size() != 5) throw std::invalid_argument("pencil matrices must be 5x5");
    if (!is_symmetric(*k, M0) || !is_symmetric(*k, Minf)) throw std::invalid_argument("pencil matrices must be symmetric");
    KPoly f = charpoly(k, M0, Minf);
    if (f.degree() != 5) throw degenerate_pencil("characteristic polynomial has degree " + std::to_string(f.degree()));
    if (gcd(f, f.derivative()).degree() > 0) throw degenerate_pencil("characteristic polynomial is not separable");
    return Pencil{std::move(k), std::move(M0), std::move(Minf), std::move(f)};
  }
};

struct EpsilonInvariant {
  KPoly factor;
  std::shared_ptr<const Algebra> field;
  AlgebraElem value;
  int hyperplane = 0;  // index j of the hyperplane u_j = 0
};

/// eps_i = det of (M0 + theta_i Minf) restricted to a hyperplane u_j = 0 not
/// containing the kernel vector; `choice` selects the admissible j (0 = first).
inline EpsilonInvariant epsilon_invariant(const Pencil& P, const KPoly& factor, int choice = 0) {
  auto K = make_algebra(P.k, factor);
  const Algebra& A = *K;
  const AlgebraElem theta = A.generator();
  Matrix<Algebra> M = zero_matrix(A, 5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) M[i][j] = A.add(A.from_base(P.M0[i][j]), A.mul(theta, A.from_base(P.Minf[i][j])));
  if (rank(A, M) != 4) throw std::domain_error("pencil member at a root of " + factor.to_string("x") + " does not have rank 4");
  auto v = kernel_vector(A, M);
  int hyper = -1;
  for (int j = 0, seen = 0; j < 5; ++j) {
    if (A.is_zero((*v)[j])) continue;
    if (seen++ == choice) {
      hyper = j;
      break;
    }
  }
  if (hyper < 0) throw std::invalid_argument("no admissible hyperplane for the requested choice");
  std::vector<int> keep;
  for (int j = 0; j < 5; ++j)
    if (j != hyper) keep.push_back(j);
  return EpsilonInvariant{factor.monic(), K, det(A, submatrix<Algebra>(M, keep)), hyper};
}

inline std::vector<EpsilonInvariant> epsilon_invariants(const Pencil& P, const std::vector<KPoly>& factors) {
  std::vector<EpsilonInvariant> out;
  for (const auto& g : factors) out.push_back(epsilon_invariant(P, g));
  return out;
}

/// Irreducible factors over k of the characteristic polynomial (via rational
/// roots; supports the factor degrees <= 3 that occur for 5x5 pencils with a
/// quadratic factor). Returns the factors given when supplied.
inline std::vector<KPoly> charpoly_factors_given(const Pencil& P, std::vector<KPoly> factors) {
  KPoly prod = KPoly::one(P.k);
  for (auto& g : factors) {
    g = g.monic();
    prod *= g;
  }
  if (!(prod == P.f.monic())) throw std::invalid_argument("supplied factors do not multiply to the characteristic polynomial");
  return factors;
}

// ---------------------------------------------------------------------------
// Local criteria.

/// +1 iff c1 X^2 + c2 Y^2 + c3 Z^2 = 0 has a nontrivial k_nu-point.
inline Sign conic_symbol(const RatFuncField& k, const RatFunc& c1, const RatFunc& c2, const RatFunc& c3,
                         const Place& nu) {
  return hilbert(k, k.neg(k.mul(c1, c2)), k.neg(k.mul(c1, c3)), nu);
}

inline Sign conic_symbol(const RatFuncField& k, const KMatrix& rank3, const Place& nu) {
  auto D = diagonalize(k, rank3);
  if (D.rank != 3) throw std::domain_error("conic form does not have rank 3");
  return conic_symbol(k, D.diag[0], D.diag[1], D.diag[2], nu);
}

/// For Q = H + C with H of rank 2 and C of rank 3: true iff V(Q) has a
/// k_nu-rational line. Requires H hyperbolic over k_nu.
inline bool line_on_rank5_local(const RatFuncField& k, const KMatrix& rank2, const KMatrix& rank3, const Place& nu) {
  RatFunc d2 = det(k, rank2);
  if (k.is_zero(d2)) throw std::domain_error("rank-2 part is degenerate");
  if (!is_local_square(k, k.neg(d2), nu))
    throw lemma_hypothesis_not_met("rank-2 part is not hyperbolic at " + nu.to_string());
  return conic_symbol(k, rank3, nu) == Sign::Plus;
}

}  // namespace dp4
