#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/extfield.hpp"
#include "dp4/poly.hpp"

// Factorization of univariate polynomials over finite fields: squarefree
// decomposition, distinct-degree and Cantor-Zassenhaus equal-degree splitting.

namespace dp4 {

template <class F>
struct Factorization {
  typename F::Elem unit;
  std::vector<std::pair<Poly<F>, int>> factors;

  Poly<F> expand(const std::shared_ptr<const F>& field) const {
    Poly<F> r = Poly<F>::constant(field, unit);
    for (const auto& [g, m] : factors)
      for (int i = 0; i < m; ++i) r *= g;
    return r;
  }
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

template <class F>
typename F::Elem pth_root(const F& f, const typename F::Elem& a) {
  return f.pow(a, f.order() / f.characteristic());
}

template <class F>
Poly<F> pth_root(const Poly<F>& c) {
  const F& f = c.field();
  const int p = int(f.characteristic());
  std::vector<typename F::Elem> v;
  for (int i = 0; i <= c.degree(); i += p) v.push_back(pth_root(f, c.coeffs()[i]));
  return Poly<F>(c.field_ptr(), std::move(v));
}

/// Canonical order for factor lists: degree first, then lexicographic.
template <class F>
bool canonical_less(const Poly<F>& a, const Poly<F>& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return lex_compare(a, b) < 0;
}

}  // namespace detail

/// Squarefree decomposition of a monic polynomial: pairs (g_i, i), g_i squarefree, pairwise coprime.
template <class F>
std::vector<std::pair<Poly<F>, int>> squarefree_decomposition(const Poly<F>& f) {
  std::vector<std::pair<Poly<F>, int>> out;
  if (f.degree() < 1) return out;
  const int p = int(f.field().characteristic());
  Poly<F> g = f.derivative();
  if (g.is_zero()) {
    for (auto& [h, m] : squarefree_decomposition(detail::pth_root(f))) out.emplace_back(h, m * p);
    return out;
  }
  Poly<F> c = gcd(f, g);
  Poly<F> w = exact_div(f, c);
  int i = 1;
  while (w.degree() > 0) {
    Poly<F> y = gcd(w, c);
    Poly<F> z = exact_div(w, y);
    if (z.degree() > 0) out.emplace_back(z.monic(), i);
    ++i;
    w = y;
    c = exact_div(c, y);
  }
  if (c.degree() > 0) {
    for (auto& [h, m] : squarefree_decomposition(detail::pth_root(c.monic()))) out.emplace_back(h, m * p);
  }
  return out;
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs (product of all degree-d factors, d).
template <class F>
std::vector<std::pair<Poly<F>, int>> distinct_degree_factorization(const Poly<F>& f) {
  std::vector<std::pair<Poly<F>, int>> out;
  const auto& fp = f.field_ptr();
  const u128 q = f.field().order();
  Poly<F> rest = f;
  Poly<F> x = Poly<F>::x(fp);
  Poly<F> h = x % rest;
  for (int i = 1; rest.degree() >= 2 * i; ++i) {
    h = powmod(h, q, rest);
    Poly<F> g = gcd(rest, h - x);
    if (g.degree() > 0) {
      out.emplace_back(g, i);
      rest = exact_div(rest, g);
      h = h % rest;
    }
  }
  if (rest.degree() > 0) out.emplace_back(rest, rest.degree());
  return out;
}

/// Splits a product of distinct monic irreducibles of common degree d.
template <class F, class Rng>
void equal_degree_split(const Poly<F>& g, int d, Rng& rng, std::vector<Poly<F>>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  const F& f = g.field();
  const auto& fp = g.field_ptr();
  const u128 q = f.order();
  for (;;) {
    std::vector<typename F::Elem> v(g.degree());
    for (auto& c : v) c = f.random(rng);
    Poly<F> a(fp, std::move(v));
    if (a.degree() < 1) continue;
    // a^{(q^d-1)/2} = prod_i (a^{(q-1)/2})^{q^i}
    Poly<F> c = powmod(a, (q - 1) / 2, g);
    Poly<F> b = c;
    for (int i = 1; i < d; ++i) {
      c = powmod(c, q, g);
      b = mulmod(b, c, g);
    }
    Poly<F> h = gcd(g, b - Poly<F>::one(fp));
    if (h.degree() > 0 && h.degree() < g.degree()) {
      equal_degree_split(h, d, rng, out);
      equal_degree_split(exact_div(g, h), d, rng, out);
      return;
    }
  }
}

/// Full factorization into monic irreducibles with multiplicities; the
/// random choices are seeded from (p, f) so results are reproducible.
template <class F>
Factorization<F> factor(const Poly<F>& f) {
  if (f.is_zero()) throw std::domain_error("factor: zero polynomial");
  Factorization<F> res{f.lead(), {}};
  if (f.degree() == 0) return res;
  std::mt19937_64 rng(detail::fnv1a(f.to_string("x"), f.field().characteristic()));
  for (const auto& [sq, mult] : squarefree_decomposition(f.monic())) {
    for (const auto& [g, d] : distinct_degree_factorization(sq)) {
      std::vector<Poly<F>> parts;
      equal_degree_split(g, d, rng, parts);
      for (auto& h : parts) res.factors.emplace_back(std::move(h), mult);
    }
  }
  std::sort(res.factors.begin(), res.factors.end(), [](const auto& a, const auto& b) {
    return detail::canonical_less(a.first, b.first);
  });
  return res;
}

/// Ben-Or irreducibility test: gcd(f, x^{q^i} - x) = 1 for all i <= deg f / 2.
template <class F>
bool is_irreducible(const Poly<F>& f) {
  const int n = f.degree();
  if (n < 1) return false;
  if (n == 1) return true;
  Poly<F> m = f.monic();
  const auto& fp = f.field_ptr();
  Poly<F> x = Poly<F>::x(fp);
  Poly<F> h = x;
  const u128 q = f.field().order();
  for (int i = 1; i <= n / 2; ++i) {
    h = powmod(h, q, m);
    if (gcd(m, h - x).degree() > 0) return false;
  }
  return true;
}

/// Roots in the base field (distinct, canonical order).
template <class F>
std::vector<typename F::Elem> roots(const Poly<F>& f) {
  std::vector<typename F::Elem> out;
  if (f.degree() < 1) return out;
  const F& fld = f.field();
  for (const auto& [g, m] : factor(f).factors)
    if (g.degree() == 1) out.push_back(fld.neg(g.coeffs()[0]));
  return out;
}

/// The i-th monic polynomial of degree n in lexicographic order of the
/// coefficient vector read from the constant term upward.
template <class F>
Poly<F> monic_from_index(const std::shared_ptr<const F>& field, int n, u128 index) {
  std::vector<typename F::Elem> v(n + 1, field->zero());
  const u128 q = field->order();
  for (int k = n - 1; k >= 0; --k) {
    v[k] = field->from_index(index % q);
    index /= q;
  }
  v[n] = field->one();
  return Poly<F>(field, std::move(v));
}

/// Stateless, index-addressable stream of monic irreducibles of one degree.
/// Disjoint index ranges can be consumed by independent workers.
template <class F>
class IrreducibleStream {
 public:
  IrreducibleStream(std::shared_ptr<const F> field, int degree) : field_(std::move(field)), n_(degree) {
    if (degree < 1) throw std::invalid_argument("irreducibles: degree must be >= 1");
    end_ = 1;
    for (int i = 0; i < n_; ++i) end_ = checked_mul(end_, field_->order());
  }
  /// Number of candidate indices (all monic polynomials of the degree).
  u128 size() const { return end_; }
  Poly<F> candidate(u128 index) const { return monic_from_index(field_, n_, index); }
  /// Next irreducible at or after `index`; advances index past it.
  std::optional<Poly<F>> next(u128& index) const {
    while (index < end_) {
      Poly<F> c = candidate(index++);
      if (is_irreducible(c)) return c;
    }
    return std::nullopt;
  }
  std::vector<Poly<F>> all() const {
    std::vector<Poly<F>> out;
    u128 i = 0;
    while (auto g = next(i)) out.push_back(std::move(*g));
    return out;
  }

 private:
  std::shared_ptr<const F> field_;
  int n_;
  u128 end_ = 0;
};

/// F_{p^d} with the lexicographically least monic irreducible modulus.
inline std::shared_ptr<const GF> make_gf(std::uint32_t p, int d, std::string gen = "a") {
  auto fp = PrimeField::make(p);
  IrreducibleStream<PrimeField> s(fp, d);
  u128 i = 0;
  auto m = s.next(i);
  return std::make_shared<const GF>(fp, *m, std::move(gen));
}

}  // namespace dp4
