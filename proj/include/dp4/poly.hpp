#pragma once

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "dp4/ff.hpp"

namespace dp4 {

/// Dense univariate polynomial over a field context F, lowest degree first.
///
/// The field is held by shared pointer so that polynomials over runtime
/// constructed fields (extensions, completions) stay self-contained.
template <class F>
class Poly {
 public:
  using Field = F;
  using Elem = typename F::Elem;

  Poly() = default;
  explicit Poly(std::shared_ptr<const F> field) : field_(std::move(field)) {}
  Poly(std::shared_ptr<const F> field, std::vector<Elem> coeffs)
      : field_(std::move(field)), c_(std::move(coeffs)) {
    normalize();
  }

  static Poly constant(std::shared_ptr<const F> field, Elem c) {
    std::vector<Elem> v{std::move(c)};
    return Poly(std::move(field), std::move(v));
  }
  static Poly monomial(std::shared_ptr<const F> field, Elem c, int deg) {
    std::vector<Elem> v(deg + 1, field->zero());
    v[deg] = std::move(c);
    return Poly(std::move(field), std::move(v));
  }
  static Poly x(std::shared_ptr<const F> field) {
    auto one = field->one();
    return monomial(std::move(field), one, 1);
  }
  static Poly one(std::shared_ptr<const F> field) {
    auto o = field->one();
    return constant(std::move(field), o);
  }

  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && field_->is_one(c_.back()); }
  std::size_t size() const { return c_.size(); }

  Elem coeff(int i) const {
    return (i >= 0 && i < int(c_.size())) ? c_[i] : field_->zero();
  }
  const Elem& lead() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }
  const std::vector<Elem>& coeffs() const { return c_; }
  const F& field() const { return *field_; }
  const std::shared_ptr<const F>& field_ptr() const { return field_; }

  Poly operator-() const {
    std::vector<Elem> v;
    v.reserve(c_.size());
    for (const auto& a : c_) v.push_back(field_->neg(a));
    return Poly(field_, std::move(v));
  }

  Poly& operator+=(const Poly& o) {
    adopt_field(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), field_->zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_->add(c_[i], o.c_[i]);
    normalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    adopt_field(o);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), field_->zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = field_->sub(c_[i], o.c_[i]);
    normalize();
    return *this;
  }
  Poly& operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    const auto& fp = a.field_ ? a.field_ : b.field_;
    if (a.is_zero() || b.is_zero()) return Poly(fp);
    const F& f = *fp;
    std::vector<Elem> v(a.c_.size() + b.c_.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (f.is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        v[i + j] = f.add(v[i + j], f.mul(a.c_[i], b.c_[j]));
    }
    return Poly(fp, std::move(v));
  }

  Poly scale(const Elem& s) const {
    std::vector<Elem> v;
    v.reserve(c_.size());
    for (const auto& a : c_) v.push_back(field_->mul(a, s));
    return Poly(field_, std::move(v));
  }
  /// Multiplication by x^k.
  Poly shift(int k) const {
    if (is_zero()) return *this;
    std::vector<Elem> v(k, field_->zero());
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(field_, std::move(v));
  }
  Poly monic() const {
    if (is_zero()) return *this;
    return scale(field_->inv(c_.back()));
  }
  Poly derivative() const {
    std::vector<Elem> v;
    for (std::size_t i = 1; i < c_.size(); ++i)
      v.push_back(field_->mul(field_->from_int(std::int64_t(i)), c_[i]));
    return Poly(field_, std::move(v));
  }
  Elem eval(const Elem& x) const {
    Elem r = field_->zero();
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = field_->add(field_->mul(r, x), *it);
    return r;
  }
  /// Returns this(g).
  Poly compose(const Poly& g) const {
    Poly r(g.field_ptr());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * g + constant(g.field_ptr(), *it);
    return r;
  }
  /// Applies a coefficient map into another field.
  template <class G, class Fn>
  Poly<G> map(std::shared_ptr<const G> target, Fn&& fn) const {
    std::vector<typename G::Elem> v;
    v.reserve(c_.size());
    for (const auto& a : c_) v.push_back(fn(a));
    return Poly<G>(std::move(target), std::move(v));
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!a.field_->equal(a.c_[i], b.c_[i])) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// Lexicographic comparison of coefficient vectors from the constant term up,
  /// shorter vectors first when one is a prefix of the other.
  friend int lex_compare(const Poly& a, const Poly& b) {
    std::size_t n = std::min(a.c_.size(), b.c_.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = a.field_->compare(a.c_[i], b.c_[i]);
      if (c != 0) return c;
    }
    return a.c_.size() < b.c_.size() ? -1 : (a.c_.size() > b.c_.size() ? 1 : 0);
  }

  /// Sparse text form, highest degree first, e.g. `t^4+5*t^2+2*t+4`.
  std::string to_string(std::string_view var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const Elem& a = c_[i];
      if (field_->is_zero(a)) continue;
      std::string cs = field_->to_string(a);
      if (field_->is_compound(a)) cs = "(" + cs + ")";
      std::string term;
      if (i == 0) {
        term = cs;
      } else {
        std::string mono(var);
        if (i > 1) mono += "^" + std::to_string(i);
        term = field_->is_one(a) ? mono : cs + "*" + mono;
      }
      if (!out.empty()) out += "+";
      out += term;
    }
    return out;
  }

 private:
  void normalize() {
    while (!c_.empty() && field_->is_zero(c_.back())) c_.pop_back();
  }
  void adopt_field(const Poly& o) {
    if (!field_) field_ = o.field_;
  }

  std::shared_ptr<const F> field_;
  std::vector<Elem> c_;
};

/// Euclidean division; b must be nonzero.
template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const Poly<F>& a, const Poly<F>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const F& f = b.field();
  const auto& fp = b.field_ptr();
  if (a.degree() < b.degree()) return {Poly<F>(fp), a};
  std::vector<typename F::Elem> r = a.coeffs();
  std::vector<typename F::Elem> q(a.degree() - b.degree() + 1, f.zero());
  auto inv_lead = f.inv(b.lead());
  const int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    if (f.is_zero(r[i])) continue;
    auto c = f.is_one(b.lead()) ? r[i] : f.mul(r[i], inv_lead);
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) r[i - db + j] = f.sub(r[i - db + j], f.mul(c, b.coeffs()[j]));
    r[i] = f.zero();
  }
  r.resize(db);
  return {Poly<F>(fp, std::move(q)), Poly<F>(fp, std::move(r))};
}

template <class F>
Poly<F> operator/(const Poly<F>& a, const Poly<F>& b) {
  return divmod(a, b).first;
}
template <class F>
Poly<F> operator%(const Poly<F>& a, const Poly<F>& b) {
  return divmod(a, b).second;
}

/// Exact quotient; throws if b does not divide a.
template <class F>
Poly<F> exact_div(const Poly<F>& a, const Poly<F>& b) {
  auto [q, r] = divmod(a, b);
  if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
  return q;
}

/// Monic gcd (zero if both inputs are zero).
template <class F>
Poly<F> gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    Poly<F> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class F>
struct XgcdResult {
  Poly<F> g, s, t;
};

/// s*a + t*b = g with g monic.
template <class F>
XgcdResult<F> xgcd(const Poly<F>& a, const Poly<F>& b) {
  const auto& fp = a.field_ptr() ? a.field_ptr() : b.field_ptr();
  Poly<F> r0 = a, r1 = b;
  Poly<F> s0 = Poly<F>::one(fp), s1(fp);
  Poly<F> t0(fp), t1 = Poly<F>::one(fp);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<F> s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly<F> t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  auto li = fp->inv(r0.lead());
  return {r0.scale(li), s0.scale(li), t0.scale(li)};
}

template <class F>
Poly<F> mulmod(const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
  return (a * b) % m;
}

template <class F>
Poly<F> powmod(Poly<F> base, u128 e, const Poly<F>& m) {
  Poly<F> r = Poly<F>::one(m.field_ptr()) % m;
  base = base % m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, base, m);
    e >>= 1;
    if (e > 0) base = mulmod(base, base, m);
  }
  return r;
}

/// Resultant via the Euclidean algorithm (valid over any field).
template <class F>
typename F::Elem resultant(const Poly<F>& a, const Poly<F>& b) {
  const auto& fp = a.field_ptr() ? a.field_ptr() : b.field_ptr();
  const F& f = *fp;
  if (a.is_zero() || b.is_zero()) return f.zero();
  Poly<F> A = a, B = b;
  auto acc = f.one();
  for (;;) {
    const int m = A.degree(), n = B.degree();
    if (n == 0) return f.mul(acc, f.pow(B.lead(), m));
    if (m == 0) {
      // Res(c, B) = c^n
      return f.mul(acc, f.pow(A.lead(), n));
    }
    Poly<F> R = A % B;
    if (R.is_zero()) return f.zero();
    // Res(A,B) = (-1)^{mn} Res(B,A) = (-1)^{mn} lc(B)^{m - deg R} Res(B,R)
    if ((m * n) % 2 == 1) acc = f.neg(acc);
    acc = f.mul(acc, f.pow(B.lead(), u128(m - R.degree())));
    A = std::move(B);
    B = std::move(R);
  }
}

/// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f).
template <class F>
typename F::Elem discriminant(const Poly<F>& p) {
  if (p.degree() < 1) throw std::domain_error("discriminant of a constant polynomial");
  const F& f = p.field();
  const int n = p.degree();
  const Poly<F> dp = p.derivative();
  if (dp.is_zero()) return f.zero();
  // f' taken with formal degree n - 1
  auto r = f.mul(resultant(p, dp), f.pow(p.lead(), u128(n - 1 - dp.degree())));
  r = f.div(r, p.lead());
  if ((n * (n - 1) / 2) % 2 == 1) r = f.neg(r);
  return r;
}

}  // namespace dp4
