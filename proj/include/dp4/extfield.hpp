#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/poly.hpp"

namespace dp4 {

/// Simple extension Base[a]/(m(a)) for a monic irreducible m.
///
/// Elements are coefficient vectors of fixed length deg m. Works for any base
/// field context: finite fields (towers of F_p) as well as the rational
/// function field, where it models k[x]/f for an irreducible f.
template <class Base>
class ExtField {
 public:
  using BaseElem = typename Base::Elem;
  using Elem = std::vector<BaseElem>;

  ExtField(std::shared_ptr<const Base> base, Poly<Base> modulus, std::string gen = "a")
      : base_(std::move(base)), mod_(std::move(modulus)), gen_(std::move(gen)) {
    if (mod_.degree() < 1) throw std::invalid_argument("extension modulus must have degree >= 1");
    if (!mod_.is_monic()) mod_ = mod_.monic();
  }

  const Base& base() const { return *base_; }
  const std::shared_ptr<const Base>& base_ptr() const { return base_; }
  const Poly<Base>& modulus() const { return mod_; }
  const std::string& generator_name() const { return gen_; }
  int degree() const { return mod_.degree(); }
  auto characteristic() const { return base_->characteristic(); }

  /// |F| for finite towers; throws if it overflows 128 bits.
  u128 order() const {
    u128 q = base_->order(), r = 1;
    for (int i = 0; i < degree(); ++i) r = checked_mul(r, q);
    return r;
  }

  Elem zero() const { return Elem(degree(), base_->zero()); }
  Elem one() const { return from_base(base_->one()); }
  Elem from_base(const BaseElem& c) const {
    Elem e = zero();
    e[0] = c;
    return e;
  }
  Elem from_int(std::int64_t v) const { return from_base(base_->from_int(v)); }
  Elem generator() const {
    Poly<Base> x = Poly<Base>::x(base_);
    return from_poly(x);
  }
  /// Enumerates elements by mixed-radix digits (finite bases only).
  Elem from_index(u128 i) const {
    Elem e = zero();
    u128 q = base_->order();
    for (int k = 0; k < degree(); ++k) {
      e[k] = base_->from_index(i % q);
      i /= q;
    }
    return e;
  }

  Poly<Base> to_poly(const Elem& a) const { return Poly<Base>(base_, a); }
  Elem from_poly(const Poly<Base>& p) const {
    Poly<Base> r = p.degree() >= degree() ? p % mod_ : p;
    Elem e = zero();
    for (int i = 0; i <= r.degree(); ++i) e[i] = r.coeffs()[i];
    return e;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = base_->add(a[i], b[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = base_->sub(a[i], b[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = base_->neg(a[i]);
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    const int d = degree();
    std::vector<BaseElem> prod(2 * d - 1, base_->zero());
    for (int i = 0; i < d; ++i) {
      if (base_->is_zero(a[i])) continue;
      for (int j = 0; j < d; ++j) {
        if (base_->is_zero(b[j])) continue;
        prod[i + j] = base_->add(prod[i + j], base_->mul(a[i], b[j]));
      }
    }
    const auto& m = mod_.coeffs();
    for (int i = 2 * d - 2; i >= d; --i) {
      if (base_->is_zero(prod[i])) continue;
      BaseElem c = prod[i];
      for (int j = 0; j < d; ++j)
        if (!base_->is_zero(m[j])) prod[i - d + j] = base_->sub(prod[i - d + j], base_->mul(c, m[j]));
    }
    prod.resize(d);
    return prod;
  }
  Elem scale(const Elem& a, const BaseElem& s) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = base_->mul(a[i], s);
    return r;
  }
  Elem pow(Elem a, u128 e) const {
    Elem r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      e >>= 1;
      if (e > 0) a = mul(a, a);
    }
    return r;
  }
  Elem inv(const Elem& a) const {
    if (is_zero(a)) throw std::domain_error("inverse of zero in extension field");
    auto res = xgcd(to_poly(a), mod_);
    if (res.g.degree() != 0) throw std::domain_error("element not invertible: modulus is reducible");
    return from_poly(res.s);
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  bool is_zero(const Elem& a) const {
    for (const auto& c : a)
      if (!base_->is_zero(c)) return false;
    return true;
  }
  bool is_one(const Elem& a) const {
    if (!base_->is_one(a[0])) return false;
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!base_->is_zero(a[i])) return false;
    return true;
  }
  bool equal(const Elem& a, const Elem& b) const {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!base_->equal(a[i], b[i])) return false;
    return true;
  }
  /// Lexicographic from the constant coordinate upward.
  int compare(const Elem& a, const Elem& b) const {
    for (std::size_t i = 0; i < a.size(); ++i) {
      int c = base_->compare(a[i], b[i]);
      if (c != 0) return c;
    }
    return 0;
  }

  std::string to_string(const Elem& a) const { return to_poly(a).to_string(gen_); }
  bool is_compound(const Elem& a) const {
    int nz = 0;
    for (const auto& c : a)
      if (!base_->is_zero(c)) ++nz;
    if (nz > 1) return true;
    for (std::size_t i = 1; i < a.size(); ++i)
      if (!base_->is_zero(a[i])) return base_->is_compound(a[i]);
    return base_->is_compound(a[0]);
  }

  template <class Rng>
  Elem random(Rng& rng) const {
    Elem e(degree());
    for (auto& c : e) c = base_->random(rng);
    return e;
  }

 private:
  std::shared_ptr<const Base> base_;
  Poly<Base> mod_;
  std::string gen_;
};

/// Convenience alias: F_{p^d} presented as F_p[a]/(m).
using GF = ExtField<PrimeField>;

}  // namespace dp4
