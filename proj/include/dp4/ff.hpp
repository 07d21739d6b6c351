#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace dp4 {

using u128 = unsigned __int128;

/// Raised whenever a characteristic-2 object is requested.
class unsupported_characteristic : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), char('0' + int(v % 10)));
    v /= 10;
  }
  return s;
}

/// Multiplies two u128 values, throwing if the product does not fit.
inline u128 checked_mul(u128 a, u128 b) {
  if (a != 0 && b > (~u128(0)) / a) throw std::overflow_error("field order exceeds 128 bits");
  return a * b;
}

/// The prime field F_p for an odd prime p < 2^31.
class PrimeField {
 public:
  using Elem = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p == 2) throw unsupported_characteristic("characteristic 2 unsupported");
    if (p >= (1u << 31) || !is_prime(p))
      throw std::invalid_argument("modulus " + std::to_string(p) + " is not an odd prime");
  }

  static std::shared_ptr<const PrimeField> make(std::uint32_t p) {
    return std::make_shared<const PrimeField>(p);
  }

  std::uint32_t characteristic() const { return p_; }
  u128 order() const { return p_; }
  int degree() const { return 1; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % std::int64_t(p_);
    if (r < 0) r += p_;
    return Elem(r);
  }
  Elem from_index(u128 i) const { return Elem(i % p_); }

  Elem add(Elem a, Elem b) const {
    std::uint64_t s = std::uint64_t(a) + b;
    return Elem(s >= p_ ? s - p_ : s);
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : Elem(std::uint64_t(a) + p_ - b); }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return Elem(std::uint64_t(a) * b % p_); }
  Elem pow(Elem a, u128 e) const {
    std::uint64_t r = 1, b = a;
    while (e > 0) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return Elem(r);
  }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero in F_p");
    std::int64_t r0 = p_, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::int64_t q = r0 / r1;
      std::int64_t tmp = r0 - q * r1;
      r0 = r1;
      r1 = tmp;
      tmp = s0 - q * s1;
      s0 = s1;
      s1 = tmp;
    }
    return from_int(s0);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  bool is_zero(Elem a) const { return a == 0; }
  bool is_one(Elem a) const { return a == 1; }
  bool equal(Elem a, Elem b) const { return a == b; }
  /// Total order used for canonical choices (integer order on [0, p)).
  int compare(Elem a, Elem b) const { return a < b ? -1 : (a > b ? 1 : 0); }

  std::string to_string(Elem a) const { return std::to_string(a); }
  bool is_compound(Elem) const { return false; }

  template <class Rng>
  Elem random(Rng& rng) const {
    return Elem(std::uniform_int_distribution<std::uint32_t>(0, p_ - 1)(rng));
  }

  bool operator==(const PrimeField& o) const { return p_ == o.p_; }

 private:
  std::uint32_t p_;
};

// Generic algorithms for any finite field type F exposing order()/pow()/compare().

template <class F>
bool is_square(const F& f, const typename F::Elem& a) {
  if (f.is_zero(a)) return true;
  return f.is_one(f.pow(a, (f.order() - 1) / 2));
}

/// +1 for nonzero squares, -1 for nonsquares, 0 for zero.
template <class F>
int quadratic_character(const F& f, const typename F::Elem& a) {
  if (f.is_zero(a)) return 0;
  return is_square(f, a) ? 1 : -1;
}

/// Square root by Tonelli-Shanks; the root returned is the smaller of +-y under F::compare.
template <class F>
std::optional<typename F::Elem> sqrt(const F& f, const typename F::Elem& a) {
  using E = typename F::Elem;
  if (f.is_zero(a)) return a;
  if (!is_square(f, a)) return std::nullopt;
  u128 q = f.order() - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  E z = f.zero();
  for (u128 i = 2;; ++i) {
    z = f.from_index(i);
    if (!f.is_zero(z) && !is_square(f, z)) break;
  }
  E c = f.pow(z, q);
  E x = f.pow(a, (q + 1) / 2);
  E t = f.pow(a, q);
  int m = s;
  while (!f.is_one(t)) {
    int i = 0;
    E t2 = t;
    while (!f.is_one(t2)) {
      t2 = f.mul(t2, t2);
      ++i;
    }
    E b = c;
    for (int j = 0; j < m - i - 1; ++j) b = f.mul(b, b);
    x = f.mul(x, b);
    c = f.mul(b, b);
    t = f.mul(t, c);
    m = i;
  }
  E y = f.neg(x);
  return f.compare(y, x) < 0 ? y : x;
}

}  // namespace dp4
