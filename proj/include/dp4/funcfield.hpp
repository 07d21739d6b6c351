#pragma once

#include <cctype>
#include <climits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dp4/extfield.hpp"
#include "dp4/factor.hpp"
#include "dp4/poly.hpp"

// The global field k = F_p(t): rational functions, places, valuations,
// residues, Legendre and Hilbert symbols, global and local square tests.

namespace dp4 {

using FpPoly = Poly<PrimeField>;

/// num/den with gcd(num, den) = 1 and den monic.
struct RatFunc {
  FpPoly num;
  FpPoly den;
};

class RatFuncField {
 public:
  using Elem = RatFunc;

  explicit RatFuncField(std::shared_ptr<const PrimeField> fp) : fp_(std::move(fp)) {}
  static std::shared_ptr<const RatFuncField> make(std::uint32_t p) {
    return std::make_shared<const RatFuncField>(PrimeField::make(p));
  }

  const PrimeField& prime_field() const { return *fp_; }
  const std::shared_ptr<const PrimeField>& prime_field_ptr() const { return fp_; }
  std::uint32_t characteristic() const { return fp_->characteristic(); }

  Elem make(FpPoly num, FpPoly den) const {
    if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
    if (num.is_zero()) return zero();
    FpPoly g = gcd(num, den);
    if (g.degree() > 0) {
      num = exact_div(num, g);
      den = exact_div(den, g);
    }
    auto li = fp_->inv(den.lead());
    return {num.scale(li), den.scale(li)};
  }
  Elem from_poly(FpPoly p) const { return {std::move(p), FpPoly::one(fp_)}; }
  Elem zero() const { return {FpPoly(fp_), FpPoly::one(fp_)}; }
  Elem one() const { return from_poly(FpPoly::one(fp_)); }
  Elem from_int(std::int64_t v) const { return from_poly(FpPoly::constant(fp_, fp_->from_int(v))); }
  Elem from_prime(PrimeField::Elem c) const { return from_poly(FpPoly::constant(fp_, c)); }
  Elem t() const { return from_poly(FpPoly::x(fp_)); }
  FpPoly poly_t() const { return FpPoly::x(fp_); }
  FpPoly poly_const(std::int64_t v) const { return FpPoly::constant(fp_, fp_->from_int(v)); }

  Elem add(const Elem& a, const Elem& b) const {
    if (a.den == b.den) return make(a.num + b.num, a.den);
    return make(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem neg(const Elem& a) const { return {-a.num, a.den}; }
  Elem mul(const Elem& a, const Elem& b) const {
    if (a.num.is_zero() || b.num.is_zero()) return zero();
    return make(a.num * b.num, a.den * b.den);
  }
  Elem inv(const Elem& a) const {
    if (a.num.is_zero()) throw std::domain_error("inverse of zero in F_p(t)");
    return make(a.den, a.num);
  }
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, u128 e) const {
    Elem r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      e >>= 1;
      if (e > 0) a = mul(a, a);
    }
    return r;
  }
  Elem powi(const Elem& a, int e) const { return e >= 0 ? pow(a, u128(e)) : pow(inv(a), u128(-e)); }

  bool is_zero(const Elem& a) const { return a.num.is_zero(); }
  bool is_one(const Elem& a) const { return a.den.degree() == 0 && a.num.degree() == 0 && fp_->is_one(a.num.lead()); }
  bool equal(const Elem& a, const Elem& b) const { return a.num == b.num && a.den == b.den; }
  bool is_polynomial(const Elem& a) const { return a.den.degree() == 0; }
  int compare(const Elem& a, const Elem& b) const {
    int c = lex_compare(a.num, b.num);
    return c != 0 ? c : lex_compare(a.den, b.den);
  }

  std::string to_string(const Elem& a) const {
    if (a.den.degree() == 0) return a.num.to_string("t");
    auto wrap = [](const FpPoly& p) {
      std::string s = p.to_string("t");
      bool simple = s.find('+') == std::string::npos && s.find('*') == std::string::npos;
      return simple ? s : "(" + s + ")";
    };
    return wrap(a.num) + "/" + wrap(a.den);
  }
  bool is_compound(const Elem& a) const {
    if (a.den.degree() > 0) return true;
    int nz = 0;
    for (const auto& c : a.num.coeffs())
      if (c != 0) ++nz;
    return nz > 1;
  }

  template <class Rng>
  Elem random(Rng& rng) const {
    return random_poly(rng, 3);
  }
  template <class Rng>
  Elem random_poly(Rng& rng, int max_deg) const {
    std::vector<PrimeField::Elem> v(max_deg + 1);
    for (auto& c : v) c = fp_->random(rng);
    return from_poly(FpPoly(fp_, std::move(v)));
  }

 private:
  std::shared_ptr<const PrimeField> fp_;
};

using KPoly = Poly<RatFuncField>;

// ---------------------------------------------------------------------------
// Text parsing: sums/products/powers of integers, the variable, parentheses
// and (for rational functions) division.

namespace detail {

class ExprParser {
 public:
  ExprParser(const RatFuncField& k, std::string_view s, char var) : k_(k), s_(s), var_(var) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("cannot parse '" + std::string(s_) + "': " + what + " at position " +
                                std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  RatFunc expr() {
    RatFunc r;
    bool neg = accept('-');
    if (!neg) accept('+');
    r = term();
    if (neg) r = k_.neg(r);
    for (;;) {
      if (accept('+'))
        r = k_.add(r, term());
      else if (accept('-'))
        r = k_.sub(r, term());
      else
        return r;
    }
  }
  RatFunc term() {
    RatFunc r = factor();
    for (;;) {
      skip();
      if (accept('*')) {
        r = k_.mul(r, factor());
      } else if (accept('/')) {
        r = k_.div(r, factor());
      } else if (pos_ < s_.size() && (s_[pos_] == '(' || s_[pos_] == var_)) {
        r = k_.mul(r, factor());  // implicit product such as 2t or t(t+1)
      } else {
        return r;
      }
    }
  }
  RatFunc factor() {
    RatFunc base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = k_.pow(base, u128(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }
  RatFunc atom() {
    skip();
    if (accept('(')) {
      RatFunc r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (accept('-')) return k_.neg(factor());
    if (pos_ < s_.size() && s_[pos_] == var_) {
      ++pos_;
      return k_.t();
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a term");
    std::uint64_t v = 0;
    for (std::size_t i = start; i < pos_; ++i) v = (v * 10 + (s_[i] - '0')) % k_.characteristic();
    return k_.from_int(std::int64_t(v));
  }

  const RatFuncField& k_;
  std::string_view s_;
  char var_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RatFunc parse_ratfunc(const RatFuncField& k, std::string_view s) {
  return detail::ExprParser(k, s, 't').parse();
}

inline FpPoly parse_poly(const RatFuncField& k, std::string_view s) {
  RatFunc r = parse_ratfunc(k, s);
  if (r.den.degree() != 0) throw std::invalid_argument("expected a polynomial: " + std::string(s));
  return r.num;
}

// ---------------------------------------------------------------------------
// Places.

/// A closed point of P^1 over F_p: a monic irreducible polynomial or infinity.
class Place {
 public:
  static Place infinity() { return Place(); }
  static Place finite(const FpPoly& q) {
    if (q.degree() < 1) throw std::invalid_argument("place generator must be nonconstant");
    FpPoly m = q.monic();
    if (!is_irreducible(m)) throw std::invalid_argument("place generator is not irreducible: " + m.to_string());
    return Place(std::move(m));
  }
  /// For generators already known to be monic irreducible.
  static Place finite_unchecked(FpPoly q) { return Place(std::move(q)); }

  bool is_infinite() const { return !gen_.has_value(); }
  const FpPoly& poly() const {
    if (!gen_) throw std::logic_error("infinite place has no generator");
    return *gen_;
  }
  int degree() const { return gen_ ? gen_->degree() : 1; }
  std::string to_string() const { return gen_ ? gen_->to_string("t") : "inf"; }

  friend bool operator==(const Place& a, const Place& b) {
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
    return *a.gen_ == *b.gen_;
  }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
  /// Finite places by (degree, lex), infinity last.
  friend bool operator<(const Place& a, const Place& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return detail::canonical_less(*a.gen_, *b.gen_);
  }

 private:
  Place() = default;
  explicit Place(FpPoly q) : gen_(std::move(q)) {}
  std::optional<FpPoly> gen_;
};

inline Place parse_place(const RatFuncField& k, std::string_view s) {
  if (s == "inf" || s == "infinity") return Place::infinity();
  return Place::finite(parse_poly(k, s));
}

/// Symbol values (Legendre, Hilbert) in {+1, -1}.
enum class Sign : int { Minus = -1, Plus = 1 };

inline Sign operator*(Sign a, Sign b) { return static_cast<Sign>(static_cast<int>(a) * static_cast<int>(b)); }
inline Sign sign_of(bool plus) { return plus ? Sign::Plus : Sign::Minus; }
inline int to_int(Sign s) { return static_cast<int>(s); }

inline constexpr int kInfiniteValuation = INT_MAX;

/// v_q(f) for a nonzero polynomial f and monic irreducible q.
inline int poly_valuation(FpPoly f, const FpPoly& q) {
  if (f.is_zero()) return kInfiniteValuation;
  int v = 0;
  for (;;) {
    auto [quo, rem] = divmod(f, q);
    if (!rem.is_zero()) return v;
    f = std::move(quo);
    ++v;
  }
}

inline int valuation(const RatFunc& x, const Place& nu) {
  if (x.num.is_zero()) return kInfiniteValuation;
  if (nu.is_infinite()) return x.den.degree() - x.num.degree();
  return poly_valuation(x.num, nu.poly()) - poly_valuation(x.den, nu.poly());
}

/// Residue field at a place: F_p[a]/(q) for finite q (a = class of t), F_p at infinity.
inline std::shared_ptr<const GF> residue_field(const std::shared_ptr<const PrimeField>& fp, const Place& nu) {
  if (nu.is_infinite()) return std::make_shared<const GF>(fp, FpPoly::x(fp), "a");
  return std::make_shared<const GF>(fp, nu.poly(), "a");
}

/// Residue of x / pi^{v(x)} for the uniformizer pi = q (finite) or 1/t (infinity).
inline GF::Elem unit_residue(const GF& res, const RatFunc& x, const Place& nu) {
  if (x.num.is_zero()) throw std::domain_error("residue of zero");
  if (nu.is_infinite()) {
    const PrimeField& f = res.base();
    return res.from_base(f.div(x.num.lead(), x.den.lead()));
  }
  const FpPoly& q = nu.poly();
  auto strip = [&](FpPoly f) {
    for (;;) {
      auto [quo, rem] = divmod(f, q);
      if (!rem.is_zero()) return f;
      f = std::move(quo);
    }
  };
  return res.div(res.from_poly(strip(x.num)), res.from_poly(strip(x.den)));
}

inline Sign residue_character(const GF& res, const GF::Elem& u) {
  return sign_of(is_square(res, u));
}

/// Legendre symbol (a / nu) for a nu-unit a at a finite place.
inline Sign legendre(const RatFuncField& k, const RatFunc& a, const Place& nu) {
  if (nu.is_infinite()) throw std::invalid_argument("legendre: place must be finite");
  if (valuation(a, nu) != 0) throw std::domain_error("legendre: argument is not a unit at " + nu.to_string());
  auto res = residue_field(k.prime_field_ptr(), nu);
  return residue_character(*res, unit_residue(*res, a, nu));
}

/// Tame Hilbert symbol: (a,b) = chi((-1)^{ab}) chi(u)^b chi(w)^a for a = pi^A u, b = pi^B w.
inline Sign hilbert(const RatFuncField& k, const RatFunc& a, const RatFunc& b, const Place& nu) {
  if (k.is_zero(a) || k.is_zero(b)) throw std::domain_error("hilbert symbol of zero");
  auto res = residue_field(k.prime_field_ptr(), nu);
  const int va = valuation(a, nu), vb = valuation(b, nu);
  Sign s = Sign::Plus;
  if ((va & 1) && (vb & 1)) s = s * residue_character(*res, res->from_int(-1));
  if (vb & 1) s = s * residue_character(*res, unit_residue(*res, a, nu));
  if (va & 1) s = s * residue_character(*res, unit_residue(*res, b, nu));
  return s;
}

/// Right-hand side of the reciprocity law for distinct irreducibles a, b:
/// (-1/p)^{deg a deg b} (lead a/p)^{deg b} (lead b/p)^{deg a} (b/a).
inline Sign reciprocity_rhs(const RatFuncField& k, const FpPoly& a, const FpPoly& b) {
  if (a.monic() == b.monic()) throw std::invalid_argument("reciprocity: polynomials must be distinct");
  const PrimeField& f = k.prime_field();
  const int da = a.degree(), db = b.degree();
  Sign s = Sign::Plus;
  if ((da * db) & 1) s = s * sign_of(is_square(f, f.from_int(-1)));
  if (db & 1) s = s * sign_of(is_square(f, a.lead()));
  if (da & 1) s = s * sign_of(is_square(f, b.lead()));
  return s * legendre(k, k.from_poly(b), Place::finite(a));
}

/// True iff x is a square in k_nu (x nonzero).
inline bool is_local_square(const RatFuncField& k, const RatFunc& x, const Place& nu) {
  if (k.is_zero(x)) throw std::domain_error("is_local_square of zero");
  if (valuation(x, nu) & 1) return false;
  auto res = residue_field(k.prime_field_ptr(), nu);
  return is_square(*res, unit_residue(*res, x, nu));
}

/// True iff the monic polynomial f is a perfect square in F_p[t].
inline bool is_square_poly(const FpPoly& f) {
  if (f.is_zero()) return true;
  for (const auto& [g, m] : squarefree_decomposition(f.monic()))
    if (m & 1) return false;
  return is_square(f.field(), f.lead());
}

/// True iff x is in k^{x2} (0 counts as a square).
inline bool is_global_square(const RatFuncField& k, const RatFunc& x) {
  if (k.is_zero(x)) return true;
  return is_square_poly(x.num) && is_square_poly(x.den);
}

/// Squarefree part of a nonzero polynomial (leading coefficient kept).
inline FpPoly squarefree_part(const FpPoly& f) {
  FpPoly r = FpPoly::constant(f.field_ptr(), f.lead());
  for (const auto& [g, m] : squarefree_decomposition(f.monic()))
    if (m & 1) r *= g;
  return r;
}

/// Distinct places dividing a nonzero polynomial, canonical order.
inline std::vector<Place> places_dividing(const FpPoly& f) {
  std::vector<Place> out;
  if (f.degree() < 1) return out;
  for (const auto& [g, m] : factor(f).factors) out.push_back(Place::finite_unchecked(g));
  return out;
}

/// All finite places of degree <= n, canonical order.
inline std::vector<Place> places_up_to_degree(const std::shared_ptr<const PrimeField>& fp, int n) {
  std::vector<Place> out;
  for (int d = 1; d <= n; ++d)
    for (auto& g : IrreducibleStream<PrimeField>(fp, d).all()) out.push_back(Place::finite_unchecked(std::move(g)));
  return out;
}

}  // namespace dp4
