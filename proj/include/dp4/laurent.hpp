#pragma once

#include <algorithm>
#include <climits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dp4/funcfield.hpp"

// Completions k_nu of F_p(t) as truncated Laurent series in a uniformizer pi
// over the residue field F_q (q = p^{deg nu}). In equal characteristic the
// residue field embeds canonically, so series coefficients are residue-field
// elements; t itself expands as a + c1*pi + c2*pi^2 + ...

namespace dp4 {

/// Thrown when an operation needs a coefficient beyond the known precision.
/// Callers recover by recomputing at higher precision (see with_precision_retry).
class precision_exhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown for configurations needing wild ramification (e divisible by p).
class wild_ramification : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxPrecision = 512;

/// Runs fn(precision), doubling on precision_exhausted up to kMaxPrecision.
template <class Fn>
auto with_precision_retry(int start, Fn&& fn) {
  int prec = std::max(start, 4);
  for (;;) {
    try {
      return fn(prec);
    } catch (const precision_exhausted&) {
      if (prec >= kMaxPrecision) throw;
      prec = std::min(2 * prec, kMaxPrecision);
    }
  }
}

/// sum_i c[i] pi^{val+i} + O(pi^abs). A series with no stored coefficients
/// is zero to precision abs; the exact zero has abs == kExact.
struct LaurentSeries {
  static constexpr int kExact = INT_MAX / 4;
  int val = kExact;
  int abs = kExact;
  std::vector<GF::Elem> c;

  bool is_exact_zero() const { return abs == kExact; }
  bool known_zero() const { return c.empty(); }
  int relative_precision() const { return abs - val; }
};

class LocalField {
 public:
  using Elem = LaurentSeries;
  using Coef = GF::Elem;

  LocalField(std::shared_ptr<const RatFuncField> k, Place nu, int precision)
      : k_(std::move(k)), nu_(std::move(nu)), prec_(precision) {
    if (precision < 1) throw std::invalid_argument("local precision must be positive");
    res_ = residue_field(k_->prime_field_ptr(), nu_);
    if (!nu_.is_infinite()) build_t_expansion();
  }

  const Place& place() const { return nu_; }
  const GF& residue() const { return *res_; }
  const std::shared_ptr<const GF>& residue_ptr() const { return res_; }
  const RatFuncField& global() const { return *k_; }
  const std::shared_ptr<const RatFuncField>& global_ptr() const { return k_; }
  int precision() const { return prec_; }
  std::uint32_t characteristic() const { return k_->characteristic(); }

  // -- constructors --------------------------------------------------------

  Elem zero() const { return Elem{}; }
  Elem one() const { return constant(res_->one()); }
  Elem from_int(std::int64_t v) const { return constant(res_->from_int(v)); }
  Elem constant(const Coef& a) const {
    if (res_->is_zero(a)) return zero();
    Elem e{0, prec_, std::vector<Coef>(prec_, res_->zero())};
    e.c[0] = a;
    return e;
  }
  /// pi^n with relative precision prec.
  Elem pi_pow(int n) const {
    Elem e = one();
    e.val += n;
    e.abs += n;
    return e;
  }
  /// Series with given valuation and leading digits; remaining digits zero.
  Elem from_digits(int val, std::vector<Coef> digits) const {
    digits.resize(prec_, res_->zero());
    Elem e{val, val + prec_, std::move(digits)};
    normalize(e);
    return e;
  }

  /// Image of x in k_nu with relative precision `precision()`.
  Elem complete(const RatFunc& x) const {
    if (k_->is_zero(x)) return zero();
    if (nu_.is_infinite()) return div(complete_poly_at_infinity(x.num), complete_poly_at_infinity(x.den));
    const FpPoly& q = nu_.poly();
    auto strip = [&](FpPoly f, int& v) {
      v = 0;
      for (;;) {
        auto [quo, rem] = divmod(f, q);
        if (!rem.is_zero()) return f;
        f = std::move(quo);
        ++v;
      }
    };
    int vn = 0, vd = 0;
    FpPoly n0 = strip(x.num, vn), d0 = strip(x.den, vd);
    return shift(div(horner(n0), horner(d0)), vn - vd);
  }

  // -- field operations ------------------------------------------------------

  Elem add(const Elem& a, const Elem& b) const {
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    const int abs = std::min(a.abs, b.abs);
    const int v = std::min(a.val, b.val);
    Elem r{v, abs, {}};
    if (v >= abs) {
      r.val = abs;
      return r;
    }
    r.c.resize(abs - v);
    for (int e = v; e < abs; ++e) r.c[e - v] = res_->add(digit_or_zero(a, e), digit_or_zero(b, e));
    normalize(r);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& x : r.c) x = res_->neg(x);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem mul(const Elem& a, const Elem& b) const {
    if (a.is_exact_zero() || b.is_exact_zero()) return zero();
    const int val = a.val + b.val;
    const int abs = std::min(a.val + b.abs, b.val + a.abs);
    Elem r{val, abs, {}};
    const int n = abs - val;
    if (n <= 0 || a.c.empty() || b.c.empty()) {
      r.val = abs;
      return r;
    }
    r.c.assign(n, res_->zero());
    const int na = std::min<int>(n, a.c.size()), nb = std::min<int>(n, b.c.size());
    for (int i = 0; i < na; ++i) {
      if (res_->is_zero(a.c[i])) continue;
      for (int j = 0; j < nb && i + j < n; ++j) {
        if (res_->is_zero(b.c[j])) continue;
        r.c[i + j] = res_->add(r.c[i + j], res_->mul(a.c[i], b.c[j]));
      }
    }
    normalize(r);
    return r;
  }
  Elem inv(const Elem& a) const {
    if (a.is_exact_zero()) throw std::domain_error("inverse of zero in local field");
    if (a.c.empty()) throw precision_exhausted("inverse of an element that is zero to precision");
    const int n = int(a.c.size());
    std::vector<Coef> r(n, res_->zero());
    Coef i0 = res_->inv(a.c[0]);
    r[0] = i0;
    for (int k = 1; k < n; ++k) {
      Coef s = res_->zero();
      for (int j = 1; j <= k; ++j)
        if (!res_->is_zero(a.c[j])) s = res_->add(s, res_->mul(a.c[j], r[k - j]));
      r[k] = res_->neg(res_->mul(s, i0));
    }
    return Elem{-a.val, -a.val + n, std::move(r)};
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
  Elem scale(const Elem& a, const Coef& s) const {
    if (res_->is_zero(s)) return zero();
    Elem r = a;
    for (auto& x : r.c) x = res_->mul(x, s);
    return r;
  }
  /// Multiplication by pi^n.
  Elem shift(const Elem& a, int n) const {
    if (a.is_exact_zero()) return a;
    Elem r = a;
    r.val += n;
    r.abs += n;
    return r;
  }

  /// Zero to the known precision.
  bool is_zero(const Elem& a) const { return a.c.empty(); }
  bool is_one(const Elem& a) const { return is_zero(sub(a, one())); }
  bool equal(const Elem& a, const Elem& b) const { return is_zero(sub(a, b)); }
  int compare(const Elem& a, const Elem& b) const {
    if (a.val != b.val) return a.val < b.val ? -1 : 1;
    for (std::size_t i = 0; i < std::min(a.c.size(), b.c.size()); ++i) {
      int c = res_->compare(a.c[i], b.c[i]);
      if (c != 0) return c;
    }
    return 0;
  }

  // -- local data ------------------------------------------------------------

  int valuation(const Elem& a) const {
    if (a.is_exact_zero()) return kInfiniteValuation;
    if (a.c.empty()) throw precision_exhausted("valuation of an element that is zero to precision");
    return a.val;
  }
  /// Leading digit of a nonzero element (residue of a / pi^{v(a)}).
  Coef leading(const Elem& a) const {
    valuation(a);
    return a.c[0];
  }
  /// Coefficient of pi^e.
  Coef digit(const Elem& a, int e) const {
    if (a.is_exact_zero()) return res_->zero();
    if (e >= a.abs) throw precision_exhausted("digit beyond known precision");
    return digit_or_zero(a, e);
  }
  /// Residue of an integral element.
  Coef reduce(const Elem& a) const { return digit(a, 0); }

  std::string to_string(const Elem& a) const {
    if (a.is_exact_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      if (res_->is_zero(a.c[i])) continue;
      const int e = a.val + int(i);
      std::string cs = res_->to_string(a.c[i]);
      if (res_->is_compound(a.c[i])) cs = "(" + cs + ")";
      std::string term;
      if (e == 0)
        term = cs;
      else {
        std::string mono = e == 1 ? "pi" : "pi^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
        term = res_->is_one(a.c[i]) ? mono : cs + "*" + mono;
      }
      out += (out.empty() ? "" : " + ") + term;
    }
    out += (out.empty() ? "" : " + ") + std::string("O(pi^") + std::to_string(a.abs) + ")";
    return out;
  }
  bool is_compound(const Elem&) const { return true; }

 private:
  Coef digit_or_zero(const Elem& a, int e) const {
    if (e < a.val || e - a.val >= int(a.c.size())) return res_->zero();
    return a.c[e - a.val];
  }
  void normalize(Elem& e) const {
    std::size_t k = 0;
    while (k < e.c.size() && res_->is_zero(e.c[k])) ++k;
    if (k == e.c.size()) {
      e.c.clear();
      e.val = e.abs;
      return;
    }
    if (k > 0) {
      e.c.erase(e.c.begin(), e.c.begin() + long(k));
      e.val += int(k);
    }
  }

  /// Evaluates a polynomial over F_p at the expansion of t (relative precision prec).
  Elem horner(const FpPoly& f) const {
    Elem r = zero();
    for (int i = f.degree(); i >= 0; --i)
      r = add(mul(r, t_), constant(res_->from_base(f.coeffs()[i])));
    return r;
  }
  Elem complete_poly_at_infinity(const FpPoly& f) const {
    // f(t) = t^n sum_i f_i pi^{n-i} with pi = 1/t.
    const int n = f.degree();
    std::vector<Coef> d;
    for (int i = n; i >= 0 && int(d.size()) < prec_; --i) d.push_back(res_->from_base(f.coeffs()[i]));
    return from_digits(-n, std::move(d));
  }
  /// Newton iteration for T in F_q[[pi]] with q(T) = pi and T(0) = a.
  void build_t_expansion() {
    const FpPoly& q = nu_.poly();
    const FpPoly dq = q.derivative();
    t_ = constant(res_->generator());
    if (res_->is_zero(res_->generator())) t_ = Elem{0, prec_, std::vector<Coef>(prec_, res_->zero())};
    Elem pi = pi_pow(1);
    for (int it = 0; (1 << it) <= 2 * prec_ + 2; ++it) {
      Elem num = sub(horner(q), pi);
      if (num.c.empty()) break;
      t_ = sub(t_, div(num, horner(dq)));
    }
  }

  std::shared_ptr<const RatFuncField> k_;
  Place nu_;
  std::shared_ptr<const GF> res_;
  int prec_;
  Elem t_;
};

using LocalPoly = Poly<LocalField>;

/// True iff w is a square in k_nu: even valuation and square leading digit.
inline bool is_square_local(const LocalField& K, const LaurentSeries& w) {
  const int v = K.valuation(w);
  if (v == kInfiniteValuation) throw std::domain_error("is_square_local of zero");
  if (v & 1) return false;
  return is_square(K.residue(), K.leading(w));
}

/// Square root of a local square (Newton iteration on the unit part).
inline std::optional<LaurentSeries> sqrt_local(const LocalField& K, const LaurentSeries& w) {
  if (!is_square_local(K, w)) return std::nullopt;
  const int v = K.valuation(w);
  LaurentSeries u = K.shift(w, -v);
  auto s0 = sqrt(K.residue(), K.leading(w));
  LaurentSeries s = K.constant(*s0);
  const auto half = K.residue().inv(K.residue().from_int(2));
  for (int it = 0; (1 << it) <= 2 * u.relative_precision() + 2; ++it)
    s = K.scale(K.add(s, K.div(u, s)), half);
  return K.shift(s, v / 2);
}

}  // namespace dp4
