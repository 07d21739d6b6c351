#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "dp4/etale.hpp"
#include "dp4/family.hpp"
#include "dp4/funcfield.hpp"
#include "dp4/quadform.hpp"

// Obstruction conditions on D, the local invariant table and the certificate
// JSON format.

namespace dp4 {

class precondition_violation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class malformed_certificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Condition {
  std::string id;
  std::string statement;
  bool verdict = false;
  std::optional<Place> witness;
};

struct TableEntry {
  std::string place;
  std::string value;  // "0" or "1/2"
  std::string justification;
};

struct Certificate {
  int schema = 1;
  std::uint32_t p = 0;
  std::optional<std::uint32_t> alpha;
  Variant variant = Variant::PGt3;
  FpPoly D;
  RatFunc d;
  std::vector<Condition> conditions;
  std::vector<TableEntry> table;
  bool valid = false;
};

/// Table sum in halves.
inline int table_sum_halves(const std::vector<TableEntry>& table) {
  int s = 0;
  for (const auto& e : table) s += e.value == "1/2" ? 1 : 0;
  return s;
}

/// Per-family data independent of D: eps3, its verdicts at the places
/// dividing xi(t+1), and the D-independent auxiliary conditions.
class FamilyContext {
 public:
  static std::shared_ptr<const FamilyContext> make(std::uint32_t p, std::optional<std::uint32_t> alpha = std::nullopt) {
    return std::shared_ptr<const FamilyContext>(new FamilyContext(p, alpha));
  }

  const std::shared_ptr<const RatFuncField>& field() const { return k_; }
  std::uint32_t p() const { return p_; }
  std::uint32_t alpha() const { return params_.alpha; }
  Variant variant() const { return params_.variant; }
  std::optional<std::uint32_t> alpha_opt() const {
    return variant() == Variant::PGt3 ? std::optional<std::uint32_t>(alpha()) : std::nullopt;
  }
  const KPoly& f3() const { return f3_; }
  const std::shared_ptr<const Algebra>& algebra() const { return A_; }
  const AlgebraElem& eps3() const { return eps3_; }
  const FpPoly& xi() const { return xi_; }
  const std::vector<Place>& xi_places() const { return xi_places_; }
  bool eps3_square_at_xi(std::size_t i) const { return eps3_xi_[i]; }
  bool eps3_square_at_t1() const { return eps3_t1_; }
  const std::vector<Condition>& aux() const { return aux_; }
  bool small_prime_variant() const { return p_ == 7 || p_ == 11; }

  bool eps3_square_at(const Place& nu) const { return tester_->is_square_at(nu); }

  /// d = D/(alpha t (t+1)) for p > 3, d = D t for p = 3.
  RatFunc d_from_D(const FpPoly& D) const {
    const RatFuncField& k = *k_;
    RatFunc Dk = k.from_poly(D), t = k.t();
    if (variant() == Variant::PEq3) return k.mul(Dk, t);
    return k.div(Dk, k.mul(params_.alpha_elem(), k.mul(t, k.add(t, k.one()))));
  }

  FamilyParams params_for(const RatFunc& d) const {
    FamilyParams P = params_;
    P.d = d;
    return P;
  }

 private:
  FamilyContext(std::uint32_t p, std::optional<std::uint32_t> alpha) : p_(p) {
    k_ = RatFuncField::make(p);
    params_ = make_params(p, alpha, k_->one(), k_);
    DisplayedForms D = displayed_forms(params_);
    Pencil pen = build_family(params_);
    KPoly q = quadratic_factor(k_);
    f3_ = exact_div(pen.f, q).monic();
    EpsilonInvariant e3 = epsilon_invariant(pen, f3_);
    A_ = e3.field;
    eps3_ = e3.value;
    tester_ = std::make_shared<const LocalSquareTester>(A_, eps3_);
    xi_ = D.xi;
    xi_places_ = places_dividing(xi_);
    for (const auto& nu : xi_places_) eps3_xi_.push_back(eps3_square_at(nu));
    eps3_t1_ = eps3_square_at(Place::finite(t_plus_one(*k_)));
    build_aux(pen);
  }

  void build_aux(const Pencil& pen) {
    const RatFuncField& k = *k_;
    const Place pt = Place::finite(k.poly_t()), inf = Place::infinity();
    const RatFunc sym = variant() == Variant::PGt3 ? params_.alpha_elem() : k.from_int(2);
    const std::string s = variant() == Variant::PGt3 ? "alpha" : "2";
    aux_.push_back({"symbol-t", "(" + s + ", t)_t = -1", hilbert(k, sym, k.t(), pt) == Sign::Minus, pt});
    aux_.push_back({"symbol-inf", "(" + s + ", t)_inf = -1", hilbert(k, sym, k.t(), inf) == Sign::Minus, inf});
    // Q_inf = hyperbolic plane + rank 3 form
    KMatrix H = submatrix<RatFuncField>(pen.Minf, {0, 1});
    KMatrix C = submatrix<RatFuncField>(pen.Minf, {2, 3, 4});
    Condition c{"no-lines-inf", "V(Q_inf) has no k_nu-rational line for nu in {t, inf}", true, std::nullopt};
    for (const auto& nu : {pt, inf}) {
      if (line_on_rank5_local(k, H, C, nu)) {
        c.verdict = false;
        c.witness = nu;
        break;
      }
    }
    aux_.push_back(c);
    if (variant() == Variant::PEq3) {
      Condition x{"xi", "eps3 is a square in k_nu (x) k(theta) for every nu | xi", true, std::nullopt};
      for (std::size_t i = 0; i < xi_places_.size(); ++i)
        if (!eps3_xi_[i]) {
          x.verdict = false;
          x.witness = xi_places_[i];
          break;
        }
      aux_.push_back(x);
    }
  }

  std::uint32_t p_;
  std::shared_ptr<const RatFuncField> k_;
  FamilyParams params_;
  KPoly f3_;
  std::shared_ptr<const Algebra> A_;
  AlgebraElem eps3_;
  std::shared_ptr<const LocalSquareTester> tester_;
  FpPoly xi_;
  std::vector<Place> xi_places_;
  std::vector<bool> eps3_xi_;
  bool eps3_t1_ = false;
  std::vector<Condition> aux_;
};

/// Boundary values of b in O_t for the line check at t.
inline std::vector<RatFunc> default_b_samples(const RatFuncField& k) {
  std::vector<RatFunc> out{k.zero(), k.one(), k.from_int(-1), k.t(), k.add(k.t(), k.from_int(2)),
                           k.add(k.mul(k.from_int(2), k.powi(k.t(), 2)), k.one())};
  return out;
}

/// True iff V(b Q_0 + Q_inf) has no k_t-rational line, via the hyperbolic
/// plane + conic decomposition on coordinates {0,1} and {2,3,4}.
inline bool no_line_at_t(const Pencil& pen, const RatFunc& b) {
  const RatFuncField& k = *pen.k;
  KMatrix M = lincomb(k, b, pen.M0, k.one(), pen.Minf);
  KMatrix H = submatrix<RatFuncField>(M, {0, 1});
  KMatrix C = submatrix<RatFuncField>(M, {2, 3, 4});
  return !line_on_rank5_local(k, H, C, Place::finite(k.poly_t()));
}

inline void check_D_preconditions(const FamilyContext& ctx, const FpPoly& D) {
  if (D.degree() < 1) throw precondition_violation("D must be a nonconstant polynomial");
  FpPoly m = D.monic();
  if (!is_irreducible(m)) throw precondition_violation("D = " + D.to_string("t") + " is not irreducible");
  const RatFuncField& k = *ctx.field();
  if (m == k.poly_t() || m == t_plus_one(k)) throw precondition_violation("D must differ from t and t+1");
  if ((ctx.xi() % m).is_zero()) throw precondition_violation("D divides xi");
}

/// The main conditions on D (ids "1".."4"), without the auxiliary list.
inline std::vector<Condition> main_conditions(const FamilyContext& ctx, const FpPoly& D) {
  const RatFuncField& k = *ctx.field();
  const Place pD = Place::finite(D.monic());
  const Place pt = Place::finite(k.poly_t()), pt1 = Place::finite(t_plus_one(k)), inf = Place::infinity();
  const RatFunc Dk = k.from_poly(D), t = k.t();
  std::vector<Condition> out;
  if (ctx.variant() == Variant::PGt3) {
    const RatFunc a = k.from_int(ctx.alpha());
    out.push_back({"1", "eps3 is a square in k_D (x) k(theta)", ctx.eps3_square_at(pD), pD});
    out.push_back({"2", "alpha*D is a square in k_t", is_local_square(k, k.mul(a, Dk), pt), pt});
    const bool c3 = D.degree() % 2 == 1 && k.prime_field().equal(D.lead(), k.prime_field().from_int(-1));
    out.push_back({"3", "D has odd degree and leading coefficient -1", c3, inf});
    if (!ctx.small_prime_variant()) {
      Condition c{"4", "for every nu | xi(t+1): D is a square in k_nu or eps3 is a square in k_nu (x) k(theta)", true,
                  std::nullopt};
      for (std::size_t i = 0; i <= ctx.xi_places().size() && c.verdict; ++i) {
        const bool last = i == ctx.xi_places().size();
        const Place& nu = last ? pt1 : ctx.xi_places()[i];
        const bool e = last ? ctx.eps3_square_at_t1() : ctx.eps3_square_at_xi(i);
        if (!e && !is_local_square(k, Dk, nu)) {
          c.verdict = false;
          c.witness = nu;
        }
      }
      out.push_back(c);
    } else {
      Condition c{"4", "eps3 is a square in k_nu (x) k(theta) for every nu | xi, and D is a square in k_{t+1}", true,
                  std::nullopt};
      for (std::size_t i = 0; i < ctx.xi_places().size() && c.verdict; ++i)
        if (!ctx.eps3_square_at_xi(i)) {
          c.verdict = false;
          c.witness = ctx.xi_places()[i];
        }
      if (c.verdict && !is_local_square(k, Dk, pt1)) {
        c.verdict = false;
        c.witness = pt1;
      }
      out.push_back(c);
    }
  } else {
    const RatFunc d = ctx.d_from_D(D), dt = k.mul(d, t);
    out.push_back({"1", "d is a square in k_inf", is_local_square(k, d, inf), inf});
    out.push_back({"2", "d*t is a square in k_{t+1}", is_local_square(k, dt, pt1), pt1});
    out.push_back({"3", "d*t is a square in k_t", is_local_square(k, dt, pt), pt});
    out.push_back({"4", "eps3 is a square in k_nu (x) k(theta) for every nu | d, nu != t", ctx.eps3_square_at(pD), pD});
  }
  return out;
}

inline std::vector<TableEntry> invariant_table(const FamilyContext& ctx, const FpPoly& D) {
  const bool big = ctx.variant() == Variant::PGt3;
  std::vector<TableEntry> t;
  t.push_back({"t", "1/2", big ? "conditions 2, symbol-t, no-lines-t" : "conditions 3, symbol-t, no-lines-t"});
  t.push_back({"inf", "0", big ? "condition 3, no-lines-inf" : "condition 1, no-lines-inf"});
  t.push_back({D.monic().to_string("t"), "0", big ? "condition 1" : "condition 4"});
  t.push_back({"t+1", "0", big ? "condition 4" : "condition 2"});
  for (const auto& nu : ctx.xi_places()) t.push_back({nu.to_string(), "0", big ? "condition 4" : "xi"});
  t.push_back({"*", "0", "good reduction outside S_d"});
  return t;
}

/// All conditions for D and, when they hold, the invariant table.
inline Certificate check_conditions(const FamilyContext& ctx, const FpPoly& D) {
  check_D_preconditions(ctx, D);
  const RatFuncField& k = *ctx.field();
  Certificate cert;
  cert.p = ctx.p();
  cert.alpha = ctx.alpha_opt();
  cert.variant = ctx.variant();
  cert.D = D;
  cert.d = ctx.d_from_D(D);
  cert.conditions = main_conditions(ctx, D);
  for (const auto& c : ctx.aux()) cert.conditions.push_back(c);
  {
    Pencil pen = build_family(ctx.params_for(cert.d));
    Condition c{"no-lines-t", "V(bQ_0 + Q_inf) has no k_t-rational line for the sampled b in O_t", true, std::nullopt};
    for (const auto& b : default_b_samples(k))
      if (!no_line_at_t(pen, b)) {
        c.verdict = false;
        c.witness = Place::finite(k.poly_t());
        break;
      }
    cert.conditions.push_back(c);
  }
  bool all = true;
  for (auto& c : cert.conditions) {
    if (c.verdict) c.witness.reset();
    all = all && c.verdict;
  }
  if (all) cert.table = invariant_table(ctx, D);
  cert.valid = all && table_sum_halves(cert.table) == 1;
  return cert;
}

inline Certificate check_conditions(std::uint32_t p, std::optional<std::uint32_t> alpha, const FpPoly& D) {
  return check_conditions(*FamilyContext::make(p, alpha), D);
}

/// Non-isomorphism of X_d for distinct D: D1 D2 and -t D1 D2 are nonsquares in k.
inline bool distinct_check(const RatFuncField& k, const FpPoly& D1, const FpPoly& D2) {
  if (D1.monic() == D2.monic()) throw precondition_violation("distinct_check needs distinct D");
  if (!is_irreducible(D1.monic()) || !is_irreducible(D2.monic()))
    throw precondition_violation("distinct_check needs irreducible D");
  RatFunc x = k.from_poly(D1 * D2);
  return !is_global_square(k, x) && !is_global_square(k, k.neg(k.mul(k.t(), x)));
}

// ---------------------------------------------------------------------------
// JSON.

inline nlohmann::ordered_json to_json(const Certificate& c, const RatFuncField& k) {
  nlohmann::ordered_json j;
  j["schema"] = c.schema;
  j["p"] = c.p;
  j["alpha"] = c.alpha ? nlohmann::ordered_json(*c.alpha) : nlohmann::ordered_json(nullptr);
  j["variant"] = to_string(c.variant);
  j["D"] = c.D.to_string("t");
  j["d"] = k.to_string(c.d);
  j["conditions"] = nlohmann::ordered_json::array();
  for (const auto& x : c.conditions) {
    nlohmann::ordered_json e{{"id", x.id}, {"statement", x.statement}, {"verdict", x.verdict}};
    if (x.witness) e["witness_place"] = x.witness->to_string();
    j["conditions"].push_back(e);
  }
  j["invariant_table"] = nlohmann::ordered_json::array();
  for (const auto& e : c.table)
    j["invariant_table"].push_back({{"place", e.place}, {"value", e.value}, {"justification", e.justification}});
  j["valid"] = c.valid;
  return j;
}

/// Parses a certificate; throws malformed_certificate on schema violations.
template <class Json>
Certificate certificate_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw malformed_certificate("certificate must be a JSON object");
    for (const char* key : {"schema", "p", "alpha", "variant", "D", "d", "conditions", "invariant_table", "valid"})
      if (!j.contains(key)) throw malformed_certificate(std::string("missing field '") + key + "'");
    Certificate c;
    c.schema = j.at("schema").template get<int>();
    if (c.schema != 1) throw malformed_certificate("unsupported schema " + std::to_string(c.schema));
    c.p = j.at("p").template get<std::uint32_t>();
    auto k = RatFuncField::make(c.p);
    if (!j.at("alpha").is_null()) c.alpha = j.at("alpha").template get<std::uint32_t>();
    const auto v = j.at("variant").template get<std::string>();
    if (v != "p-gt-3" && v != "p-eq-3") throw malformed_certificate("unknown variant '" + v + "'");
    c.variant = v == "p-gt-3" ? Variant::PGt3 : Variant::PEq3;
    c.D = parse_poly(*k, j.at("D").template get<std::string>());
    c.d = parse_ratfunc(*k, j.at("d").template get<std::string>());
    for (const auto& e : j.at("conditions")) {
      Condition x;
      x.id = e.at("id").template get<std::string>();
      x.statement = e.at("statement").template get<std::string>();
      x.verdict = e.at("verdict").template get<bool>();
      if (e.contains("witness_place")) x.witness = parse_place(*k, e.at("witness_place").template get<std::string>());
      c.conditions.push_back(std::move(x));
    }
    for (const auto& e : j.at("invariant_table")) {
      TableEntry t{e.at("place").template get<std::string>(), e.at("value").template get<std::string>(),
                   e.at("justification").template get<std::string>()};
      if (t.value != "0" && t.value != "1/2") throw malformed_certificate("invariant value must be 0 or 1/2");
      c.table.push_back(std::move(t));
    }
    c.valid = j.at("valid").template get<bool>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw malformed_certificate(e.what());
  } catch (const std::invalid_argument& e) {
    throw malformed_certificate(e.what());
  }
}

struct RecheckOutcome {
  bool valid = false;       // recomputed certificate is valid
  bool consistent = false;  // stored fields agree with the recomputation
  std::vector<std::string> mismatches;
  Certificate recomputed;
};

/// Recomputes the certificate from (p, alpha, D) and compares it with the stored one.
inline RecheckOutcome recheck(const Certificate& stored) {
  if (stored.p == 3 && stored.alpha) throw malformed_certificate("alpha must be null for p = 3");
  if ((stored.p == 3) != (stored.variant == Variant::PEq3)) throw malformed_certificate("variant does not match p");
  RecheckOutcome out;
  auto ctx = FamilyContext::make(stored.p, stored.alpha);
  const RatFuncField& k = *ctx->field();
  try {
    out.recomputed = check_conditions(*ctx, stored.D);
  } catch (const precondition_violation& e) {
    out.mismatches.push_back(e.what());
    return out;
  }
  const Certificate& r = out.recomputed;
  out.valid = r.valid;
  if (!k.equal(r.d, stored.d)) out.mismatches.push_back("d differs: recomputed " + k.to_string(r.d));
  if (r.conditions.size() != stored.conditions.size()) {
    out.mismatches.push_back("condition count differs");
  } else {
    for (std::size_t i = 0; i < r.conditions.size(); ++i) {
      const auto &a = r.conditions[i], &b = stored.conditions[i];
      if (a.id != b.id || a.verdict != b.verdict)
        out.mismatches.push_back("condition " + a.id + " differs (recomputed " + (a.verdict ? "true" : "false") + ")");
    }
  }
  if (r.table.size() != stored.table.size()) {
    out.mismatches.push_back("invariant table differs");
  } else {
    for (std::size_t i = 0; i < r.table.size(); ++i)
      if (r.table[i].place != stored.table[i].place || r.table[i].value != stored.table[i].value)
        out.mismatches.push_back("invariant table entry " + r.table[i].place + " differs");
  }
  if (r.valid != stored.valid) out.mismatches.push_back("valid flag differs");
  out.consistent = out.mismatches.empty();
  return out;
}

}  // namespace dp4
