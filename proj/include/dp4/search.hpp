#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

#include "dp4/certificate.hpp"
#include "dp4/factor.hpp"

// Enumeration of D satisfying the obstruction conditions.

namespace dp4 {

struct SearchOptions {
  int min_degree = 1;
  int max_degree = 1;
  unsigned jobs = 1;
  std::size_t limit = 0;  // 0: no limit
  u128 chunk = 2048;      // candidate indices per worker per round
};

struct SearchStats {
  u128 candidates = 0;
  u128 irreducible = 0;
  u128 passed_filters = 0;
};

struct SearchResult {
  std::vector<Certificate> found;
  SearchStats stats;
};

namespace detail {

/// Conditions decided by residues in F_p at degree-1 places and the parity
/// and leading coefficient of D; avoids the irreducibility test and eps3 work
/// for most candidates.
inline bool cheap_filter(const FamilyContext& ctx, const FpPoly& D) {
  const RatFuncField& k = *ctx.field();
  const PrimeField& F = k.prime_field();
  const auto D0 = D.eval(F.zero()), Dm1 = D.eval(F.from_int(-1));
  if (F.is_zero(D0) || F.is_zero(Dm1)) return false;
  if (ctx.variant() == Variant::PEq3) {
    // d = Dt: square at inf, dt = D t^2 square at t and t+1
    if (D.degree() % 2 == 0 || !F.is_one(D.lead())) return false;
    return is_square(F, D0) && is_square(F, Dm1);
  }
  if (!is_square(F, F.mul(F.from_int(ctx.alpha()), D0))) return false;
  if (ctx.small_prime_variant()) {
    for (std::size_t i = 0; i < ctx.xi_places().size(); ++i)
      if (!ctx.eps3_square_at_xi(i)) return false;
    return is_square(F, Dm1);
  }
  if (!ctx.eps3_square_at_t1() && !is_square(F, Dm1)) return false;
  return true;
}

/// D from the index-th monic candidate of degree n.
inline FpPoly candidate_D(const FamilyContext& ctx, const IrreducibleStream<PrimeField>& s, u128 index) {
  FpPoly g = s.candidate(index);
  if (ctx.variant() == Variant::PGt3) g = g.scale(ctx.field()->prime_field().from_int(-1));
  return g;
}

struct Hit {
  u128 index;
  Certificate cert;
};

inline void scan_range(const FamilyContext& ctx, const IrreducibleStream<PrimeField>& s, u128 lo, u128 hi,
                       std::vector<Hit>& out, SearchStats& st) {
  const RatFuncField& k = *ctx.field();
  for (u128 i = lo; i < hi; ++i) {
    ++st.candidates;
    FpPoly D = candidate_D(ctx, s, i);
    if (!cheap_filter(ctx, D)) continue;
    FpPoly m = D.monic();
    if (!is_irreducible(m)) continue;
    ++st.irreducible;
    if (m == k.poly_t() || m == t_plus_one(k) || (ctx.xi() % m).is_zero()) continue;
    ++st.passed_filters;
    const Place pD = Place::finite(m);
    if (!ctx.eps3_square_at(pD)) continue;
    Certificate c = check_conditions(ctx, D);
    if (c.valid) out.push_back({i, std::move(c)});
  }
}

}  // namespace detail

/// Valid D in order of degree, then candidate index. Odd degrees only for
/// p > 3, with D = -(monic irreducible); monic D for p = 3. The result does
/// not depend on the number of jobs.
inline SearchResult search_D(const FamilyContext& ctx, const SearchOptions& opt,
                             const std::function<void(const Certificate&)>& on_found = nullptr) {
  if (opt.max_degree < 1) throw std::invalid_argument("max_degree must be >= 1");
  const unsigned jobs = std::max(1u, opt.jobs);
  SearchResult res;
  for (int n = std::max(1, opt.min_degree); n <= opt.max_degree; ++n) {
    if (n % 2 == 0) continue;  // both variants need odd degree (d at infinity)
    IrreducibleStream<PrimeField> s(ctx.field()->prime_field_ptr(), n);
    const u128 end = s.size();
    const u128 round = opt.chunk * jobs;
    for (u128 base = 0; base < end; base += round) {
      const u128 top = std::min(end, base + round);
      std::vector<std::vector<detail::Hit>> hits(jobs);
      std::vector<SearchStats> stats(jobs);
      const u128 span = (top - base + jobs - 1) / jobs;
      auto work = [&](unsigned w) {
        const u128 lo = std::min(top, base + span * w), hi = std::min(top, lo + span);
        detail::scan_range(ctx, s, lo, hi, hits[w], stats[w]);
      };
      if (jobs == 1) {
        work(0);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
      }
      for (unsigned w = 0; w < jobs; ++w) {
        res.stats.candidates += stats[w].candidates;
        res.stats.irreducible += stats[w].irreducible;
        res.stats.passed_filters += stats[w].passed_filters;
        for (auto& h : hits[w]) {
          if (opt.limit && res.found.size() >= opt.limit) return res;
          if (on_found) on_found(h.cert);
          res.found.push_back(std::move(h.cert));
        }
      }
      if (opt.limit && res.found.size() >= opt.limit) return res;
    }
  }
  return res;
}

}  // namespace dp4
