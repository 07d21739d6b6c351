// dp4: obstruction certificates for the quartic del Pezzo families X_d.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dp4/certificate.hpp"
#include "dp4/family.hpp"
#include "dp4/reference.hpp"
#include "dp4/search.hpp"
#include "json.hpp"

namespace {

using namespace dp4;
using ojson = nlohmann::ordered_json;

constexpr int kUsage = 2;

// thrown for bad flag values found after parsing
struct usage_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::optional<std::uint32_t> opt_alpha(const CLI::Option* o, std::uint32_t a) {
  if (o->count() == 0) return std::nullopt;
  return a;
}

void print_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t w = 0;
  for (const auto& [k, v] : rows) w = std::max(w, k.size());
  for (const auto& [k, v] : rows) std::cout << std::left << std::setw(static_cast<int>(w) + 2) << k << v << "\n";
}

std::string verdict(bool b) { return b ? "true" : "false"; }

void print_certificate(const Certificate& c, const RatFuncField& k) {
  print_rows({{"p", std::to_string(c.p)},
              {"alpha", c.alpha ? std::to_string(*c.alpha) : "-"},
              {"variant", to_string(c.variant)},
              {"D", c.D.to_string("t")},
              {"d", k.to_string(c.d)}});
  std::cout << "\nconditions\n";
  std::size_t w = 0;
  for (const auto& x : c.conditions) w = std::max(w, x.id.size());
  for (const auto& x : c.conditions) {
    std::cout << "  " << std::left << std::setw(static_cast<int>(w) + 2) << x.id << std::setw(7) << verdict(x.verdict)
              << x.statement;
    if (x.witness) std::cout << "  [witness " << x.witness->to_string() << "]";
    std::cout << "\n";
  }
  if (!c.table.empty()) {
    std::cout << "\ninvariant table\n";
    std::size_t pw = 5;
    for (const auto& e : c.table) pw = std::max(pw, e.place.size());
    for (const auto& e : c.table)
      std::cout << "  " << std::left << std::setw(static_cast<int>(pw) + 2) << e.place << std::setw(5) << e.value
                << e.justification << "\n";
    const int h = table_sum_halves(c.table);
    std::cout << "  sum = " << (h % 2 ? std::to_string(h) + "/2" : std::to_string(h / 2)) << "\n";
  }
  std::cout << "\n" << (c.valid ? "VALID" : "INVALID") << "\n";
}

// ---------------------------------------------------------------------------

int cmd_alpha(std::uint32_t p, bool json) {
  AlphaReport r = find_alpha(p);
  if (json) {
    ojson j{{"p", p},
            {"alpha", r.alpha},
            {"nonsquare", r.nonsquare},
            {"plus_one_square", r.plus_one_square},
            {"three_minus_nonzero", r.three_minus_nonzero},
            {"three_minus_nonsquare", r.three_minus_nonsquare},
            {"fallback", r.fallback}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  print_rows({{"p", std::to_string(p)},
              {"alpha", std::to_string(r.alpha)},
              {"(1) alpha nonsquare", verdict(r.nonsquare)},
              {"(2) alpha+1 square", verdict(r.plus_one_square)},
              {"(3) 3alpha-1 nonzero", verdict(r.three_minus_nonzero)},
              {"(4) 3alpha-1 nonsquare", verdict(r.three_minus_nonsquare)},
              {"rule", r.fallback ? "(1)-(3), eps3 square on xi" : "(1)-(4)"}});
  return 0;
}

int cmd_family(std::uint32_t p, std::optional<std::uint32_t> alpha, const std::string& dstr, bool json) {
  auto k = RatFuncField::make(p);
  RatFunc d;
  try {
    d = parse_ratfunc(*k, dstr);
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("--d: ") + e.what());
  }
  FamilyParams P;
  try {
    P = make_params(p, alpha, d, k);
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  InvariantsReport r;
  try {
    r = invariants(P);
  } catch (const closed_form_mismatch& e) {
    std::cerr << "mismatch: " << e.what() << "\n";
    return 1;
  }
  const Algebra &A2 = *r.eps2.field, &A3 = *r.eps3.field;
  std::vector<std::string> places, S;
  for (const auto& v : r.xi_places) places.push_back(v.to_string());
  for (const auto& v : r.S_d) S.push_back(v.to_string());
  if (json) {
    ojson j;
    j["p"] = p;
    j["alpha"] = P.variant == Variant::PGt3 ? ojson(P.alpha) : ojson(nullptr);
    j["variant"] = to_string(P.variant);
    j["d"] = k->to_string(d);
    j["f"] = r.f.to_string("x");
    j["c"] = k->to_string(r.c);
    j["f3"] = r.f3.to_string("x");
    j["Delta"] = k->to_string(r.Delta);
    j["Delta_f3"] = k->to_string(r.Delta_f3);
    j["xi"] = r.xi.to_string("t");
    j["xi_places"] = places;
    j["eps2"] = A2.to_string(r.eps2.value);
    j["eps3"] = A3.to_string(r.eps3.value);
    j["S_d"] = S;
    j["checks"] = ojson::array();
    for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    j["ok"] = r.all_ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::string xs, ss;
    for (const auto& s : places) xs += (xs.empty() ? "" : ", ") + s;
    for (const auto& s : S) ss += (ss.empty() ? "" : ", ") + s;
    print_rows({{"p", std::to_string(p)},
                {"alpha", P.variant == Variant::PGt3 ? std::to_string(P.alpha) : "-"},
                {"d", k->to_string(d)},
                {"f", r.f.to_string("x")},
                {"c", k->to_string(r.c)},
                {"f3", r.f3.to_string("x")},
                {"Delta", k->to_string(r.Delta)},
                {"Delta_f3", k->to_string(r.Delta_f3)},
                {"xi", r.xi.to_string("t")},
                {"xi places", xs},
                {"eps2 (x^2+t)", A2.to_string(r.eps2.value)},
                {"eps3 (f3)", A3.to_string(r.eps3.value)},
                {"S_d", ss}});
    std::cout << "\nchecks\n";
    for (const auto& c : r.checks)
      std::cout << "  " << (c.ok ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  }
  return r.all_ok() ? 0 : 1;
}

int cmd_verify(std::uint32_t p, bool residues, bool json) {
  if (p != 3 && p != 7 && p != 11) throw usage_error("--p must be 3, 7 or 11");
  ReferenceReport r = reference_report(p, residues);
  if (json) {
    ojson j;
    j["p"] = p;
    j["checks"] = ojson::array();
    for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    if (residues) j["residues"] = r.residues;
    j["ok"] = r.all_ok();
    std::cout << j.dump(2) << "\n";
  } else {
    std::size_t w = 0;
    for (const auto& c : r.checks) w = std::max(w, c.name.size());
    for (const auto& c : r.checks)
      std::cout << (c.ok ? "ok    " : "FAIL  ") << std::left << std::setw(static_cast<int>(w) + 2) << c.name
                << c.detail << "\n";
    if (residues) {
      std::cout << "\nresidues\n";
      for (const auto& s : r.residues) std::cout << "  " << s << "\n";
    }
    std::cout << "\n" << (r.all_ok() ? "all values reproduced" : "mismatch") << "\n";
  }
  return r.all_ok() ? 0 : 1;
}

int cmd_search(std::uint32_t p, std::optional<std::uint32_t> alpha, int min_deg, int max_deg, unsigned jobs,
               std::size_t limit, bool json) {
  if (max_deg < 1) throw usage_error("--max-degree must be >= 1");
  if (jobs < 1) throw usage_error("--jobs must be >= 1");
  std::shared_ptr<const FamilyContext> ctx;
  try {
    ctx = FamilyContext::make(p, alpha);
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const unsupported_characteristic*>(&e)) throw;
    throw usage_error(e.what());
  }
  const RatFuncField& k = *ctx->field();
  SearchOptions opt;
  opt.min_degree = min_deg;
  opt.max_degree = max_deg;
  opt.jobs = jobs;
  opt.limit = limit;
  auto emit = [&](const Certificate& c) {
    if (json) {
      std::cout << to_json(c, k).dump() << "\n";
    } else {
      std::cout << std::left << std::setw(4) << c.D.degree() << c.D.to_string("t") << "  d = " << k.to_string(c.d)
                << "\n";
    }
    std::cout.flush();
  };
  if (!json) std::cout << "deg D\n";
  SearchResult res = search_D(*ctx, opt, emit);
  if (!json) {
    if (res.found.empty()) std::cout << "none found up to degree " << max_deg << "\n";
    std::cout << "\n"
              << res.found.size() << " found; " << u128_to_string(res.stats.candidates) << " candidates, "
              << u128_to_string(res.stats.irreducible) << " irreducible\n";
  }
  return 0;
}

FpPoly parse_D(const RatFuncField& k, const std::string& s) {
  try {
    return parse_poly(k, s);
  } catch (const std::invalid_argument& e) {
    throw usage_error(std::string("--D: ") + e.what());
  }
}

Certificate certificate_for(std::uint32_t p, std::optional<std::uint32_t> alpha, const std::string& Ds,
                            std::shared_ptr<const FamilyContext>& ctx) {
  try {
    ctx = FamilyContext::make(p, alpha);
  } catch (const std::invalid_argument& e) {
    if (dynamic_cast<const unsupported_characteristic*>(&e)) throw;
    throw usage_error(e.what());
  }
  const FpPoly D = parse_D(*ctx->field(), Ds);
  try {
    return check_conditions(*ctx, D);
  } catch (const precondition_violation& e) {
    throw usage_error(e.what());
  }
}

int cmd_certify(std::uint32_t p, std::optional<std::uint32_t> alpha, const std::string& Ds, const std::string& out,
                bool json) {
  std::shared_ptr<const FamilyContext> ctx;
  Certificate c = certificate_for(p, alpha, Ds, ctx);
  const std::string text = to_json(c, *ctx->field()).dump(2) + "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw usage_error("cannot write " + out);
    f << text;
  }
  if (json || out.empty()) {
    if (json) std::cout << text;
    else print_certificate(c, *ctx->field());
  } else {
    std::cout << (c.valid ? "VALID" : "INVALID") << " certificate written to " << out << "\n";
  }
  return c.valid ? 0 : 1;
}

int cmd_table(std::uint32_t p, std::optional<std::uint32_t> alpha, const std::string& Ds, bool json) {
  std::shared_ptr<const FamilyContext> ctx;
  Certificate c = certificate_for(p, alpha, Ds, ctx);
  if (json) {
    std::cout << to_json(c, *ctx->field())["invariant_table"].dump(2) << "\n";
  } else if (c.table.empty()) {
    std::cout << "conditions fail; no invariant table\n";
    for (const auto& x : c.conditions)
      if (!x.verdict)
        std::cout << "  " << x.id << ": " << x.statement
                  << (x.witness ? "  [witness " + x.witness->to_string() + "]" : "") << "\n";
  } else {
    std::size_t pw = 5;
    for (const auto& e : c.table) pw = std::max(pw, e.place.size());
    std::cout << std::left << std::setw(static_cast<int>(pw) + 2) << "place" << std::setw(7) << "inv"
              << "justification\n";
    for (const auto& e : c.table)
      std::cout << std::left << std::setw(static_cast<int>(pw) + 2) << e.place << std::setw(7) << e.value
                << e.justification << "\n";
    std::cout << "sum = " << table_sum_halves(c.table) << "/2\n";
  }
  return c.valid ? 0 : 1;
}

int cmd_check(const std::string& file, bool json) {
  std::ifstream f(file);
  if (!f) {
    std::cerr << "cannot read " << file << "\n";
    return 2;
  }
  Certificate stored;
  RecheckOutcome r;
  try {
    ojson j = ojson::parse(f);
    stored = certificate_from_json(j);
    r = recheck(stored);
  } catch (const ojson::exception& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return 2;
  } catch (const malformed_certificate& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "malformed certificate: " << e.what() << "\n";
    return 2;
  }
  const bool ok = r.valid && r.consistent;
  if (json) {
    std::cout << ojson{{"valid", r.valid}, {"consistent", r.consistent}, {"mismatches", r.mismatches}}.dump(2)
              << "\n";
  } else {
    std::cout << "recomputed: " << (r.valid ? "VALID" : "INVALID") << "\n";
    std::cout << "stored fields: " << (r.consistent ? "consistent" : "inconsistent") << "\n";
    for (const auto& m : r.mismatches) std::cout << "  " << m << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Obstruction certificates for quartic del Pezzo surfaces over F_p(t)"};
  app.require_subcommand(1);

  std::uint32_t p = 0, alpha = 0;
  std::string dstr, Dstr, out, file;
  bool json = false, residues = false;
  int max_deg = 0, min_deg = 1;
  unsigned jobs = 1;
  std::size_t limit = 0;

  auto add_p = [&](CLI::App* s) { s->add_option("--p", p, "characteristic")->required(); };
  auto add_json = [&](CLI::App* s) { s->add_flag("--json", json, "JSON output"); };

  auto* a = app.add_subcommand("alpha", "alpha and its condition flags");
  add_p(a);
  add_json(a);

  auto* fam = app.add_subcommand("family", "invariants of X_d");
  add_p(fam);
  auto* fam_alpha = fam->add_option("--alpha", alpha, "alpha (default: find_alpha)");
  fam->add_option("--d", dstr, "d in F_p(t)")->required();
  add_json(fam);

  auto* ver = app.add_subcommand("verify-paper", "recompute the reference values for p = 3, 7, 11");
  add_p(ver);
  ver->add_flag("--residues", residues, "print residues at each omega");
  add_json(ver);

  auto* se = app.add_subcommand("search-d", "enumerate valid D");
  add_p(se);
  auto* se_alpha = se->add_option("--alpha", alpha, "alpha");
  se->add_option("--max-degree", max_deg, "largest degree of D")->required();
  se->add_option("--min-degree", min_deg, "smallest degree of D");
  se->add_option("--jobs", jobs, "worker threads");
  se->add_option("--limit", limit, "stop after this many (0: all)");
  add_json(se);

  auto* ce = app.add_subcommand("certify", "certificate for D");
  add_p(ce);
  auto* ce_alpha = ce->add_option("--alpha", alpha, "alpha");
  ce->add_option("--D", Dstr, "D in F_p[t]")->required();
  ce->add_option("--out", out, "write JSON here");
  add_json(ce);

  auto* ck = app.add_subcommand("check-cert", "recheck a certificate from scratch");
  ck->add_option("file", file, "certificate JSON")->required();
  add_json(ck);

  auto* tb = app.add_subcommand("table", "invariant table for D");
  add_p(tb);
  auto* tb_alpha = tb->add_option("--alpha", alpha, "alpha");
  tb->add_option("--D", Dstr, "D in F_p[t]")->required();
  add_json(tb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*a) return cmd_alpha(p, json);
    if (*fam) return cmd_family(p, opt_alpha(fam_alpha, alpha), dstr, json);
    if (*ver) return cmd_verify(p, residues, json);
    if (*se) return cmd_search(p, opt_alpha(se_alpha, alpha), min_deg, max_deg, jobs, limit, json);
    if (*ce) return cmd_certify(p, opt_alpha(ce_alpha, alpha), Dstr, out, json);
    if (*ck) return cmd_check(file, json);
    if (*tb) return cmd_table(p, opt_alpha(tb_alpha, alpha), Dstr, json);
  } catch (const unsupported_characteristic& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
