#include "permcount/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "permcount/counting.hpp"
#include "permcount/errors.hpp"
#include "permcount/oracle.hpp"

namespace permcount::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr long double kGaussTolerance = 1e-9L;

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Everything a command produces, rendered once at the end in the chosen format.
struct Output {
  Json results = Json::array();
  std::vector<Check> checks;
  std::vector<Timing> timings;
  std::optional<BigInt> total;
  std::vector<std::string> csv;   // header first
  std::vector<std::string> text;

  bool all_ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
  }
  void check(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

Json bound_json(const Bound& b) {
  return Json{{"lo", to_string(b.lo)}, {"hi", to_string(b.hi)}, {"exact", b.exact}, {"ok", b.ok}};
}

Json report_json(const PermanentReport& r) {
  Json j;
  j["route"] = r.route;
  j["d"] = r.d;
  j["N"] = bigint_to_json(r.n_value);
  if (r.c_minus1) j["c_minus1"] = bigint_to_json(*r.c_minus1);
  if (!r.c.empty()) {
    Json c = Json::array();
    for (const auto& v : r.c) c.push_back(bigint_to_json(v));
    j["c"] = std::move(c);
  }
  if (r.per_v) j["per_v"] = bigint_to_json(*r.per_v);
  if (r.permanent) j["permanent"] = to_json(*r.permanent);
  j["bound"] = bound_json(r.bound);
  return j;
}

std::string opt_str(const std::optional<BigInt>& v) { return v ? v->str() : ""; }

void add_report(Output& out, const FieldCtx& ctx, const PermanentReport& r) {
  out.results.push_back(report_json(r));
  out.csv.push_back(r.route + "," + std::to_string(r.d) + "," + r.n_value.str() + "," +
                    opt_str(r.c_minus1) + "," + (r.c.empty() ? "" : r.c[0].str()) + "," +
                    opt_str(r.per_v) + "," + to_string(r.bound.lo) + "," + to_string(r.bound.hi) +
                    "," + (r.bound.ok ? "true" : "false"));
  std::ostringstream t;
  t << "[" << r.route << "] N_" << ctx.q() << "(" << r.d << ") = " << r.n_value.str();
  if (r.c_minus1) t << "  c_{-1} = " << r.c_minus1->str() << "  c_0 = " << r.c[0].str();
  if (r.per_v) t << "  per(V) = " << r.per_v->str();
  t << "  bound [" << to_string(r.bound.lo) << ", " << to_string(r.bound.hi) << "]"
    << (r.bound.ok ? " ok" : " VIOLATED");
  out.text.push_back(t.str());
  if (r.permanent) out.text.push_back("  per(A) = " + to_string(ctx, *r.permanent));
  for (const auto& tm : r.timings) out.timings.push_back(tm);
}

FieldCtx make_field(const RunConfig& cfg, const std::string& text) {
  FieldSpec spec = parse_field_spec(text);
  if (!cfg.modulus.empty()) spec.modulus = parse_modulus(cfg.modulus);
  return build_field(spec);
}

// Runs the requested N_q(q-2) routes in ascending route-name order.
std::vector<PermanentReport> run_routes(const FieldCtx& ctx, const RunConfig& cfg, Output& out) {
  const auto& e = cfg.engine;
  std::vector<PermanentReport> reports;
  const bool all = cfg.route == "all";
  std::optional<PermanentReport> gr;
  if (all || cfg.route == "groupring") gr = count_deg_qm2(ctx, e);
  const PermanentReport* gr_ptr = gr ? &*gr : nullptr;
  if (all || cfg.route == "cyclotomic") reports.push_back(count_via_cyclotomic(ctx, e, gr_ptr));
  if (gr) reports.push_back(*gr);
  const bool partition_fits = ctx.q() - 1 <= e.max_bell;
  if (cfg.route == "partition" || (all && partition_fits)) {
    reports.push_back(count_via_partition(ctx, e, gr_ptr));
  }
  for (const auto& r : reports) {
    if (r.coefficient_sum_ok) out.check("coefficient_sum", *r.coefficient_sum_ok);
    if (r.per_v_identity_ok) out.check("per_v_identity_" + r.route, *r.per_v_identity_ok);
    out.check("bound_" + r.route, r.bound.ok);
  }
  if (reports.size() > 1) {
    const bool agree = std::all_of(reports.begin(), reports.end(), [&](const PermanentReport& r) {
      return r.n_value == reports.front().n_value;
    });
    out.check("route_agreement", agree);
  }
  return reports;
}

int cmd_count(const RunConfig& cfg, const FieldCtx& ctx, Output& out) {
  const std::uint32_t top = ctx.q() - 2;
  if (cfg.d && *cfg.d != top) {
    const std::uint32_t d = *cfg.d;
    if (d < 1 || d > top) throw InputError("--d must lie in [1, q-2]");
    const auto start = std::chrono::steady_clock::now();
    const BigInt total = factorial(ctx.q() - 1);
    BigInt above = count_deg_qm2(ctx, cfg.engine).n_value;
    BigInt n_value;
    BigInt g_value;
    for (std::uint32_t k = top; k-- > d;) {
      g_value = gq(ctx, k, cfg.engine);
      n_value = total - above - g_value;
      above += n_value;
    }
    out.timings.push_back({"multivariate", millis_since(start)});
    out.results.push_back(Json{{"route", "multivariate"},
                               {"d", d},
                               {"N", bigint_to_json(n_value)},
                               {"G", bigint_to_json(g_value)}});
    out.csv.push_back("route,d,N,G");
    out.csv.push_back("multivariate," + std::to_string(d) + "," + n_value.str() + "," +
                      g_value.str());
    out.text.push_back("[multivariate] N_" + std::to_string(ctx.q()) + "(" + std::to_string(d) +
                       ") = " + n_value.str() + "  G = " + g_value.str());
    out.check("non_negative", n_value >= 0);
    return out.all_ok() ? kOk : kCheckFailed;
  }

  out.csv.push_back("route,d,N,c_minus1,c0,per_v,bound_lo,bound_hi,bound_ok");
  for (const auto& r : run_routes(ctx, cfg, out)) add_report(out, ctx, r);
  return out.all_ok() ? kOk : kCheckFailed;
}

void add_table(Output& out, const CountTable& table) {
  out.csv.push_back("d,N_fixed0,N_lidl_mullen");
  const auto lm = table.lidl_mullen();
  for (const auto& [d, n] : table.entries) {
    out.results.push_back(Json{
        {"d", d}, {"N_fixed0", bigint_to_json(n)}, {"N_lidl_mullen", bigint_to_json(lm.at(d))}});
    out.csv.push_back(std::to_string(d) + "," + n.str() + "," + lm.at(d).str());
    out.text.push_back("N(" + std::to_string(d) + ") = " + n.str() + "   q*N = " + lm.at(d).str());
  }
  out.total = table.total();
  out.csv.push_back("total," + table.total().str() + "," + (table.total() * table.q).str());
  out.text.push_back("total = " + table.total().str());
}

void add_rule_checks(Output& out, const CountTable& table) {
  const auto bad = table.violations();
  for (const char* rule : {"sum_rule", "divisor_rule", "degree_one_rule", "non_negative"}) {
    out.check(rule, std::find(bad.begin(), bad.end(), rule) == bad.end());
  }
}

int cmd_table(const RunConfig& cfg, const FieldCtx& ctx, Output& out) {
  const auto start = std::chrono::steady_clock::now();
  const CountTable table = full_table(ctx, cfg.engine);
  out.timings.push_back({"table", millis_since(start)});
  add_table(out, table);
  add_rule_checks(out, table);
  return out.all_ok() ? kOk : kCheckFailed;
}

int cmd_verify(const RunConfig& cfg, const FieldCtx& ctx, Output& out) {
  OracleOptions oracle_opts{cfg.max_oracle, cfg.engine.threads};
  auto start = std::chrono::steady_clock::now();
  const CountTable oracle = brute_force_table(ctx, oracle_opts);
  out.timings.push_back({"oracle", millis_since(start)});

  // Identity failures become failed checks so the rest of the report still runs.
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const IdentityFailure& e) {
      out.check(name, false, e.what());
    }
  };

  guarded("routes", [&] {
    RunConfig all = cfg;
    all.route = "all";
    auto reports = run_routes(ctx, all, out);
    const BigInt& expected = oracle.entries.at(ctx.q() - 2);
    bool match = true;
    for (const auto& r : reports) match = match && r.n_value == expected;
    out.check("routes_match_oracle", match);
  });

  guarded("table", [&] {
    start = std::chrono::steady_clock::now();
    const CountTable table = full_table(ctx, cfg.engine);
    out.timings.push_back({"table", millis_since(start)});
    out.check("oracle_table_match", table == oracle);
    add_rule_checks(out, table);
    add_table(out, table);
  });

  guarded("multivariate_vs_oracle", [&] {
    bool ok = true;
    for (std::uint32_t d = 1; d + 2 <= ctx.q(); ++d) {
      std::vector<std::uint32_t> rows(ctx.q() - 1 - d);
      std::iota(rows.begin(), rows.end(), 1u);
      ok = ok && gq(ctx, d, cfg.engine) == count_restricted_solutions(ctx, rows, oracle_opts);
    }
    out.check("multivariate_vs_oracle", ok);
  });

  bool gauss_ok = true;
  for (const auto& g : gauss_sums(ctx)) {
    if (g.j == 0) {
      gauss_ok = gauss_ok && std::abs(g.value - std::complex<long double>(-1, 0)) < kGaussTolerance;
    } else {
      gauss_ok = gauss_ok && std::fabs(g.norm_sq - ctx.q()) < kGaussTolerance * ctx.q();
    }
  }
  out.check("gauss_sums", gauss_ok);
  return out.all_ok() ? kOk : kCheckFailed;
}

int cmd_bench(const RunConfig& cfg, Output& out, std::ostream& err) {
  out.csv.push_back("field,route,n,millis");
  bool refused = false;
  for (const auto& text : cfg.fields) {
    const FieldCtx ctx = make_field(cfg, text);
    if (ctx.q() < 3) throw InputError("bench needs q >= 3");
    const std::uint32_t n = ctx.q() - 1;
    auto time_route = [&](const std::string& route, auto&& body) {
      try {
        const auto start = std::chrono::steady_clock::now();
        body();
        const double ms = millis_since(start);
        out.results.push_back(Json{{"field", text}, {"route", route}, {"n", n}, {"millis", ms}});
        std::ostringstream row;
        row << text << "," << route << "," << n << "," << ms;
        out.csv.push_back(row.str());
        out.text.push_back(row.str());
        out.timings.push_back({text + "/" + route, ms});
      } catch (const GuardError& e) {
        refused = true;
        err << "bench: " << text << " " << route << " refused: " << e.what() << "\n";
      }
    };
    const auto& e = cfg.engine;
    time_route("naive", [&] { (void)permanent_naive(build_matrix_A(ctx, 1), e.max_naive); });
    time_route("ryser", [&] {
      (void)permanent_ryser(build_matrix_A(ctx, 1), {e.max_ryser, e.threads});
    });
    time_route("cyclotomic", [&] {
      (void)permanent_ryser(build_matrix_V(ctx), {e.max_ryser, e.threads});
    });
    time_route("partition", [&] { (void)per_v_partition(ctx, e.max_bell); });
  }
  return refused ? kGuard : kOk;
}

void render(const RunConfig& cfg, const FieldCtx* ctx, const Output& out, std::ostream& os) {
  if (cfg.format == "json") {
    Json doc;
    doc["q"] = ctx ? Json(ctx->q()) : Json(nullptr);
    doc["p"] = ctx ? Json(ctx->p()) : Json(nullptr);
    doc["r"] = ctx ? Json(ctx->r()) : Json(nullptr);
    doc["command"] = cfg.command;
    doc["results"] = out.results;
    if (out.total) doc["total"] = bigint_to_json(*out.total);
    Json checks = Json::array();
    for (const auto& c : out.checks) checks.push_back(Json{{"name", c.name}, {"ok", c.ok}});
    doc["checks"] = std::move(checks);
    Json timings = Json::array();
    for (const auto& t : out.timings) {
      timings.push_back(Json{{"label", t.label}, {"millis", t.millis}});
    }
    doc["timings"] = std::move(timings);
    os << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    for (const auto& line : out.csv) os << line << "\n";
  } else {
    if (ctx) os << "F_" << ctx->q() << " (" << to_string(ctx->spec()) << ")\n";
    for (const auto& line : out.text) os << line << "\n";
    for (const auto& c : out.checks) {
      os << (c.ok ? "[ok]   " : "[FAIL] ") << c.name;
      if (!c.detail.empty()) os << ": " << c.detail;
      os << "\n";
    }
  }
}

void add_common_options(CLI::App* sub, RunConfig& cfg, bool many_fields) {
  if (many_fields) {
    sub->add_option("--field", cfg.fields, "Field specs: p, p^r or p^r:c_r,...,c_0")->required();
  } else {
    sub->add_option("--field", cfg.fields, "Field spec: p, p^r or p^r:c_r,...,c_0")
        ->required()
        ->expected(1);
  }
  sub->add_option("--modulus", cfg.modulus, "Modulus coefficients, high to low (e.g. 1,0,1,1)");
  sub->add_option("--threads", cfg.engine.threads, "Worker threads (default $PERMCOUNT_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--out", cfg.out_path, "Write output to this file");
  sub->add_option("--max-naive", cfg.engine.max_naive, "Naive permanent dimension guard");
  sub->add_option("--max-ryser", cfg.engine.max_ryser, "Ryser dimension guard");
  sub->add_option("--max-bell", cfg.engine.max_bell, "Set-partition size guard");
  sub->add_option("--max-oracle", cfg.max_oracle, "Oracle cap on (q-1)!");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  cfg.max_oracle = kDefaultOracleCap;
  if (const char* env = std::getenv("PERMCOUNT_THREADS")) {
    try {
      cfg.engine.threads = static_cast<unsigned>(std::max(1, std::stoi(env)));
    } catch (const std::exception&) {
      err << "ignoring invalid PERMCOUNT_THREADS='" << env << "'\n";
    }
  }

  CLI::App app{"Exact counts of permutation polynomials over finite fields", "permcount"};
  app.require_subcommand(1);
  auto* count = app.add_subcommand("count", "N_q(q-2) by the selected route(s)");
  auto* table = app.add_subcommand("table", "Full table N_q(d), 1 <= d <= q-2");
  auto* verify = app.add_subcommand("verify", "Check every route against brute force");
  auto* bench = app.add_subcommand("bench", "Time the permanent routes");
  add_common_options(count, cfg, false);
  add_common_options(table, cfg, false);
  add_common_options(verify, cfg, false);
  add_common_options(bench, cfg, true);
  count->add_option("--route", cfg.route, "Route selector")
      ->check(CLI::IsMember({"groupring", "cyclotomic", "partition", "all"}));
  count->add_option("--d", cfg.d, "Degree (default q-2)");

  std::vector<const char*> argv{"permcount"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  for (auto* sub : {count, table, verify, bench}) {
    if (sub->parsed()) cfg.command = sub->get_name();
  }
  if (cfg.command == "bench" && cfg.format == "text" && bench->count("--format") == 0) {
    cfg.format = "csv";
  }

  Output result;
  std::optional<FieldCtx> ctx;
  int code = kOk;
  try {
    if (cfg.command == "bench") {
      code = cmd_bench(cfg, result, err);
    } else {
      ctx = make_field(cfg, cfg.fields.front());
      if (ctx->q() < 3) throw InputError("counting needs q >= 3");
      if (cfg.command == "count") code = cmd_count(cfg, *ctx, result);
      if (cfg.command == "table") code = cmd_table(cfg, *ctx, result);
      if (cfg.command == "verify") code = cmd_verify(cfg, *ctx, result);
    }
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return kGuard;
  } catch (const IdentityFailure& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const ArityMismatch& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }

  if (cfg.out_path.empty()) {
    render(cfg, ctx ? &*ctx : nullptr, result, out);
  } else {
    std::ofstream file(cfg.out_path);
    if (!file) {
      err << "error: cannot open " << cfg.out_path << "\n";
      return kBadInput;
    }
    render(cfg, ctx ? &*ctx : nullptr, result, file);
  }
  if (code == kCheckFailed) {
    for (const auto& c : result.checks) {
      if (!c.ok) err << "check failed: " << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
    }
  }
  return code;
}

}  // namespace permcount::cli
