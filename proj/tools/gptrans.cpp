// gptrans: evaluate transforms, integrate expressions, verify the identity catalog.
//
// Exit codes: 0 success, 1 usage or parse error, 2 non-convergence or a
// MUST_PASS failure.

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gptrans/catalog.hpp"
#include "gptrans/expr.hpp"
#include "gptrans/quad.hpp"
#include "gptrans/report.hpp"
#include "gptrans/transforms.hpp"

namespace {

using namespace gptrans;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumeric = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double to_double(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw UsageError(what + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::pair<std::string, std::string> split_binding(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("expected name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

expr::ParamMap param_map(const std::vector<std::string>& bindings) {
  expr::ParamMap m;
  for (const auto& b : bindings) {
    auto [k, v] = split_binding(b);
    if (k == "x") throw UsageError("x is the integration variable and cannot be bound");
    m[k] = to_double(v, "--param " + k);
  }
  return m;
}

expr::Expr parse_or_report(const std::string& src) {
  try {
    return expr::parse(src);
  } catch (const expr::ParseError& e) {
    std::ostringstream os;
    os << e.what() << "\n  " << src << "\n  " << std::string(e.position(), ' ') << '^';
    throw UsageError(os.str());
  }
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + path + "' for writing");
  out << text;
}

quad::QuadOptions quad_options(double rel_tol, double abs_tol, std::optional<std::size_t> max_evals) {
  quad::QuadOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  if (const char* env = std::getenv("GPTRANS_MAX_EVALS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*env == '\0' || *end != '\0' || v == 0) throw UsageError("GPTRANS_MAX_EVALS must be a positive integer");
    o.max_evals = v;
  }
  if (max_evals) o.max_evals = *max_evals;
  try {
    o.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return o;
}

struct Row {
  double at;
  quad::QuadResult r;
};

std::string format_rows(const std::vector<Row>& rows, const std::string& format, const std::string& what) {
  using json = nlohmann::ordered_json;
  std::ostringstream os;
  if (format == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json j = json::object();
      j[what] = row.at;
      j["value"] = std::isfinite(row.r.value) ? json(row.r.value) : json(nullptr);
      j["err_est"] = std::isfinite(row.r.err_est) ? json(row.r.err_est) : json(nullptr);
      j["evals"] = row.r.evals;
      j["strategy"] = quad::to_string(row.r.strategy_used);
      j["status"] = quad::to_string(row.r.status);
      arr.push_back(std::move(j));
    }
    os << arr.dump(2) << "\n";
  } else if (format == "csv") {
    os << what << ",value,err_est,evals,strategy,status\n";
    for (const auto& row : rows) {
      os << report::format_number(row.at) << ',' << report::format_number(row.r.value) << ','
         << report::format_number(row.r.err_est) << ',' << row.r.evals << ',' << quad::to_string(row.r.strategy_used)
         << ',' << quad::to_string(row.r.status) << "\n";
    }
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-12s %24s %12s %9s %-12s %s\n", what.c_str(), "value", "err_est", "evals",
                  "strategy", "status");
    os << buf;
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof buf, "%-12.6g %24.17g %12.3g %9zu %-12s %s\n", row.at, row.r.value, row.r.err_est,
                    row.r.evals, std::string(quad::to_string(row.r.strategy_used)).c_str(),
                    std::string(quad::to_string(row.r.status)).c_str());
      os << buf;
    }
  }
  return os.str();
}

int exit_for(const std::vector<Row>& rows) {
  for (const auto& row : rows) {
    if (!row.r.converged() || !std::isfinite(row.r.value)) {
      std::cerr << "error: " << quad::to_string(row.r.status) << " at " << row.at << "\n";
      return kNumeric;
    }
  }
  return kOk;
}

struct Common {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::optional<std::size_t> max_evals;
  std::string format = "table";
  std::string out;
};

void add_quad_flags(CLI::App* app, Common& c) {
  app->add_option("--rel-tol", c.rel_tol, "Relative tolerance")->check(CLI::PositiveNumber);
  app->add_option("--abs-tol", c.abs_tol, "Absolute tolerance")->check(CLI::NonNegativeNumber);
  app->add_option("--max-evals", c.max_evals, "Evaluation budget (overrides GPTRANS_MAX_EVALS)")
      ->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  app->add_option("--out", c.out, "Write output to this file instead of stdout");
}

struct EvalArgs {
  Common c;
  std::string kind;
  int n = 1;
  std::string f;
  std::vector<std::string> params;
  std::vector<double> at;
  bool raw = false;
};

int cmd_eval(const EvalArgs& a) {
  const auto kind = transforms::parse_kind(a.kind);
  if (!kind) throw UsageError("unknown transform kind '" + a.kind + "'");
  transforms::TransformRequest req;
  try {
    req.kind = transforms::TransformKind(*kind, a.n);
  } catch (const transforms::InvalidOrder& e) {
    throw UsageError(e.what());
  }
  req.f = parse_or_report(a.f);
  req.params = param_map(a.params);
  for (const auto& name : expr::parameters(req.f)) {
    if (!req.params.count(name)) throw UsageError("unbound parameter '" + name + "' (use --param " + name + "=...)");
  }
  req.opts = quad_options(a.c.rel_tol, a.c.abs_tol, a.c.max_evals);

  std::vector<Row> rows;
  for (double y : a.at) {
    if (!(y > 0.0)) throw UsageError("evaluation points must be positive");
    req.point = y;
    rows.push_back({y, a.raw ? transforms::eval_transform_raw(req) : transforms::eval_transform(req)});
  }
  write_output(format_rows(rows, a.c.format, "y"), a.c.out);
  return exit_for(rows);
}

struct QuadArgs {
  Common c;
  std::string f;
  std::vector<std::string> params;
  std::string strategy = "auto";
  std::optional<double> period;
  std::optional<double> split;
};

int cmd_quad(const QuadArgs& a) {
  const auto strategy = quad::parse_strategy(a.strategy);
  if (!strategy) throw UsageError("unknown strategy '" + a.strategy + "'");
  const expr::Expr f = parse_or_report(a.f);
  const expr::ParamMap params = param_map(a.params);
  for (const auto& name : expr::parameters(f)) {
    if (!params.count(name)) throw UsageError("unbound parameter '" + name + "' (use --param " + name + "=...)");
  }
  quad::QuadOptions o = quad_options(a.c.rel_tol, a.c.abs_tol, a.c.max_evals);
  const expr::Compiled fc = expr::compile(f, params);
  const expr::DecayClass cls = expr::classify_decay(f, params);
  const quad::Integrand g = [&fc](double x) { return fc(x); };

  quad::QuadResult r;
  if (*strategy == quad::Strategy::Auto) {
    try {
      r = quad::integrate_auto(g, cls, o);
    } catch (const quad::UnclassifiedError& e) {
      throw UsageError(std::string(e.what()) + "; choose --strategy explicitly");
    }
  } else {
    o.strategy = *strategy;
    o.split_point = a.split;
    if (cls.kind == expr::DecayKind::Oscillatory) {
      o.oscillation_period_hint = cls.period;
      o.oscillation_power = cls.power;
      o.oscillation_phase = cls.phase;
    }
    if (a.period) {
      o.oscillation_period_hint = *a.period;
      o.oscillation_power = 1.0;
      o.oscillation_phase = 0.0;
    }
    if (*strategy == quad::Strategy::Oscillatory && !o.oscillation_period_hint) {
      throw UsageError("the oscillatory strategy needs --period (no oscillating factor recognised)");
    }
    try {
      o.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    r = quad::integrate(g, o);
  }
  const std::vector<Row> rows{{0.0, r}};
  if (a.c.format == "table") {
    char buf[256];
    std::snprintf(buf, sizeof buf, "value    %.17g\nerr_est  %.3g\nevals    %zu\nstrategy %s\nstatus   %s\n", r.value,
                  r.err_est, r.evals, std::string(quad::to_string(r.strategy_used)).c_str(),
                  std::string(quad::to_string(r.status)).c_str());
    write_output(buf, a.c.out);
  } else {
    write_output(format_rows(rows, a.c.format, "lower"), a.c.out);
  }
  if (!r.converged() || !std::isfinite(r.value)) {
    std::cerr << "error: " << quad::to_string(r.status) << "\n";
    return kNumeric;
  }
  return kOk;
}

const catalog::IdentityRecord& record_or_throw(const std::string& id) {
  if (const auto* r = catalog::find_record(id)) return *r;
  std::string ids;
  for (const auto& r : catalog::builtin_catalog()) ids += (ids.empty() ? "" : " ") + r.id;
  throw UsageError("unknown identity '" + id + "'; valid ids: " + ids);
}

int cmd_list() {
  for (const auto& r : catalog::builtin_catalog()) {
    std::printf("%-4s %-9s %-8s %-3zu %s\n", r.id.c_str(), std::string(catalog::to_string(r.expected)).c_str(),
                std::string(catalog::to_string(r.interpretation)).c_str(), r.default_points.size(), r.title.c_str());
    std::printf("     %s\n", r.statement.c_str());
  }
  return kOk;
}

int report_exit(const catalog::VerificationReport& rep) {
  if (rep.summary.must_pass_failures > 0) {
    std::cerr << "error: " << rep.summary.must_pass_failures << " MUST_PASS outcome(s) did not pass\n";
    return kNumeric;
  }
  return kOk;
}

std::string render(const catalog::VerificationReport& rep, const std::string& format) {
  if (format == "json") return report::to_json(rep);
  if (format == "csv") return report::to_csv(rep);
  return report::to_table(rep);
}

struct VerifyArgs {
  Common c;
  std::string id;
  std::vector<std::string> point;
  std::vector<std::string> functions;
  std::optional<double> tol;
};

int cmd_verify(const VerifyArgs& a) {
  const auto& rec = record_or_throw(a.id);
  const quad::QuadOptions opts = quad_options(a.c.rel_tol, a.c.abs_tol, a.c.max_evals);
  std::vector<catalog::Point> points;
  if (!a.point.empty() || !a.functions.empty()) {
    catalog::Point p = rec.default_points.front();
    for (const auto& b : a.point) {
      auto [k, v] = split_binding(b);
      auto fv = std::find_if(rec.free_vars.begin(), rec.free_vars.end(), [&](const auto& f) { return f.name == k; });
      if (fv == rec.free_vars.end()) throw UsageError(rec.id + " has no free variable '" + k + "'");
      const double value = to_double(v, "--point " + k);
      if (fv->admissible && !fv->admissible(value)) throw UsageError(k + " out of range, need " + fv->range);
      p.params[k] = value;
    }
    for (const auto& b : a.functions) {
      auto [k, v] = split_binding(b);
      if (std::find(rec.function_vars.begin(), rec.function_vars.end(), k) == rec.function_vars.end()) {
        throw UsageError(rec.id + " has no function variable '" + k + "'");
      }
      parse_or_report(v);
      p.functions[k] = v;
    }
    points.push_back(std::move(p));
  }
  if (a.tol && !(*a.tol > 0.0)) throw UsageError("--tol must be positive");

  catalog::VerificationReport rep;
  rep.meta.version = std::string(report::kVersion);
  rep.meta.tol_policy = a.tol ? report::format_number(*a.tol) : "per-record";
  rep.meta.rel_tol = opts.rel_tol;
  rep.meta.max_evals = opts.max_evals;
  rep.outcomes = catalog::verify(rec, points, a.tol, opts);
  rep.summary = catalog::summarize(rep.outcomes);
  write_output(render(rep, a.c.format), a.c.out);
  return report_exit(rep);
}

struct AuditArgs {
  Common c;
  std::optional<double> tol;
  unsigned jobs = 0;
  std::vector<std::string> only;
};

int cmd_audit(const AuditArgs& a) {
  catalog::AuditOptions o;
  if (a.tol && !(*a.tol > 0.0)) throw UsageError("--tol must be positive");
  o.tol = a.tol;
  o.quad = quad_options(a.c.rel_tol, a.c.abs_tol, a.c.max_evals);
  o.jobs = a.jobs;
  for (const auto& id : a.only) o.only.push_back(record_or_throw(id).id);
  const auto rep = catalog::audit(o);
  write_output(render(rep, a.c.format), a.c.out);
  return report_exit(rep);
}

int run(int argc, char** argv) {
  CLI::App app{"Generalized Laplace and Stieltjes transforms: evaluation and identity verification", "gptrans"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(report::kVersion));

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a transform of f at one or more points");
  eval->add_option("--kind", ev.kind, "laplace, l2, ln, l2n, stieltjes, pn, p2n or widder")->required();
  eval->add_option("--n", ev.n, "Transform order");
  eval->add_option("--f", ev.f, "Expression in x")->required();
  eval->add_option("--param", ev.params, "Parameter binding name=value (repeatable)");
  eval->add_option("--at", ev.at, "Evaluation points")->required()->delimiter(',');
  eval->add_flag("--raw", ev.raw, "Integrate the defining integral without substitution");
  add_quad_flags(eval, ev.c);
  add_output_flags(eval, ev.c);

  QuadArgs qa;
  auto* quadc = app.add_subcommand("quad", "Integrate an expression in x over (0, inf)");
  quadc->add_option("--f", qa.f, "Expression in x")->required();
  quadc->add_option("--param", qa.params, "Parameter binding name=value (repeatable)");
  quadc->add_option("--strategy", qa.strategy, "auto, decay, algebraic, oscillatory or abel");
  quadc->add_option("--period", qa.period, "Oscillation period in x")->check(CLI::PositiveNumber);
  quadc->add_option("--split", qa.split, "Split point for the algebraic strategy")->check(CLI::PositiveNumber);
  add_quad_flags(quadc, qa.c);
  add_output_flags(quadc, qa.c);

  auto* ident = app.add_subcommand("identity", "List, verify or audit the identity catalog");
  ident->require_subcommand(1);
  ident->add_subcommand("list", "List catalog records");

  VerifyArgs va;
  auto* ver = ident->add_subcommand("verify", "Verify one record");
  ver->add_option("id", va.id, "Record id")->required();
  ver->add_option("--point", va.point, "Free variable binding name=value (repeatable)");
  ver->add_option("--fn", va.functions, "Function binding name=expression (repeatable)");
  ver->add_option("--tol", va.tol, "Override the record tolerance");
  add_quad_flags(ver, va.c);
  add_output_flags(ver, va.c);

  AuditArgs aa;
  auto* aud = ident->add_subcommand("audit", "Verify every record at its default points");
  aud->add_option("--tol", aa.tol, "Override all record tolerances");
  aud->add_option("--jobs", aa.jobs, "Worker threads (default: available parallelism)");
  aud->add_option("--only", aa.only, "Restrict to these ids")->delimiter(',');
  add_quad_flags(aud, aa.c);
  add_output_flags(aud, aa.c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(ev);
    if (quadc->parsed()) return cmd_quad(qa);
    if (ver->parsed()) return cmd_verify(va);
    if (aud->parsed()) return cmd_audit(aa);
    return cmd_list();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const transforms::InnerFailure& e) {
    std::cerr << "error: DIVERGENT_SUSPECTED: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
