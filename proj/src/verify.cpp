#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <thread>

#include "gptrans/catalog.hpp"
#include "gptrans/report.hpp"

namespace gptrans::catalog {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

std::string_view to_string(Expected e) { return e == Expected::MustPass ? "MUST_PASS" : "AUDIT"; }

std::string_view to_string(Interpretation i) {
  switch (i) {
    case Interpretation::Direct: return "DIRECT";
    case Interpretation::Iterated: return "ITERATED";
    case Interpretation::Abel: return "ABEL";
  }
  return "?";
}

std::string_view to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::Pass: return "PASS";
    case OutcomeStatus::Fail: return "FAIL";
    case OutcomeStatus::Conditional: return "CONDITIONAL";
  }
  return "?";
}

std::optional<Expected> parse_expected(std::string_view s) {
  if (s == "MUST_PASS") return Expected::MustPass;
  if (s == "AUDIT") return Expected::Audit;
  return std::nullopt;
}

std::optional<Interpretation> parse_interpretation(std::string_view s) {
  for (auto i : {Interpretation::Direct, Interpretation::Iterated, Interpretation::Abel}) {
    if (to_string(i) == s) return i;
  }
  return std::nullopt;
}

std::optional<OutcomeStatus> parse_outcome_status(std::string_view s) {
  for (auto o : {OutcomeStatus::Pass, OutcomeStatus::Fail, OutcomeStatus::Conditional}) {
    if (to_string(o) == s) return o;
  }
  return std::nullopt;
}

std::string Point::label() const {
  std::string s;
  for (const auto& [name, src] : functions) {
    if (!s.empty()) s += ", ";
    s += name + "=" + src;
  }
  for (const auto& [name, v] : params) {
    if (!s.empty()) s += ", ";
    s += name + "=" + shortest(v);
  }
  return s;
}

bool id_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i]));
    const bool db = std::isdigit(static_cast<unsigned char>(b[j]));
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      const unsigned long na = std::stoul(std::string(a.substr(i, ie - i)));
      const unsigned long nb = std::stoul(std::string(b.substr(j, je - j)));
      if (na != nb) return na < nb;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j];
    ++i;
    ++j;
  }
  return a.size() - i < b.size() - j;
}

bool VerificationOutcome::operator==(const VerificationOutcome& o) const {
  return id == o.id && point == o.point && expected == o.expected && interpretation == o.interpretation &&
         same(tol, o.tol) && same(lhs_value, o.lhs_value) && same(rhs_value, o.rhs_value) &&
         same(abs_err, o.abs_err) && same(rel_err, o.rel_err) && same(lhs_err_est, o.lhs_err_est) &&
         same(rhs_err_est, o.rhs_err_est) && status == o.status && candidate == o.candidate && note == o.note;
}

bool within(double lhs, double lhs_err, double rhs, double rhs_err, double tol) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
  const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
  return std::fabs(lhs - rhs) <= std::max(tol * scale, kAbsFloor) + lhs_err + rhs_err;
}

namespace {

PlanResult run(const Plan& p, const Point& pt, const quad::QuadOptions& opts) {
  try {
    return evaluate(p, pt.params, opts);
  } catch (const std::exception& e) {
    PlanResult r;
    r.value = kNaN;
    r.err_est = kNaN;
    r.status = quad::Status::DivergentSuspected;
    r.note = e.what();
    return r;
  }
}

std::string status_text(const PlanResult& r) {
  std::string s(quad::to_string(r.status));
  if (!std::isfinite(r.value) && r.status == quad::Status::Converged) s = "non-finite value";
  if (!r.note.empty()) s += ": " + r.note;
  return s;
}

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += "; ";
    s += p;
  }
  return s;
}

VerificationOutcome check(const IdentityRecord& rec, const Point& pt, double tol, const quad::QuadOptions& opts) {
  VerificationOutcome o;
  o.id = rec.id;
  o.point = pt;
  o.expected = rec.expected;
  o.interpretation = rec.interpretation;
  o.tol = tol;
  o.lhs_value = o.rhs_value = o.abs_err = o.rel_err = o.lhs_err_est = o.rhs_err_est = kNaN;
  o.status = OutcomeStatus::Fail;

  Sides sides;
  try {
    sides = rec.build(pt);
  } catch (const std::exception& e) {
    o.note = std::string("could not build the plan: ") + e.what();
    return o;
  }

  const PlanResult lhs = run(sides.lhs, pt, opts);
  const PlanResult rhs = run(sides.rhs, pt, opts);
  o.lhs_value = lhs.value;
  o.lhs_err_est = lhs.err_est;
  o.rhs_value = rhs.value;
  o.rhs_err_est = rhs.err_est;
  o.abs_err = std::fabs(lhs.value - rhs.value);
  const double scale = std::max(std::fabs(lhs.value), std::fabs(rhs.value));
  o.rel_err = scale > 0.0 ? o.abs_err / scale : (o.abs_err == 0.0 ? 0.0 : kNaN);

  std::vector<std::string> notes;
  if (!lhs.ok()) notes.push_back("lhs did not converge (" + status_text(lhs) + ")");
  if (!rhs.ok()) notes.push_back("rhs did not converge (" + status_text(rhs) + ")");

  if (lhs.ok() && rhs.ok()) {
    bool stated = within(lhs.value, lhs.err_est, rhs.value, rhs.err_est, tol);
    if (!stated) notes.push_back(sides.rhs_label + " differs (rel err " + sci(o.rel_err) + ")");
    for (const auto& c : sides.also) {
      const PlanResult r = run(c.plan, pt, opts);
      if (r.ok() && within(lhs.value, lhs.err_est, r.value, r.err_est, tol)) {
        notes.push_back("also matches " + c.label);
      } else {
        stated = false;
        notes.push_back(c.label + " = " + sci(r.value) + " does not match");
      }
    }
    if (stated) {
      o.status = OutcomeStatus::Pass;
      o.candidate = sides.rhs_label;
    } else {
      for (const auto& c : sides.alternates) {
        const PlanResult r = run(c.plan, pt, opts);
        if (r.ok() && within(lhs.value, lhs.err_est, r.value, r.err_est, tol)) {
          o.status = OutcomeStatus::Conditional;
          o.candidate = c.label;
          notes.push_back("stated " + sides.rhs_label + " fails, corrected " + c.label + " = " + sci(r.value) +
                          " passes");
          break;
        }
        notes.push_back(c.label + " = " + sci(r.value) + " also fails");
      }
    }
  }

  for (const auto& c : sides.cross_checks) {
    const PlanResult r = run(c.plan, pt, opts);
    notes.push_back(c.label + ": " + sci(r.value) + " +- " + sci(r.err_est) + " [" + status_text(r) + "]");
  }
  o.note = join(notes);
  return o;
}

}  // namespace

std::vector<VerificationOutcome> verify(const IdentityRecord& record, const std::vector<Point>& points,
                                        std::optional<double> tol, const quad::QuadOptions& opts) {
  const double t = tol.value_or(record.default_tol());
  if (!(t > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const auto& pts = points.empty() ? record.default_points : points;
  std::vector<VerificationOutcome> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(check(record, p, t, opts));
  return out;
}

ReportSummary summarize(const std::vector<VerificationOutcome>& outcomes) {
  ReportSummary s;
  std::set<std::string> ids;
  for (const auto& o : outcomes) {
    ids.insert(o.id);
    ++s.outcomes;
    switch (o.status) {
      case OutcomeStatus::Pass: ++s.pass; break;
      case OutcomeStatus::Fail: ++s.fail; break;
      case OutcomeStatus::Conditional: ++s.conditional; break;
    }
    if (o.expected == Expected::MustPass && o.status != OutcomeStatus::Pass) ++s.must_pass_failures;
  }
  s.records = ids.size();
  return s;
}

VerificationReport audit(const AuditOptions& options) {
  if (options.tol && !(*options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  options.quad.validate();

  std::vector<const IdentityRecord*> records;
  for (const auto& r : builtin_catalog()) {
    if (options.only.empty() || std::find(options.only.begin(), options.only.end(), r.id) != options.only.end()) {
      records.push_back(&r);
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const IdentityRecord* a, const IdentityRecord* b) { return id_less(a->id, b->id); });

  struct Task {
    const IdentityRecord* record;
    const Point* point;
  };
  std::vector<Task> tasks;
  for (const auto* r : records) {
    for (const auto& p : r->default_points) tasks.push_back({r, &p});
  }

  std::vector<VerificationOutcome> outcomes(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      outcomes[i] = check(*t.record, *t.point, options.tol.value_or(t.record->default_tol()), options.quad);
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  VerificationReport rep;
  rep.meta.version = std::string(report::kVersion);
  rep.meta.tol_policy = options.tol ? shortest(*options.tol) : "per-record";
  rep.meta.rel_tol = options.quad.rel_tol;
  rep.meta.max_evals = options.quad.max_evals;
  rep.outcomes = std::move(outcomes);
  rep.summary = summarize(rep.outcomes);
  return rep;
}

}  // namespace gptrans::catalog
