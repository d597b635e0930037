// Identity catalog and verifier.
//
// Each record states one identity between integral transforms, gives a plan
// for each side, and lists the points at which it is checked. A point binds
// the numeric free variables (n, y, z, a, v, ...) and, where the identity
// holds for arbitrary functions, the functions f and g.
#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gptrans/plan.hpp"

namespace gptrans::catalog {

enum class Expected { MustPass, Audit };
enum class Interpretation { Direct, Iterated, Abel };
enum class OutcomeStatus { Pass, Fail, Conditional };

std::string_view to_string(Expected e);
std::string_view to_string(Interpretation i);
std::string_view to_string(OutcomeStatus s);
std::optional<Expected> parse_expected(std::string_view s);
std::optional<Interpretation> parse_interpretation(std::string_view s);
std::optional<OutcomeStatus> parse_outcome_status(std::string_view s);

inline constexpr double kMustPassTol = 1e-7;
inline constexpr double kAuditTol = 1e-5;
inline constexpr double kAbsFloor = 1e-12;

struct Point {
  expr::ParamMap params;
  std::map<std::string, std::string> functions;  // name -> expression source

  /// "f=exp(-x^2), n=1, z=0.5": functions first, then parameters, by name.
  std::string label() const;
  bool operator==(const Point&) const = default;
};

struct FreeVar {
  std::string name;
  std::string range;  // human-readable, e.g. "y > 0"
  std::function<bool(double)> admissible;
};

struct Candidate {
  std::string label;
  Plan plan;
};

struct Sides {
  Plan lhs;
  Plan rhs;
  std::string rhs_label = "stated form";
  // Further forms the lhs must also match for a PASS.
  std::vector<Candidate> also;
  // Corrected forms; one matching while the stated form fails gives CONDITIONAL.
  std::vector<Candidate> alternates;
  // Other readings of the lhs, evaluated and reported in the note only.
  std::vector<Candidate> cross_checks;
};

struct IdentityRecord {
  std::string id;
  std::string title;
  std::string statement;
  std::vector<FreeVar> free_vars;
  std::vector<std::string> function_vars;  // e.g. {"f", "g"}
  std::vector<Point> default_points;
  Interpretation interpretation = Interpretation::Direct;
  Expected expected = Expected::MustPass;
  std::string remark;
  std::function<Sides(const Point&)> build;

  double default_tol() const { return expected == Expected::MustPass ? kMustPassTol : kAuditTol; }
};

/// The full catalog in document order. Ids are unique.
const std::vector<IdentityRecord>& builtin_catalog();
const IdentityRecord* find_record(std::string_view id);

/// Natural ordering of ids: "R2" < "R10", "T1a" < "T1b".
bool id_less(std::string_view a, std::string_view b);

struct VerificationOutcome {
  std::string id;
  Point point;
  Expected expected = Expected::MustPass;
  Interpretation interpretation = Interpretation::Direct;
  double tol = 0.0;
  double lhs_value = 0.0;
  double rhs_value = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double lhs_err_est = 0.0;
  double rhs_err_est = 0.0;
  OutcomeStatus status = OutcomeStatus::Fail;
  std::string candidate;  // the form that matched, empty on FAIL
  std::string note;

  bool operator==(const VerificationOutcome& o) const;
};

/// |lhs - rhs| <= max(tol * max(|lhs|, |rhs|), kAbsFloor) + lhs_err + rhs_err.
bool within(double lhs, double lhs_err, double rhs, double rhs_err, double tol);

/// Checks a record at the given points (its default points if empty).
/// tol defaults to the record's own tolerance. Failures are data: nothing
/// thrown here escapes, a failing evaluation becomes a FAIL outcome.
std::vector<VerificationOutcome> verify(const IdentityRecord& record, const std::vector<Point>& points = {},
                                        std::optional<double> tol = {}, const quad::QuadOptions& opts = {});

struct ReportMeta {
  std::string tool = "gptrans";
  std::string version;
  std::string tol_policy;  // "per-record" or the override value
  double rel_tol = 0.0;
  std::size_t max_evals = 0;

  bool operator==(const ReportMeta&) const = default;
};

struct ReportSummary {
  std::size_t records = 0;
  std::size_t outcomes = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t conditional = 0;
  std::size_t must_pass_failures = 0;

  bool operator==(const ReportSummary&) const = default;
};

struct VerificationReport {
  ReportMeta meta;
  ReportSummary summary;
  std::vector<VerificationOutcome> outcomes;

  bool operator==(const VerificationReport&) const = default;
};

ReportSummary summarize(const std::vector<VerificationOutcome>& outcomes);

struct AuditOptions {
  std::optional<double> tol;
  quad::QuadOptions quad;
  unsigned jobs = 0;  // 0: hardware concurrency
  std::vector<std::string> only;  // restrict to these ids when non-empty
};

/// Verifies every record at its default points. Outcomes are ordered by id
/// (natural order), then by point in record order, whatever the job count.
VerificationReport audit(const AuditOptions& options = {});

}  // namespace gptrans::catalog
