#include "gptrans/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gptrans::report {

using catalog::VerificationOutcome;
using catalog::VerificationReport;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json outcome_json(const VerificationOutcome& o) {
  json point = json::object();
  point["label"] = o.point.label();
  json fns = json::object();
  for (const auto& [k, v] : o.point.functions) fns[k] = v;
  json params = json::object();
  for (const auto& [k, v] : o.point.params) params[k] = number(v);
  point["functions"] = fns;
  point["params"] = params;

  json j = json::object();
  j["id"] = o.id;
  j["point"] = point;
  j["expected"] = catalog::to_string(o.expected);
  j["interpretation"] = catalog::to_string(o.interpretation);
  j["tol"] = number(o.tol);
  j["lhs_value"] = number(o.lhs_value);
  j["rhs_value"] = number(o.rhs_value);
  j["abs_err"] = number(o.abs_err);
  j["rel_err"] = number(o.rel_err);
  j["lhs_err_est"] = number(o.lhs_err_est);
  j["rhs_err_est"] = number(o.rhs_err_est);
  j["status"] = catalog::to_string(o.status);
  j["candidate"] = o.candidate;
  j["note"] = o.note;
  return j;
}

template <class T>
T parse_enum(std::optional<T> v, const std::string& what) {
  if (!v) throw std::runtime_error("report: bad " + what);
  return *v;
}

VerificationOutcome outcome_from(const json& j) {
  VerificationOutcome o;
  o.id = j.at("id").get<std::string>();
  const json& point = j.at("point");
  for (const auto& [k, v] : point.at("functions").items()) o.point.functions[k] = v.get<std::string>();
  for (const auto& [k, v] : point.at("params").items()) o.point.params[k] = read_number(v);
  o.expected = parse_enum(catalog::parse_expected(j.at("expected").get<std::string>()), "expected");
  o.interpretation =
      parse_enum(catalog::parse_interpretation(j.at("interpretation").get<std::string>()), "interpretation");
  o.tol = read_number(j.at("tol"));
  o.lhs_value = read_number(j.at("lhs_value"));
  o.rhs_value = read_number(j.at("rhs_value"));
  o.abs_err = read_number(j.at("abs_err"));
  o.rel_err = read_number(j.at("rel_err"));
  o.lhs_err_est = read_number(j.at("lhs_err_est"));
  o.rhs_err_est = read_number(j.at("rhs_err_est"));
  o.status = parse_enum(catalog::parse_outcome_status(j.at("status").get<std::string>()), "status");
  o.candidate = j.at("candidate").get<std::string>();
  o.note = j.at("note").get<std::string>();
  return o;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

// "f=exp(-x);g=exp(-x^2)". Expressions never contain ';'.
std::string join_functions(const std::map<std::string, std::string>& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : ";") + k + "=" + v;
  return s;
}

std::string join_params(const expr::ParamMap& m) {
  std::string s;
  for (const auto& [k, v] : m) s += (s.empty() ? "" : ";") + k + "=" + format_number(v);
  return s;
}

std::vector<std::pair<std::string, std::string>> split_pairs(const std::string& s) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t end = s.find(';', start);
    if (end == std::string::npos) end = s.size();
    const std::string item = s.substr(start, end - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::runtime_error("report: bad point entry '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    start = end + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw std::runtime_error("report: bad number '" + s + "'");
  return v;
}

const char* const kCsvHeader =
    "id,functions,params,expected,interpretation,tol,lhs_value,rhs_value,abs_err,rel_err,lhs_err_est,rhs_err_est,"
    "status,candidate,note";

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const VerificationReport& r, int indent) {
  json j = json::object();
  j["meta"] = {{"tool", r.meta.tool},
               {"version", r.meta.version},
               {"tol_policy", r.meta.tol_policy},
               {"rel_tol", number(r.meta.rel_tol)},
               {"max_evals", r.meta.max_evals}};
  j["summary"] = {{"records", r.summary.records},
                  {"outcomes", r.summary.outcomes},
                  {"pass", r.summary.pass},
                  {"fail", r.summary.fail},
                  {"conditional", r.summary.conditional},
                  {"must_pass_failures", r.summary.must_pass_failures}};
  json outs = json::array();
  for (const auto& o : r.outcomes) outs.push_back(outcome_json(o));
  j["outcomes"] = std::move(outs);
  return j.dump(indent) + "\n";
}

VerificationReport from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
  try {
    VerificationReport r;
    const json& m = j.at("meta");
    r.meta.tool = m.at("tool").get<std::string>();
    r.meta.version = m.at("version").get<std::string>();
    r.meta.tol_policy = m.at("tol_policy").get<std::string>();
    r.meta.rel_tol = read_number(m.at("rel_tol"));
    r.meta.max_evals = m.at("max_evals").get<std::size_t>();
    const json& s = j.at("summary");
    r.summary.records = s.at("records").get<std::size_t>();
    r.summary.outcomes = s.at("outcomes").get<std::size_t>();
    r.summary.pass = s.at("pass").get<std::size_t>();
    r.summary.fail = s.at("fail").get<std::size_t>();
    r.summary.conditional = s.at("conditional").get<std::size_t>();
    r.summary.must_pass_failures = s.at("must_pass_failures").get<std::size_t>();
    for (const auto& o : j.at("outcomes")) r.outcomes.push_back(outcome_from(o));
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("report: ") + e.what());
  }
}

std::string to_csv(const VerificationReport& r) {
  std::ostringstream os;
  os << "# tool=" << r.meta.tool << "\n";
  os << "# version=" << r.meta.version << "\n";
  os << "# tol_policy=" << r.meta.tol_policy << "\n";
  os << "# rel_tol=" << format_number(r.meta.rel_tol) << "\n";
  os << "# max_evals=" << r.meta.max_evals << "\n";
  os << "# records=" << r.summary.records << " outcomes=" << r.summary.outcomes << " pass=" << r.summary.pass
     << " fail=" << r.summary.fail << " conditional=" << r.summary.conditional
     << " must_pass_failures=" << r.summary.must_pass_failures << "\n";
  os << kCsvHeader << "\n";
  for (const auto& o : r.outcomes) {
    os << csv_field(o.id) << ',' << csv_field(join_functions(o.point.functions)) << ','
       << csv_field(join_params(o.point.params)) << ',' << catalog::to_string(o.expected) << ','
       << catalog::to_string(o.interpretation) << ',' << format_number(o.tol) << ',' << format_number(o.lhs_value)
       << ',' << format_number(o.rhs_value) << ',' << format_number(o.abs_err) << ',' << format_number(o.rel_err)
       << ',' << format_number(o.lhs_err_est) << ',' << format_number(o.rhs_err_est) << ','
       << catalog::to_string(o.status) << ',' << csv_field(o.candidate) << ',' << csv_field(o.note) << "\n";
  }
  return os.str();
}

VerificationReport from_csv(std::string_view text) {
  VerificationReport r;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // A quoted field may span lines; keep reading until the quotes balance.
    while (std::count(line.begin(), line.end(), '"') % 2 == 1) {
      std::string more;
      if (!std::getline(in, more)) throw std::runtime_error("report: unterminated quoted CSV field");
      line += "\n" + more;
    }
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string kv;
      while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = kv.substr(0, eq);
        const std::string v = kv.substr(eq + 1);
        if (k == "tool") r.meta.tool = v;
        else if (k == "version") r.meta.version = v;
        else if (k == "tol_policy") r.meta.tol_policy = v;
        else if (k == "rel_tol") r.meta.rel_tol = parse_double(v);
        else if (k == "max_evals") r.meta.max_evals = std::stoull(v);
        else if (k == "records") r.summary.records = std::stoull(v);
        else if (k == "outcomes") r.summary.outcomes = std::stoull(v);
        else if (k == "pass") r.summary.pass = std::stoull(v);
        else if (k == "fail") r.summary.fail = std::stoull(v);
        else if (k == "conditional") r.summary.conditional = std::stoull(v);
        else if (k == "must_pass_failures") r.summary.must_pass_failures = std::stoull(v);
      }
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw std::runtime_error("report: unexpected CSV header");
      header = true;
      continue;
    }
    const auto f = csv_split(line);
    if (f.size() != 15) throw std::runtime_error("report: CSV row has " + std::to_string(f.size()) + " fields");
    VerificationOutcome o;
    o.id = f[0];
    for (const auto& [k, v] : split_pairs(f[1])) o.point.functions[k] = v;
    for (const auto& [k, v] : split_pairs(f[2])) o.point.params[k] = parse_double(v);
    o.expected = parse_enum(catalog::parse_expected(f[3]), "expected");
    o.interpretation = parse_enum(catalog::parse_interpretation(f[4]), "interpretation");
    o.tol = parse_double(f[5]);
    o.lhs_value = parse_double(f[6]);
    o.rhs_value = parse_double(f[7]);
    o.abs_err = parse_double(f[8]);
    o.rel_err = parse_double(f[9]);
    o.lhs_err_est = parse_double(f[10]);
    o.rhs_err_est = parse_double(f[11]);
    o.status = parse_enum(catalog::parse_outcome_status(f[12]), "status");
    o.candidate = f[13];
    o.note = f[14];
    r.outcomes.push_back(std::move(o));
  }
  return r;
}

std::string to_table(const VerificationReport& r) {
  std::ostringstream os;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-4s %-9s %-11s %-44s %24s %24s %10s\n", "id", "expected", "status", "point",
                "lhs", "rhs", "rel_err");
  os << buf;
  for (const auto& o : r.outcomes) {
    std::string label = o.point.label();
    if (label.size() > 44) label = label.substr(0, 41) + "...";
    std::snprintf(buf, sizeof buf, "%-4s %-9s %-11s %-44s %24.17g %24.17g %10.3g\n", o.id.c_str(),
                  std::string(catalog::to_string(o.expected)).c_str(), std::string(catalog::to_string(o.status)).c_str(),
                  label.c_str(), o.lhs_value, o.rhs_value, o.rel_err);
    os << buf;
    if (!o.note.empty()) os << "     note: " << o.note << "\n";
  }
  std::snprintf(buf, sizeof buf, "%zu records, %zu outcomes: %zu PASS, %zu FAIL, %zu CONDITIONAL; %zu MUST_PASS failures\n",
                r.summary.records, r.summary.outcomes, r.summary.pass, r.summary.fail, r.summary.conditional,
                r.summary.must_pass_failures);
  os << buf;
  return os.str();
}

}  // namespace gptrans::report
