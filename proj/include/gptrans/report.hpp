// Serialization of verification reports.
//
// JSON: {"meta": {...}, "summary": {...}, "outcomes": [{...}, ...]} with a
// fixed key order; non-finite numbers are written as null. CSV: '#' metadata
// lines, one header row, one row per outcome, numbers in %.17g.
#pragma once

#include <string>
#include <string_view>

#include "gptrans/catalog.hpp"

namespace gptrans::report {

inline constexpr std::string_view kVersion = "0.1.0";

std::string to_json(const catalog::VerificationReport& r, int indent = 2);
/// Throws std::runtime_error on malformed input.
catalog::VerificationReport from_json(std::string_view text);

std::string to_csv(const catalog::VerificationReport& r);
/// Reads back what to_csv wrote.
catalog::VerificationReport from_csv(std::string_view text);

/// Fixed-width table for terminals.
std::string to_table(const catalog::VerificationReport& r);

/// %.17g, with nan/inf spelled out.
std::string format_number(double v);

}  // namespace gptrans::report
