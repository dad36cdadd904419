#pragma once

#include <string>

#include "spherecr/verify.hpp"

namespace spherecr {

/// JSON document {version, config, checks: [...], wall_time_ms} with stable
/// key order. Identical configs and seeds give byte-identical output except
/// for wall_time_ms. NaN metrics (error status) serialize as null.
std::string report_to_json(const SuiteReport& rep, const SuiteConfig& cfg);

/// One row per check: name,status,metric,tolerance,points_tested,details.
std::string report_to_csv(const SuiteReport& rep);

/// One human-readable line per check plus a summary line.
std::string report_to_text(const SuiteReport& rep);

}  // namespace spherecr
