#include "spherecr/report_io.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace spherecr {

namespace {

using Json = nlohmann::ordered_json;

Json config_to_json(const SuiteConfig& cfg) {
  Json j;
  j["grid"] = {{"n_theta", cfg.grid.n_theta},
               {"n_phi", cfg.grid.n_phi},
               {"margin_theta", cfg.grid.margin_theta},
               {"margin_phi", cfg.grid.margin_phi}};
  j["fd_grid"] = {{"n_theta", cfg.fd_grid.n_theta},
                  {"n_phi", cfg.fd_grid.n_phi},
                  {"margin_theta", cfg.fd_grid.margin_theta},
                  {"margin_phi", cfg.fd_grid.margin_phi}};
  j["family_m_max"] = cfg.family_m_max;
  j["sweep_m_max"] = cfg.sweep_m_max;
  j["random_expr_count"] = cfg.random_expr_count;
  j["random_expr_depth"] = cfg.random_expr_depth;
  j["random_point_count"] = cfg.random_point_count;
  j["seed"] = cfg.seed;
  j["tol_identity"] = cfg.tol_identity;
  j["tol_nullity"] = cfg.tol_nullity;
  j["tol_pointwise"] = cfg.tol_pointwise;
  j["tol_phi_integral"] = cfg.tol_phi_integral;
  j["tol_norm"] = cfg.tol_norm;
  j["norm_n_values"] = cfg.norm_n_values;
  j["fit"] = {{"expected_order", cfg.fit.expected_order},
              {"slope_tolerance", cfg.fit.slope_tolerance},
              {"h_sequence", cfg.fit.h_sequence},
              {"zero_floor", cfg.fit.zero_floor}};
  j["grid3d"] = {{"n_theta", cfg.grid3d.angular.n_theta},
                 {"n_phi", cfg.grid3d.angular.n_phi},
                 {"margin_theta", cfg.grid3d.angular.margin_theta},
                 {"margin_phi", cfg.grid3d.angular.margin_phi},
                 {"radii", cfg.grid3d.radii}};
  j["schrodinger_h_final"] = cfg.schrodinger_h_final;
  j["tol_schrodinger_final"] = cfg.tol_schrodinger_final;
  j["tol_radial_exact"] = cfg.tol_radial_exact;
  j["include_controls"] = cfg.include_controls;
  return j;
}

}  // namespace

std::string report_to_json(const SuiteReport& rep, const SuiteConfig& cfg) {
  Json j;
  j["version"] = "1";
  j["config"] = config_to_json(cfg);
  Json checks = Json::array();
  for (const CheckReport& c : rep.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["status"] = to_string(c.status);
    if (std::isnan(c.metric)) {
      jc["metric"] = nullptr;
    } else {
      jc["metric"] = c.metric;
    }
    jc["tolerance"] = c.tolerance;
    jc["points_tested"] = c.points_tested;
    jc["details"] = c.details;
    checks.push_back(std::move(jc));
  }
  j["checks"] = std::move(checks);
  j["wall_time_ms"] = rep.wall_time_ms;
  return j.dump(2) + "\n";
}

namespace {

std::string csv_quote(const std::string& s) {
  bool needs = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out += ch;
  }
  out += "\"";
  return out;
}

std::string num(double v, const char* format = "%.12g") {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

}  // namespace

std::string report_to_csv(const SuiteReport& rep) {
  std::string out = "name,status,metric,tolerance,points_tested,details\n";
  for (const CheckReport& c : rep.checks) {
    out += csv_quote(c.name) + "," + to_string(c.status) + "," +
           num(c.metric) + "," + num(c.tolerance) + "," +
           std::to_string(c.points_tested) + "," + csv_quote(c.details) + "\n";
  }
  return out;
}

std::string report_to_text(const SuiteReport& rep) {
  std::string out;
  int passed = 0, failed = 0, errored = 0;
  for (const CheckReport& c : rep.checks) {
    const char* tag = "PASS";
    if (c.status == CheckStatus::Fail) {
      tag = "FAIL";
      ++failed;
    } else if (c.status == CheckStatus::Error) {
      tag = "ERR ";
      ++errored;
    } else {
      ++passed;
    }
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] %-42s metric=%-12.4g tol=%-10.3g (%lld pts)%s%s\n",
                  tag, c.name.c_str(), c.metric, c.tolerance, c.points_tested,
                  c.details.empty() ? "" : "  -- ", c.details.c_str());
    out += line;
  }
  char summary[160];
  std::snprintf(summary, sizeof(summary),
                "%d passed, %d failed, %d errored; wall time %.1f ms\n",
                passed, failed, errored, rep.wall_time_ms);
  out += summary;
  return out;
}

}  // namespace spherecr
