#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spherecr/family.hpp"
#include "spherecr/kernels.hpp"
#include "spherecr/operators.hpp"
#include "spherecr/parser.hpp"
#include "spherecr/quadrature.hpp"
#include "spherecr/report_io.hpp"
#include "spherecr/verify.hpp"

namespace {

using namespace spherecr;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

std::uint64_t seed_from_env() {
  const char* env = std::getenv("SPHERE_CR_SEED");
  if (!env || !*env) return 0x5EED;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 0);
  if (end == env || *end != '\0') {
    throw CLI::ValidationError("SPHERE_CR_SEED",
                               "not a valid integer: " + std::string(env));
  }
  return v;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

std::string show_complex(Complex v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g %c %.17gi", v.real(),
                v.imag() < 0 ? '-' : '+', std::fabs(v.imag()));
  return buf;
}

double to_radians(double v, bool degrees) {
  return degrees ? v * kPi / 180.0 : v;
}

FamilyIndex make_index(int k, int m) {
  return k == 0 ? FamilyIndex::zero_limit(m) : FamilyIndex(k, m);
}

struct EvalArgs {
  std::string expr;
  double theta = 0.0;
  double phi = 0.0;
  bool degrees = false;
  bool show_d = false;
};

int run_eval(const EvalArgs& a) {
  const Expr e = parse_expr(a.expr);
  const AngularPoint p{to_radians(a.theta, a.degrees),
                       to_radians(a.phi, a.degrees)};
  const Jet2 j = eval_jet(e, p);
  std::printf("expression    : %s\n", to_source(e).c_str());
  std::printf("holomorphic   : %s\n", e.holomorphic() ? "true" : "false");
  std::printf("value         : %s\n", show_complex(j.value).c_str());
  std::printf("d/dtheta      : %s\n", show_complex(j.d_theta).c_str());
  std::printf("d/dphi        : %s\n", show_complex(j.d_phi).c_str());
  std::printf("d2/dtheta2    : %s\n", show_complex(j.d_theta_theta).c_str());
  std::printf("d2/dthetadphi : %s\n", show_complex(j.d_theta_phi).c_str());
  std::printf("d2/dphi2      : %s\n", show_complex(j.d_phi_phi).c_str());
  if (a.show_d) {
    std::printf("D f           : %s\n", show_complex(symbolic_D(e, p)).c_str());
    std::printf("Dbar f        : %s\n",
                show_complex(symbolic_Dbar(e, p)).c_str());
  }
  return kExitOk;
}

struct VerifyArgs {
  SuiteConfig cfg{};
  std::string format = "text";
  std::string out_path;
  std::string json_path;
};

int run_verify(const VerifyArgs& a) {
  const SuiteReport rep = run_suite(a.cfg);
  if (!a.json_path.empty()) {
    write_output(a.json_path, report_to_json(rep, a.cfg));
  }
  std::string content;
  if (a.format == "json") {
    content = report_to_json(rep, a.cfg);
  } else if (a.format == "csv") {
    content = report_to_csv(rep);
  } else {
    content = report_to_text(rep);
  }
  if (a.json_path.empty() || !a.out_path.empty() || a.format != "json") {
    write_output(a.out_path, content);
  }
  return rep.all_pass() ? kExitOk : kExitVerificationFailure;
}

struct NormArgs {
  double n = 1.0;
  int k = 1;
  int m = 2;
  double tol = 1e-7;
};

int run_norm(const NormArgs& a) {
  const RadialParams rp{a.n};
  const FamilyIndex idx = make_index(a.k, a.m);
  const NormalizedMode mode = g_km(rp, idx);
  const PhiSingularity sing{idx.ratio(), idx.ratio()};
  const QuadratureResult q = r3_norm_sq(
      [&mode](const Point3D& p) { return mode(p); }, sing, rp.n, a.tol);
  std::printf("n=%g k=%d m=%d\n", a.n, idx.k(), idx.m());
  std::printf("normalization constant : %.12g\n", mode.constant());
  std::printf("norm_sq (quadrature)   : %.12g\n", q.value);
  std::printf("|norm_sq - 1|          : %.3e\n", std::fabs(q.value - 1.0));
  std::printf("error estimate         : %.3e\n", q.abs_error_estimate);
  std::printf("integrand evaluations  : %lld\n", q.evaluations);
  return std::fabs(q.value - 1.0) <= std::max(a.tol * 10.0, 1e-6)
             ? kExitOk
             : kExitVerificationFailure;
}

struct ResidualArgs {
  double n = 1.0;
  int k = 1;
  int m = 2;
  std::vector<double> radii{0.5, 1.0, 2.0};
  std::vector<double> steps{8e-3, 4e-3, 2e-3, 1e-3};
  double theta = kPi;
  double phi = 0.5 * kPi;
  bool degrees = false;
};

int run_residual(const ResidualArgs& a) {
  const RadialParams rp{a.n};
  const FamilyIndex idx = make_index(a.k, a.m);
  const Expr angular = h_km(idx);
  const AngularPoint p{to_radians(a.theta, a.degrees),
                       to_radians(a.phi, a.degrees)};
  std::printf("Schrodinger residual |(-Lap + nu) g| / |g| for n=%g, h(%d/%d)\n",
              a.n, idx.k(), idx.m());
  std::printf("%-10s", "h \\ r");
  for (double r : a.radii) std::printf(" %-12.4g", r);
  std::printf("\n");
  for (double h : a.steps) {
    std::printf("%-10.3g", h);
    const StencilSpec s{2, h, h};
    const RadialFn radial_fd = make_fd_radial(
        [&rp](double rr) { return radial_solution(rp, rr); }, h, 2);
    for (double r : a.radii) {
      const Point3D q{r, p};
      const Complex lap = laplacian3d_separable(radial_fd, to_field(angular), q, s);
      const Complex gh = radial_solution(rp, r) * eval(angular, p);
      const double resid = std::abs(-lap + potential_nu(rp, r) * gh) /
                           std::abs(gh);
      std::printf(" %-12.4e", resid);
    }
    std::printf("\n");
  }
  // Exact-derivative reference for the purely radial factor.
  double radial_resid = 0.0;
  for (double r : a.radii) {
    const RadialDerivatives d = radial_solution_jet(rp, r);
    radial_resid = std::max(
        radial_resid,
        std::fabs(-(d.d2 + 2.0 / r * d.d1) + potential_nu(rp, r) * d.value) /
            d.value);
  }
  std::printf("radial factor residual with exact derivatives: %.3e\n",
              radial_resid);
  return kExitOk;
}

struct TableArgs {
  int m_max = 6;
  double tol = 1e-8;
  std::string out_path;
};

int run_table(const TableArgs& a) {
  std::string csv = "k,m,closed_form,quadrature,abs_diff\n";
  bool all_ok = true;
  for (int m = 2; m <= a.m_max; ++m) {
    for (int k = 1; k <= m - 1; ++k) {
      const FamilyIndex idx{k, m};
      const double closed = phi_integral_closed_form(idx);
      const double ratio = idx.ratio();
      auto integrand = [ratio](double phi) {
        return std::pow(std::tan(0.5 * phi), 2.0 * ratio) * std::sin(phi);
      };
      const QuadratureResult q =
          integrate_phi_singular(integrand, PhiSingularity{ratio, ratio},
                                 0.5 * a.tol);
      const double diff = std::fabs(q.value - closed);
      if (diff > a.tol * std::fabs(closed)) all_ok = false;
      char line[160];
      std::snprintf(line, sizeof(line), "%d,%d,%.8f,%.8f,%.3e\n", k, m, closed,
                    q.value, diff);
      csv += line;
    }
  }
  write_output(a.out_path, csv);
  return all_ok ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for the angular Cauchy-Riemann operator "
               "D = d/dtheta + i sin(phi) d/dphi on the cut sphere"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Evaluate an expression and its exact partial derivatives");
  eval_cmd->add_option("expression", eval_args.expr, "expression text")
      ->required();
  eval_cmd->add_option("--theta", eval_args.theta, "theta coordinate")
      ->required();
  eval_cmd->add_option("--phi", eval_args.phi, "phi coordinate")->required();
  eval_cmd->add_flag("--degrees", eval_args.degrees,
                     "interpret --theta/--phi in degrees");
  eval_cmd->add_flag("--show-D", eval_args.show_d,
                     "also print D f and Dbar f");

  VerifyArgs verify_args;
  verify_args.cfg.seed = 0;  // resolved after parsing
  bool verify_all = true;
  bool no_controls = false;
  std::uint64_t seed_flag = 0;
  bool seed_given = false;
  bool serial = false;
  auto* verify_cmd =
      app.add_subcommand("verify", "Run the full verification suite");
  verify_cmd->add_flag("--all", verify_all, "run every check (default)");
  verify_cmd->add_option("--json", verify_args.json_path,
                         "also write the JSON report to this path");
  verify_cmd->add_option("--format", verify_args.format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  verify_cmd->add_option("--out", verify_args.out_path,
                         "output path (default stdout)");
  verify_cmd->add_option("--n-theta", verify_args.cfg.grid.n_theta,
                         "grid nodes in theta")
      ->check(CLI::Range(2, 4096));
  verify_cmd->add_option("--n-phi", verify_args.cfg.grid.n_phi,
                         "grid nodes in phi")
      ->check(CLI::Range(2, 4096));
  verify_cmd->add_option("--margin-theta", verify_args.cfg.grid.margin_theta,
                         "grid margin from the cut")
      ->check(CLI::Range(1e-6, 3.0));
  verify_cmd->add_option("--margin-phi", verify_args.cfg.grid.margin_phi,
                         "grid margin from the poles")
      ->check(CLI::Range(1e-6, 1.5));
  verify_cmd->add_option("--m-max", verify_args.cfg.family_m_max,
                         "largest m in the identity panels")
      ->check(CLI::Range(2, 32));
  verify_cmd->add_option("--sweep-m-max", verify_args.cfg.sweep_m_max,
                         "largest m in the phi-integral sweep")
      ->check(CLI::Range(2, 64));
  verify_cmd->add_option("--random-count", verify_args.cfg.random_expr_count,
                         "number of random holomorphic expressions")
      ->check(CLI::Range(0, 100000));
  verify_cmd->add_option("--random-depth", verify_args.cfg.random_expr_depth,
                         "max depth of random expressions")
      ->check(CLI::Range(1, 12));
  verify_cmd->add_option("--random-points", verify_args.cfg.random_point_count,
                         "random evaluation points per expression")
      ->check(CLI::Range(1, 100000));
  verify_cmd->add_option("--tol-identity", verify_args.cfg.tol_identity,
                         "tolerance for exact-jet identity checks")
      ->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--tol-integral", verify_args.cfg.tol_phi_integral,
                         "relative tolerance for the phi-integral sweep")
      ->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--tol-norm", verify_args.cfg.tol_norm,
                         "tolerance for |norm_sq - 1|")
      ->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--seed", seed_flag, "RNG seed for random checks")
      ->each([&seed_given](const std::string&) { seed_given = true; });
  verify_cmd->add_flag("--no-controls", no_controls,
                       "skip the negative-control checks");
  verify_cmd->add_flag("--serial", serial,
                       "use the serial reference kernels");

  NormArgs norm_args;
  auto* norm_cmd = app.add_subcommand(
      "norm", "Quadrature L2 norm of a normalized mode over R^3");
  norm_cmd->add_option("--n", norm_args.n, "radial decay parameter")
      ->required()
      ->check(CLI::Range(1e-6, 1e6));
  norm_cmd->add_option("--k", norm_args.k, "family index k")->required();
  norm_cmd->add_option("--m", norm_args.m, "family index m")->required();
  norm_cmd->add_option("--tol", norm_args.tol, "relative quadrature tolerance")
      ->check(CLI::Range(1e-12, 1e-2));

  ResidualArgs residual_args;
  auto* residual_cmd = app.add_subcommand(
      "residual", "Finite-difference Schrodinger residual over a radial sweep");
  residual_cmd->add_option("--n", residual_args.n, "radial decay parameter")
      ->required()
      ->check(CLI::Range(1e-6, 1e6));
  residual_cmd->add_option("--k", residual_args.k, "family index k")->required();
  residual_cmd->add_option("--m", residual_args.m, "family index m")->required();
  residual_cmd->add_option("--radii", residual_args.radii, "radii to sample");
  residual_cmd->add_option("--steps", residual_args.steps, "stencil steps");
  residual_cmd->add_option("--theta", residual_args.theta, "angular point");
  residual_cmd->add_option("--phi", residual_args.phi, "angular point");
  residual_cmd->add_flag("--degrees", residual_args.degrees,
                         "interpret --theta/--phi in degrees");

  TableArgs table_args;
  auto* table_cmd = app.add_subcommand(
      "table", "CSV sweep of the closed-form phi integral vs quadrature");
  table_cmd->add_option("--m-max", table_args.m_max, "largest m in the sweep")
      ->check(CLI::Range(2, 64));
  table_cmd->add_option("--tol", table_args.tol, "relative tolerance")
      ->check(CLI::Range(1e-12, 1e-2));
  table_cmd->add_option("--out", table_args.out_path,
                        "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify_cmd) {
      verify_args.cfg.seed = seed_given ? seed_flag : seed_from_env();
      verify_args.cfg.include_controls = !no_controls;
      if (serial) spherecr::kernels::set_parallel_enabled(false);
      return run_verify(verify_args);
    }
    if (*eval_cmd) return run_eval(eval_args);
    if (*norm_cmd) return run_norm(norm_args);
    if (*residual_cmd) return run_residual(residual_args);
    if (*table_cmd) return run_table(table_args);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitUsage;
  } catch (const InvalidIndex& e) {
    std::fprintf(stderr, "invalid index: %s\n", e.what());
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const NoConvergence& e) {
    std::fprintf(stderr,
                 "no convergence: %s (partial value %.12g, estimate %.3e)\n",
                 e.what(), e.partial().value, e.partial().abs_error_estimate);
    return kExitNoConvergence;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerificationFailure;
  }
  return kExitUsage;
}
