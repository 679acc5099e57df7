// Batch front end: brackets, eigen, scaling, counterexample subcommands with
// deterministic CSV/JSON outputs.
//
// Exit codes: 0 success / claim verified, 2 usage error, 3 claim not verified
// at the configured tolerance, 4 numerical failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sumsq/sumsq.hpp"

namespace fs = std::filesystem;
using namespace sumsq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNotVerified = 3;
constexpr int kExitNumeric = 4;

struct CommonOpts {
  double tol = 1e-8;
  std::string out_dir = ".";
  std::string format = "both";
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--tol", c.tol, "solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--out-dir", c.out_dir, "output directory");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_option("--threads", c.threads, "worker threads for sweeps")
      ->check(CLI::Range(1, 256));
}

bool want_csv(const CommonOpts& c) { return c.format != "json"; }
bool want_json(const CommonOpts& c) { return c.format != "csv"; }

Json common_json(const CommonOpts& c, const std::string& subcommand) {
  return Json{{"subcommand", subcommand},
              {"tol", c.tol},
              {"out_dir", c.out_dir},
              {"format", c.format},
              {"threads", c.threads}};
}

void ensure_out_dir(const CommonOpts& c) { fs::create_directories(c.out_dir); }

std::string out_path(const CommonOpts& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

/// Wall-clock sidecar; the canonical outputs stay timestamp-free.
void write_run_meta(const CommonOpts& c, const std::string& subcommand) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  Json meta{{"non_canonical", true}, {"timestamp_utc", buf}, {"subcommand", subcommand}};
  write_text_file(out_path(c, "run_meta.json"), meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int run_brackets(int k, std::vector<double> point, int depth, const CommonOpts& c) {
  if (point.empty()) point = {0.0, 0.0, 0.0};
  if (point.size() != 3) {
    std::fprintf(stderr, "brackets: --point needs exactly 3 coordinates\n");
    return kExitUsage;
  }
  if (depth < 1) depth = k + 2;

  const auto fields = model_fields(k);
  const RankReport rep = hormander_rank(fields, point, depth);

  std::printf("bracket ranks at (%g, %g, %g), k=%d\n", point[0], point[1], point[2], k);
  for (int d = 1; d <= depth; ++d)
    std::printf("  depth %d: rank %d\n", d, rep.rank_at_depth[static_cast<std::size_t>(d - 1)]);
  std::printf("  complex rank %d, real rank of {Re,Im} parts %d\n", rep.rank, rep.real_rank);
  std::printf("witness:\n");
  for (const auto& w : rep.witness)
    std::printf("  %-22s = %s\n", w.label.c_str(), w.field.to_string().c_str());

  Json config = common_json(c, "brackets");
  config["k"] = k;
  config["point"] = point;
  config["depth"] = depth;
  ensure_out_dir(c);
  if (want_json(c))
    write_text_file(out_path(c, "brackets.json"),
                    brackets_json(rep, k, point, depth, config).dump(2) + "\n");
  if (want_csv(c)) {
    std::string csv = csv_preamble(config) + "depth,rank\n";
    for (int d = 1; d <= depth; ++d)
      csv += std::to_string(d) + "," +
             std::to_string(rep.rank_at_depth[static_cast<std::size_t>(d - 1)]) + "\n";
    write_text_file(out_path(c, "brackets.csv"), csv);
  }
  write_run_meta(c, "brackets");
  return rep.rank == 3 ? kExitOk : kExitNotVerified;
}

int run_eigen(int k, double tau, double fd_r, int fd_m, double agree_tol, const CommonOpts& c) {
  const GroundState gs = adaptive_ground_state(k, tau, c.tol);
  const NormProfile np = derived_norms(gs.coeffs);
  const GroundState fd = fd_ground_state(k, tau, fd_r, fd_m);
  const double rel = std::abs(gs.lambda - fd.lambda) / std::max(gs.lambda, 1e-300);

  std::printf("k=%d tau=%g\n", k, tau);
  std::printf("  galerkin: lambda=%.12g  N=%d  residual=%.3g  gap=%.6g\n", gs.lambda, gs.n_basis,
              gs.residual, gs.gap);
  std::printf("  fd oracle: lambda=%.12g  (R=%g, M=%d)\n", fd.lambda, fd_r, fd_m);
  std::printf("  relative difference %.3g (tolerance %g)\n", rel, agree_tol);
  std::printf("  norms: y=%.6g d=%.6g overlap=%.8g gnorm=%.6g sup=%.6g\n", np.ynorm, np.dnorm,
              np.overlap, np.gnorm, np.supnorm);

  Json config = common_json(c, "eigen");
  config["k"] = k;
  config["tau"] = tau;
  config["fd_R"] = fd_r;
  config["fd_M"] = fd_m;
  config["agree_tol"] = agree_tol;
  ensure_out_dir(c);
  write_text_file(out_path(c, "eigen.json"),
                  eigen_json(gs, np, fd, fd_r, fd_m, agree_tol, config).dump(2) + "\n");
  write_run_meta(c, "eigen");
  return rel <= agree_tol ? kExitOk : kExitNotVerified;
}

int run_scaling(int k, double tau_min, double tau_max, int points, double fit_tau_min,
                double slope_tol, const CommonOpts& c) {
  const std::vector<double> grid = geometric_grid(tau_min, tau_max, points);
  int in_window = 0;
  for (double tau : grid) in_window += tau >= fit_tau_min;
  if (in_window < 3)
    throw std::invalid_argument(
        "scaling: fewer than 3 grid points at or above --fit-tau-min; widen the grid or lower "
        "the fit window");
  const std::vector<ScalingRow> rows = sweep(k, grid, c.tol, c.threads);
  const ScalingReport rep = analyze_sweep(k, rows, fit_tau_min);

  std::printf("scaling sweep k=%d, %d rows\n", k, points);
  for (const auto& r : rep.rows) {
    if (r.error.empty())
      std::printf("  tau=%-8g lambda=%-14.6g lambda*tau^k=%-10.6g sigma=%-10.6g N=%d\n", r.tau,
                  r.lambda, r.lambda_tau_k, r.sigma, r.n_used);
    else
      std::printf("  tau=%-8g FAILED: %s\n", r.tau, r.error.c_str());
  }
  std::printf("lambda fit: slope %.6g (expect %d), r^2 %.8g over tau >= %g\n", rep.lambda_fit.slope,
              -k, rep.lambda_fit.r_squared, fit_tau_min);
  std::printf("sigma fit:  slope %.6g (expect %.1f)\n", rep.sigma_fit.slope, 0.5 * (1 - k));

  Json config = common_json(c, "scaling");
  config["k"] = k;
  config["tau_min"] = tau_min;
  config["tau_max"] = tau_max;
  config["points"] = points;
  config["fit_tau_min"] = fit_tau_min;
  config["slope_tol"] = slope_tol;
  ensure_out_dir(c);
  if (want_csv(c)) write_text_file(out_path(c, "scaling.csv"), scaling_csv(rep.rows, config));
  if (want_json(c))
    write_text_file(out_path(c, "scaling.json"), scaling_json(rep, config).dump(2) + "\n");
  write_run_meta(c, "scaling");

  if (rep.failed_rows > 0) {
    std::fprintf(stderr, "scaling: %d row(s) failed\n", rep.failed_rows);
    for (const auto& r : rep.rows)
      if (!r.error.empty()) std::fprintf(stderr, "  tau=%g: %s\n", r.tau, r.error.c_str());
    return kExitNumeric;
  }
  return std::abs(rep.lambda_fit.slope + k) <= slope_tol ? kExitOk : kExitNotVerified;
}

int run_counterexample(int k, double tau_min, double tau_max, int points, double v_half,
                       double vp_half, bool check_pde, bool comparison, bool dump_field,
                       double slope_min, const CommonOpts& c) {
  std::vector<double> taus = geometric_grid(tau_min, tau_max, points);
  FalsifyOptions opt;
  opt.tol = c.tol;
  opt.check_pde = check_pde;
  opt.comparison_elliptic = comparison;
  const Box3 v = Box3::cube(v_half), vp = Box3::cube(vp_half);
  const CounterexampleReport rep = falsify_baire(k, taus, v, vp, opt);

  std::printf("counterexample sweep k=%d%s\n", k, comparison ? " (elliptic comparison)" : "");
  for (const auto& r : rep.rows) {
    if (!r.error.empty()) {
      std::printf("  tau=%-8g FAILED: %s\n", r.tau, r.error.c_str());
      continue;
    }
    std::printf("  tau=%-8g sup_V'|u|=%-12.6g sup_V|dt u|=%-12.6g R=%-12.6g", r.tau,
                r.sup_u_vprime, r.sup_dtu_v, r.ratio);
    if (r.fd_residual)
      std::printf(" pde residual %.3g (h=%.3g, order %.3g)", *r.fd_residual, *r.h_used,
                  r.fd_order.value_or(std::nan("")));
    std::printf("\n");
  }
  std::printf("growth fit: slope %.6g, r^2 %.8g\n", rep.growth_fit.slope,
              rep.growth_fit.r_squared);
  std::printf("sup_V' fit: slope %.6g, max %.6g -> %s\n", rep.supv_fit.slope, rep.max_sup_vprime,
              rep.sup_bounded ? "bounded" : "unbounded");
  std::printf("%s\n", rep.falsified ? "inequality falsified (unbounded C^1/C^0 ratio)"
                                    : "not falsifying on this configuration");

  Json config = common_json(c, "counterexample");
  config["k"] = k;
  config["tau_min"] = tau_min;
  config["tau_max"] = tau_max;
  config["points"] = points;
  config["V_half"] = v_half;
  config["Vprime_half"] = vp_half;
  config["check_pde"] = check_pde;
  config["comparison_elliptic"] = comparison;
  config["slope_min"] = slope_min;
  ensure_out_dir(c);
  if (want_csv(c))
    write_text_file(out_path(c, "counterexample.csv"), counterexample_csv(rep.rows, config));
  if (want_json(c))
    write_text_file(out_path(c, "counterexample.json"),
                    counterexample_json(rep, config).dump(2) + "\n");
  if (dump_field && !comparison) {
    const double tau = taus.back();
    Field3 u = build_u(k, tau, norm_grid(vp, tau, opt), c.tol);
    write_field_binary(out_path(c, "field_u"), u, config);
  }
  write_run_meta(c, "counterexample");

  if (rep.failed_rows > 0) {
    std::fprintf(stderr, "counterexample: %d row(s) failed\n", rep.failed_rows);
    return kExitNumeric;
  }
  return rep.growth_fit.slope >= slope_min ? kExitOk : kExitNotVerified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sum-of-squares vector field laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOpts copt;

  // brackets
  auto* cmd_br = app.add_subcommand("brackets", "iterated Lie bracket rank at a point");
  int br_k = 1, br_depth = 0;
  std::vector<double> br_point;
  cmd_br->add_option("--k", br_k, "degeneracy exponent")->check(CLI::Range(1, 16));
  cmd_br->add_option("--point", br_point, "evaluation point x,t,s")->delimiter(',')->expected(3);
  cmd_br->add_option("--depth", br_depth, "bracket depth (default k+2)");
  add_common(cmd_br, copt);

  // eigen
  auto* cmd_ei = app.add_subcommand("eigen", "ground state at one (k, tau) with FD cross-check");
  int ei_k = 1, ei_m = 4096;
  double ei_tau = 16.0, ei_r = 12.0, ei_agree = 1e-4;
  cmd_ei->add_option("--k", ei_k)->check(CLI::Range(1, 16));
  cmd_ei->add_option("--tau", ei_tau)->check(CLI::Range(1.0, 1e18));
  cmd_ei->add_option("--fd-R", ei_r, "FD half-width")->check(CLI::Range(8.0, 1e3));
  cmd_ei->add_option("--fd-M", ei_m, "FD grid intervals")->check(CLI::Range(16, 1 << 20));
  cmd_ei->add_option("--agree-tol", ei_agree, "required relative agreement")
      ->check(CLI::PositiveNumber);
  add_common(cmd_ei, copt);

  // scaling
  auto* cmd_sc = app.add_subcommand("scaling", "tau sweep with power-law fits");
  int sc_k = 1, sc_points = 15;
  double sc_min = 1.0, sc_max = 16384.0, sc_fitmin = 64.0, sc_stol = 0.05;
  cmd_sc->add_option("--k", sc_k)->check(CLI::Range(1, 16));
  cmd_sc->add_option("--tau-min", sc_min)->check(CLI::Range(1.0, 1e18));
  cmd_sc->add_option("--tau-max", sc_max)->check(CLI::Range(1.0, 1e18));
  cmd_sc->add_option("--points", sc_points);
  cmd_sc->add_option("--fit-tau-min", sc_fitmin, "exclude tau below this from fits");
  cmd_sc->add_option("--slope-tol", sc_stol, "accepted |slope + k|")->check(CLI::PositiveNumber);
  add_common(cmd_sc, copt);

  // counterexample
  auto* cmd_ce = app.add_subcommand("counterexample", "C^1/C^0 growth falsifier");
  int ce_k = 1, ce_points = 7;
  double ce_min = 16.0, ce_max = 1024.0, ce_v = 0.5, ce_vp = 1.0, ce_slope = 0.95;
  bool ce_pde = false, ce_cmp = false, ce_dump = false;
  cmd_ce->add_option("--k", ce_k)->check(CLI::Range(1, 16));
  cmd_ce->add_option("--tau-min", ce_min)->check(CLI::Range(1.0, 1e18));
  cmd_ce->add_option("--tau-max", ce_max)->check(CLI::Range(1.0, 1e18));
  cmd_ce->add_option("--points", ce_points);
  cmd_ce->add_option("--v-half", ce_v, "half-width of the inner box V");
  cmd_ce->add_option("--vprime-half", ce_vp, "half-width of the outer box V'");
  cmd_ce->add_flag("--check-pde", ce_pde, "FD-verify L u = 0 for tau <= 64");
  cmd_ce->add_flag("--comparison", ce_cmp, "replace Z2 = x^k L by the non-degenerate L");
  cmd_ce->add_flag("--dump-field", ce_dump, "raw binary dump of u at the largest tau");
  cmd_ce->add_option("--slope-min", ce_slope, "growth slope certifying falsification");
  add_common(cmd_ce, copt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_br->parsed()) return run_brackets(br_k, br_point, br_depth, copt);
    if (cmd_ei->parsed()) return run_eigen(ei_k, ei_tau, ei_r, ei_m, ei_agree, copt);
    if (cmd_sc->parsed())
      return run_scaling(sc_k, sc_min, sc_max, sc_points, sc_fitmin, sc_stol, copt);
    if (cmd_ce->parsed())
      return run_counterexample(ce_k, ce_min, ce_max, ce_points, ce_v, ce_vp, ce_pde, ce_cmp,
                                ce_dump, ce_slope, copt);
  } catch (const SolveError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
