#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumsq/counterexample.hpp"
#include "sumsq/eigensolver.hpp"
#include "sumsq/field3.hpp"
#include "sumsq/hermite.hpp"
#include "sumsq/model.hpp"
#include "sumsq/power_law.hpp"
#include "sumsq/scaling.hpp"
#include "sumsq/version.hpp"

namespace sumsq {

using Json = nlohmann::ordered_json;

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// Canonical output files contain no timestamps; callers write them verbatim.
inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// "# version=..." / "# config=..." preamble shared by all CSV emitters; the
/// first non-comment line is the fixed column header.
inline std::string csv_preamble(const Json& config) {
  return std::string("# version=") + kVersion + "\n# config=" + config.dump() + "\n";
}

inline Json fit_json(const PowerLawFit& f) {
  return Json{{"slope", f.slope},        {"intercept", f.intercept}, {"r_squared", f.r_squared},
              {"tau_min", f.x_min},      {"tau_max", f.x_max},       {"n_points", f.n_points}};
}

// ---------------------------------------------------------------------------
// scaling

inline std::string scaling_csv(const std::vector<ScalingRow>& rows, const Json& config) {
  std::string out = csv_preamble(config);
  out += "tau,k,lambda,lambda_tau_k,sigma,N_used,residual,ynorm,dnorm,overlap,gnorm,sup_near0\n";
  for (const auto& r : rows) {
    out += fmt_double(r.tau) + "," + std::to_string(r.k) + "," + fmt_double(r.lambda) + "," +
           fmt_double(r.lambda_tau_k) + "," + fmt_double(r.sigma) + "," + std::to_string(r.n_used) +
           "," + fmt_double(r.residual) + "," + fmt_double(r.ynorm) + "," + fmt_double(r.dnorm) +
           "," + fmt_double(r.overlap) + "," + fmt_double(r.gnorm) + "," +
           fmt_double(r.sup_near0) + "\n";
  }
  return out;
}

inline Json scaling_row_json(const ScalingRow& r) {
  Json j{{"tau", r.tau},           {"k", r.k},
         {"lambda", r.lambda},     {"lambda_tau_k", r.lambda_tau_k},
         {"sigma", r.sigma},       {"N_used", r.n_used},
         {"residual", r.residual}, {"ynorm", r.ynorm},
         {"dnorm", r.dnorm},       {"overlap", r.overlap},
         {"gnorm", r.gnorm},       {"sup_near0", r.sup_near0}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline Json scaling_json(const ScalingReport& rep, const Json& config) {
  Json rows = Json::array();
  for (const auto& r : rep.rows) rows.push_back(scaling_row_json(r));
  return Json{{"version", kVersion},
              {"config", config},
              {"k", rep.k},
              {"fit_tau_min", rep.fit_tau_min},
              {"rows", rows},
              {"lambda_fit", fit_json(rep.lambda_fit)},
              {"sigma_fit", fit_json(rep.sigma_fit)},
              {"lambda_tau_k_inf", rep.lambda_tau_k_inf},
              {"lambda_tau_k_sup", rep.lambda_tau_k_sup},
              {"failed_rows", rep.failed_rows}};
}

// ---------------------------------------------------------------------------
// counterexample

inline std::string counterexample_csv(const std::vector<CounterexampleRow>& rows,
                                      const Json& config) {
  std::string out = csv_preamble(config);
  out += "tau,sup_u_Vprime,sup_dtu_V,ratio,fd_residual,h_used\n";
  const double nan = std::nan("");
  for (const auto& r : rows) {
    out += fmt_double(r.tau) + "," + fmt_double(r.sup_u_vprime) + "," + fmt_double(r.sup_dtu_v) +
           "," + fmt_double(r.ratio) + "," + fmt_double(r.fd_residual.value_or(nan)) + "," +
           fmt_double(r.h_used.value_or(nan)) + "\n";
  }
  return out;
}

inline Json box_json(const Box3& b) {
  return Json{{"lo", {b.lo[0], b.lo[1], b.lo[2]}}, {"hi", {b.hi[0], b.hi[1], b.hi[2]}}};
}

inline Json counterexample_json(const CounterexampleReport& rep, const Json& config) {
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json j{{"tau", r.tau},
           {"sup_u_Vprime", r.sup_u_vprime},
           {"sup_dtu_V", r.sup_dtu_v},
           {"ratio", r.ratio},
           {"fd_residual", r.fd_residual ? Json(*r.fd_residual) : Json(nullptr)},
           {"h_used", r.h_used ? Json(*r.h_used) : Json(nullptr)},
           {"fd_order", r.fd_order ? Json(*r.fd_order) : Json(nullptr)}};
    if (!r.error.empty()) j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  return Json{
      {"version", kVersion},
      {"config", config},
      {"k", rep.k},
      {"comparison_elliptic", rep.comparison_elliptic},
      {"V", box_json(rep.v)},
      {"Vprime", box_json(rep.vprime)},
      {"rows", rows},
      {"growth_fit", fit_json(rep.growth_fit)},
      {"sup_vprime_fit", fit_json(rep.supv_fit)},
      {"falsified", rep.falsified},
      {"sup_bounded", rep.sup_bounded},
      {"max_sup_vprime", rep.max_sup_vprime},
      {"failed_rows", rep.failed_rows},
      {"notes",
       {"the operator annihilates u_tau exactly, so the higher-norm source term vanishes "
        "identically and R(tau) bounds the inequality constant from below",
        "fd_residual at fixed h carries rounding amplified by roughly eps * tau^2 from the "
        "oscillatory t-stencils; it is reported, not asserted, at large tau"}}};
}

// ---------------------------------------------------------------------------
// eigen

inline Json norms_json(const NormProfile& np) {
  return Json{{"ynorm", np.ynorm},     {"dnorm", np.dnorm},
              {"overlap", np.overlap}, {"gnorm", np.gnorm},
              {"supnorm", np.supnorm}, {"sup_near0", np.sup_near0}};
}

inline Json eigen_json(const GroundState& galerkin, const NormProfile& np,
                       const GroundState& fd, double fd_r, int fd_m, double agree_tol,
                       const Json& config) {
  const double rel =
      std::abs(galerkin.lambda - fd.lambda) / std::max(std::abs(galerkin.lambda), 1e-300);
  return Json{{"version", kVersion},
              {"config", config},
              {"k", galerkin.k},
              {"tau", galerkin.tau},
              {"galerkin",
               Json{{"lambda", galerkin.lambda},
                    {"N", galerkin.n_basis},
                    {"residual", galerkin.residual},
                    {"gap", galerkin.gap}}},
              {"norms", norms_json(np)},
              {"fd_oracle",
               Json{{"lambda", fd.lambda},
                    {"R", fd_r},
                    {"M", fd_m},
                    {"residual", fd.residual}}},
              {"rel_difference", rel},
              {"agree_tol", agree_tol},
              {"agree", rel <= agree_tol}};
}

// ---------------------------------------------------------------------------
// brackets

inline Json brackets_json(const RankReport& rep, int k, std::span<const double> point, int depth,
                          const Json& config) {
  Json witness = Json::array();
  for (const auto& w : rep.witness)
    witness.push_back(Json{{"label", w.label}, {"depth", w.depth}, {"field", w.field.to_string()}});
  return Json{{"version", kVersion},
              {"config", config},
              {"k", k},
              {"point", {point[0], point[1], point[2]}},
              {"depth", depth},
              {"rank", rep.rank},
              {"real_rank", rep.real_rank},
              {"rank_at_depth", rep.rank_at_depth},
              {"witness", witness},
              {"full_rank", rep.rank == 3}};
}

// ---------------------------------------------------------------------------
// raw field dump

/// Flat binary dump: little-endian float64, re/im interleaved, x-major order
/// index = (ix*nt + it)*ns + is. A JSON sidecar describes the layout.
inline void write_field_binary(const std::string& base_path, const Field3& f,
                               const Json& config) {
  std::vector<double> flat;
  flat.reserve(2 * f.data.size());
  for (const Complex& c : f.data) {
    flat.push_back(c.real());
    flat.push_back(c.imag());
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (double& x : flat) {
      std::uint64_t u;
      std::memcpy(&u, &x, 8);
      u = ((u & 0x00000000000000ffULL) << 56) | ((u & 0x000000000000ff00ULL) << 40) |
          ((u & 0x0000000000ff0000ULL) << 24) | ((u & 0x00000000ff000000ULL) << 8) |
          ((u & 0x000000ff00000000ULL) >> 8) | ((u & 0x0000ff0000000000ULL) >> 24) |
          ((u & 0x00ff000000000000ULL) >> 40) | ((u & 0xff00000000000000ULL) >> 56);
      std::memcpy(&x, &u, 8);
    }
  }
  std::ofstream out(base_path + ".bin", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + base_path + ".bin for writing");
  out.write(reinterpret_cast<const char*>(flat.data()),
            static_cast<std::streamsize>(flat.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + base_path + ".bin");

  Json side{{"version", kVersion},
            {"config", config},
            {"layout", "complex128 interleaved little-endian float64"},
            {"order", "x-major: index = (ix*nt + it)*ns + is"},
            {"shape", {f.grid.x.n, f.grid.t.n, f.grid.s.n}},
            {"x", Json{{"lo", f.grid.x.lo}, {"hi", f.grid.x.hi}}},
            {"t", Json{{"lo", f.grid.t.lo}, {"hi", f.grid.t.hi}}},
            {"s", Json{{"lo", f.grid.s.lo}, {"hi", f.grid.s.hi}}},
            {"k", f.k},
            {"tau", f.tau},
            {"sigma", f.sigma},
            {"N_basis", f.n_basis}};
  write_text_file(base_path + ".meta.json", side.dump(2) + "\n");
}

}  // namespace sumsq
