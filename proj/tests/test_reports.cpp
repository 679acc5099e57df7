#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sumsq/report.hpp"

using namespace sumsq;
namespace fs = std::filesystem;

namespace {

std::vector<ScalingRow> sample_rows() {
  std::vector<ScalingRow> rows;
  for (double tau : {1.0, 4.0}) {
    ScalingRow r;
    r.tau = tau;
    r.k = 1;
    r.lambda = 3.0 / tau;
    r.lambda_tau_k = 3.0;
    r.sigma = std::sqrt(3.0);
    r.n_used = 64;
    r.residual = 1e-12;
    r.ynorm = 0.71;
    r.dnorm = 0.71;
    r.overlap = 0.999;
    r.gnorm = 0.04;
    r.sup_near0 = 0.75;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TEST_CASE("scaling csv layout") {
  const Json config{{"subcommand", "scaling"}, {"k", 1}};
  const std::string csv = scaling_csv(sample_rows(), config);
  CHECK(csv.find("# version=") == 0);
  CHECK(csv.find("# config=") != std::string::npos);
  CHECK(csv.find("tau,k,lambda,lambda_tau_k,sigma,N_used,residual,ynorm,dnorm,overlap,gnorm,"
                 "sup_near0\n") != std::string::npos);
  // two data lines after the header
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 5);
}

TEST_CASE("scaling json embeds config, version and fits") {
  ScalingReport rep = analyze_sweep(1, [] {
        auto rows = sample_rows();
        ScalingRow more;
        for (double tau : {64.0, 256.0, 1024.0}) {
          more.tau = tau;
          more.k = 1;
          more.lambda = 3.0 / tau;
          more.sigma = std::sqrt(3.0);
          rows.push_back(more);
        }
        return rows;
      }(),
      64.0);
  const Json config{{"subcommand", "scaling"}, {"k", 1}};
  const Json j = scaling_json(rep, config);
  CHECK(j["version"] == kVersion);
  CHECK(j["config"]["subcommand"] == "scaling");
  CHECK(j["rows"].size() == 5);
  CHECK(j["lambda_fit"]["slope"].get<double>() == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(j.contains("sigma_fit"));
}

TEST_CASE("counterexample csv and json") {
  CounterexampleRow r;
  r.tau = 16.0;
  r.sup_u_vprime = 4.1;
  r.sup_dtu_v = 28.7;
  r.ratio = 7.0;
  r.fd_residual = 0.05;
  r.h_used = 0.05;
  CounterexampleRow r2;
  r2.tau = 1024.0;
  r2.sup_u_vprime = 4.2;
  r2.sup_dtu_v = 1828.0;
  r2.ratio = 435.0;
  const Json config{{"subcommand", "counterexample"}};
  const std::string csv = counterexample_csv({r, r2}, config);
  CHECK(csv.find("tau,sup_u_Vprime,sup_dtu_V,ratio,fd_residual,h_used\n") != std::string::npos);
  CHECK(csv.find("nan") != std::string::npos);  // missing residual on the large-tau row

  CounterexampleReport rep;
  rep.k = 1;
  rep.rows = {r, r2};
  const Json j = counterexample_json(rep, config);
  CHECK(j["rows"][0]["fd_residual"].get<double>() == doctest::Approx(0.05));
  CHECK(j["rows"][1]["fd_residual"].is_null());
  CHECK(j.contains("notes"));
  CHECK(j["notes"].size() == 2);
  CHECK(j["version"] == kVersion);
}

TEST_CASE("field binary dump round trip") {
  Field3 f;
  f.grid = {Axis{-1, 1, 3}, Axis{-1, 1, 2}, Axis{-1, 1, 2}};
  f.k = 1;
  f.tau = 4.0;
  f.sigma = 1.5;
  f.data.resize(f.grid.count());
  for (std::size_t i = 0; i < f.data.size(); ++i)
    f.data[i] = Complex(static_cast<double>(i), -0.5 * static_cast<double>(i));

  const fs::path dir = fs::temp_directory_path() / "sumsq_test_dump";
  fs::create_directories(dir);
  const std::string base = (dir / "field").string();
  write_field_binary(base, f, Json{{"probe", true}});

  std::ifstream in(base + ".bin", std::ios::binary);
  REQUIRE(in.good());
  std::vector<double> flat(2 * f.data.size());
  in.read(reinterpret_cast<char*>(flat.data()),
          static_cast<std::streamsize>(flat.size() * sizeof(double)));
  CHECK(in.gcount() == static_cast<std::streamsize>(flat.size() * sizeof(double)));
  CHECK(flat[0] == 0.0);
  CHECK(flat[2] == 1.0);   // re of sample 1
  CHECK(flat[3] == -0.5);  // im of sample 1

  std::ifstream meta(base + ".meta.json");
  REQUIRE(meta.good());
  Json side = Json::parse(meta);
  CHECK(side["shape"] == Json({3, 2, 2}));
  CHECK(side["tau"] == 4.0);
  CHECK(side["layout"].get<std::string>().find("little-endian") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("double formatting is canonical") {
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(1.0 / 3.0) == fmt_double(1.0 / 3.0));
  CHECK(fmt_double(std::nan("")) == "nan");
}
