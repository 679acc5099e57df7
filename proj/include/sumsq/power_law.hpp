#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

namespace sumsq {

/// Ordinary least squares on (log x, log y): y ~ exp(intercept) * x^slope.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log of the prefactor
  double r_squared = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
};

inline PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_power_law: at least 3 points required");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  PowerLawFit fit;
  fit.n_points = static_cast<int>(points.size());
  fit.x_min = points.front().first;
  fit.x_max = points.front().first;
  for (const auto& [x, y] : points) {
    if (x <= 0.0 || y <= 0.0) throw std::domain_error("fit_power_law: positive data required");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    fit.x_min = std::min(fit.x_min, x);
    fit.x_max = std::max(fit.x_max, x);
  }
  const double n = static_cast<double>(points.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::domain_error("fit_power_law: degenerate abscissae");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_ly = sy / n;
  for (const auto& [x, y] : points) {
    const double ly = std::log(y);
    const double pred = fit.intercept + fit.slope * std::log(x);
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - mean_ly) * (ly - mean_ly);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : std::max(0.0, std::min(1.0, 1.0 - ss_res / ss_tot));
  return fit;
}

}  // namespace sumsq
