// SPDX-License-Identifier: MIT
#include "rstab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rstab::harness {

SlopeFit fitted_slope(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2)
    throw std::invalid_argument("fitted_slope needs matching lists of at least 2 points");
  SlopeFit fit;
  for (double e : err) fit.max_error = std::max(fit.max_error, std::abs(e));
  if (fit.max_error < 1e-10) {
    fit.at_floor = true;
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(std::max(std::abs(err[i]), 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(h.size());
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return fit;
}

bool second_order(const SlopeFit& fit, double min_slope) {
  return fit.at_floor || fit.slope >= min_slope;
}

}  // namespace rstab::harness
