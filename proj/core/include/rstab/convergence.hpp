// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

namespace rstab::harness {

// Least-squares slope of log(error) against log(h). Errors that sit at
// the roundoff floor make the fit meaningless, so the fit is flagged and
// the slope left at zero when every error is below 1e-10.
struct SlopeFit {
  double slope = 0.0;
  double max_error = 0.0;
  bool at_floor = false;
};

SlopeFit fitted_slope(const std::vector<double>& h, const std::vector<double>& err);

// The pinned acceptance reading of "second order": fitted slope at least
// min_slope, or every error at the floor. An upper cap is applied only
// when the criterion pins a band.
bool second_order(const SlopeFit& fit, double min_slope = 1.6);

}  // namespace rstab::harness
