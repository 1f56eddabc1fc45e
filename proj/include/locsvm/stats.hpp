#pragma once

#include <span>

namespace locsvm {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  int n = 0;
};

// Ordinary least squares y = intercept + slope·x with the usual residual
// based standard error for the slope. Requires at least two points.
SlopeFit ols_fit(std::span<const double> x, std::span<const double> y);

}  // namespace locsvm
