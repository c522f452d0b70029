#ifndef WENTZELL_FIT_HPP
#define WENTZELL_FIT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "wentzell/errors.hpp"

namespace wentzell {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (x_i, y_i).
inline LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw BadParameters("fit_line: need at least two points");
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw BadParameters("fit_line: degenerate abscissae");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

/// Slope of log(y) against log(x); points with y <= 0 are dropped.
inline LinearFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  return fit_line(lx, ly);
}

/// Convergence order: slope of log(error) against log(h).
inline double fit_convergence_order(const std::vector<double>& hs,
                                    const std::vector<double>& errors) {
  return fit_loglog(hs, errors).slope;
}

/// True when every error already sits at the exactness floor, in which case
/// an order fit measures roundoff rather than truncation.
inline bool at_exactness_floor(const std::vector<double>& errors, double floor) {
  for (double e : errors) {
    if (e > floor) return false;
  }
  return true;
}

}  // namespace wentzell

#endif
