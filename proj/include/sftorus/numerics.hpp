#pragma once

// Small scalar numerics shared by the curve, SDI and cycle code.

#include <sftorus/types.hpp>

#include <functional>

namespace sftorus {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature: the interval with the
/// largest error estimate is bisected until the total estimate satisfies
/// err <= max(abs_tol, rel_tol |value|). Throws NoConvergence when
/// max_intervals is reached first.
QuadratureResult gauss_kronrod(const std::function<double(double)>& f, double a,
                               double b, double rel_tol = 1e-8,
                               double abs_tol = 1e-13, int max_intervals = 20000);

/// Brent's method on a sign-changing bracket [a, b]. Throws
/// InvalidArgument when f(a) and f(b) have the same strict sign.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double xtol = 1e-15, int max_iter = 200);

}  // namespace sftorus
