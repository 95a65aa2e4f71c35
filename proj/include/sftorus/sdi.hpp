#pragma once

// Slow divergence integral I = int_C div X_0 ds along a critical curve,
// with s the slow time (dy/ds = g). For the skew-product class this is
//   I = int f_x / |g| |dy|,
// independent of the direction in which the loop is traversed.

#include <sftorus/curves.hpp>
#include <sftorus/model.hpp>

#include <optional>
#include <vector>

namespace sftorus {

enum class SdiMethod { Analytic, Quadrature };

struct SdiValue {
  double value = 0.0;
  int curve_index = 0;
  SdiMethod method = SdiMethod::Quadrature;
  double est_error = 0.0;
};

/// Exact lookup of curve points by the curve's monotone coordinate.
class CurveParametrization {
 public:
  CurveParametrization(const SlowFastModel& model, const CriticalCurve& curve);

  /// Start value and (positive) one-loop span of the parameter.
  double start() const { return u0_; }
  double span() const { return span_; }
  /// +1 when the slow flow increases the parameter, -1 otherwise.
  int slow_direction() const { return slow_dir_; }
  ParamAxis axis() const { return axis_; }

  /// Point of the curve with the given parameter (any real value; the
  /// curve is continued periodically in the lift).
  LiftPoint point(double u) const;

  /// Integrand of I with respect to |du|.
  double integrand(double u) const;

 private:
  const SlowFastModel& model_;
  const CriticalCurve& curve_;
  ParamAxis axis_;
  int coord_;      // 0: parametrize by x, 1: by y
  double u0_ = 0.0;
  double span_ = 0.0;
  double sign_ = 1.0;  // direction of the samples in the parameter
  Vec2 shift_;         // lattice displacement of one loop of the samples
  int slow_dir_ = 1;
};

/// Adaptive Gauss-Kronrod quadrature over one loop (relative tolerance 1e-8).
/// Throws AssumptionViolated when g vanishes on the curve or the curve has
/// even-order or undetermined contacts.
SdiValue slow_divergence_integral(const SlowFastModel& model,
                                  const CriticalCurve& curve,
                                  double rel_tol = 1e-8);

/// Sum of the integrals over [b_i, b_{i+1}]. Breakpoints are parameter
/// values (see CurveParametrization) ordered along the slow flow, with the
/// last one equal to the first plus one loop. Throws InvalidArgument otherwise.
SdiValue sdi_by_segments(const SlowFastModel& model, const CriticalCurve& curve,
                         const std::vector<double>& breakpoints,
                         double rel_tol = 1e-10);

/// Closed form where one exists: sine-link curves (+-2 pi m k^2) and
/// graph models whose phi' has constant sign (Parseval). nullopt otherwise.
std::optional<SdiValue> analytic_sdi(const SlowFastModel& model,
                                     const CriticalCurve& curve);

}  // namespace sftorus
