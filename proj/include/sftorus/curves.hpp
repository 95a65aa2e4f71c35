#pragma once

// Critical curves {f = 0} of a slow-fast model, their contact points with
// the (horizontal) fast foliation, and the checks on the critical link.

#include <sftorus/model.hpp>
#include <sftorus/torus.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sftorus {

struct ContactPoint {
  TorusPoint location;
  LiftPoint lift;
  /// Vanishing order of f along the fast fiber; nullopt when it exceeds 7.
  std::optional<int> order;
  bool regular = false;
  bool odd = false;
  double slow_value = 0.0;
};

/// Coordinate that parametrizes a curve monotonically.
enum class ParamAxis { X, Y };

struct CriticalCurve {
  ClosedCurve curve;
  WindingPair winding;
  /// -1 attracting, +1 repelling, 0 when f_x changes sign along the curve.
  int stability = 0;
  std::vector<ContactPoint> contacts;
  int index = 0;
  ParamAxis axis = ParamAxis::Y;
};

struct CurveOptions {
  double sample_gap = 0.01;
  double min_step = 1e-3;
  double max_step = 1e-1;
  /// Number of horizontal fibers scanned for starting points.
  int fibers = 8;
  int scan_points = 4096;
  double max_lift_length = 500.0;
};

/// All closed zero curves of the fast component. Sine-link models are
/// parametrized exactly; other models are traced by predictor-corrector
/// continuation.
std::vector<CriticalCurve> critical_curves(const SlowFastModel& model,
                                           const CurveOptions& opts = {});

/// Continuation of the zero curve of f through start until it closes on
/// the torus. Samples satisfy |f| < 1e-12 and are at most sample_gap apart.
ClosedCurve trace_zero_curve(const SlowFastModel& model, const LiftPoint& start,
                             const CurveOptions& opts = {});

/// Points of the curve where f_x = 0, with contact order, regularity and parity.
std::vector<ContactPoint> contact_points(const SlowFastModel& model,
                                         const ClosedCurve& curve);

struct CurveReport {
  int index = 0;
  WindingPair winding;
  int stability = 0;
  /// min |f_x| over the curve (0 when contacts are present).
  double hyperbolicity_margin = 0.0;
  /// min |g(., 0)| over the curve.
  double slow_margin = 0.0;
  std::vector<ContactPoint> contacts;
};

struct AssumptionReport {
  std::vector<CurveReport> curves;
  int attracting = 0;
  int repelling = 0;
  bool windings_equal = false;
  bool windings_valid = false;
  bool alternating = false;
  bool hyperbolic_link = false;
  bool contact_link = false;
  bool slow_regular = false;
  std::vector<std::string> messages;

  bool passes(bool relaxed) const {
    return (relaxed ? contact_link : hyperbolic_link) && slow_regular;
  }
};

AssumptionReport validate_assumptions(const SlowFastModel& model,
                                      const std::vector<CriticalCurve>& curves);
AssumptionReport validate_assumptions(const SlowFastModel& model);

}  // namespace sftorus
