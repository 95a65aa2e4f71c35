#pragma once

// Geometry of the flat torus [0,2pi)^2 and of its universal cover R^2.

#include <sftorus/types.hpp>

#include <cstddef>
#include <limits>
#include <vector>

namespace sftorus {

/// Representative of a torus point in the universal cover (unwrapped angles).
using LiftPoint = Vec2;

/// Point of the torus; both angles are kept in [0, 2pi).
class TorusPoint {
 public:
  TorusPoint() : v_(0.0, 0.0) {}
  /// Throws InvalidArgument unless 0 <= x, y < 2pi.
  TorusPoint(double x, double y);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  const Vec2& vec() const { return v_; }

  friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
    return a.v_ == b.v_;
  }

 private:
  Vec2 v_;
};

/// Torus-knot type: k vertical (meridional) wraps, l horizontal wraps.
/// Numerically obtained pairs are normalized so that k > 0, or k == 0 and l >= 0.
struct WindingPair {
  int k = 0;
  int l = 0;

  WindingPair normalized() const;
  bool coprime() const;
  friend bool operator==(const WindingPair&, const WindingPair&) = default;
};

/// Closed curve sampled in the lift. The last sample is the image of the
/// first one after one loop, so back() - front() is a lattice vector.
class ClosedCurve {
 public:
  ClosedCurve() = default;
  explicit ClosedCurve(std::vector<LiftPoint> samples);

  const std::vector<LiftPoint>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const LiftPoint& operator[](std::size_t i) const { return samples_[i]; }

  LiftPoint closure_defect() const;
  /// Largest chord between consecutive samples.
  double max_gap() const;
  double length() const;

 private:
  std::vector<LiftPoint> samples_;
};

TorusPoint wrap(const LiftPoint& p);

/// Componentwise reduction of a displacement to [-pi, pi].
Vec2 reduce(const Vec2& d);

double torus_dist(const TorusPoint& a, const TorusPoint& b);

/// torus_dist of the wrapped lifts, without constructing TorusPoints.
inline double lift_dist(const LiftPoint& a, const LiftPoint& b) {
  return reduce(a - b).norm();
}

/// Winding pair from the lift displacement; residue tolerance in revolutions.
WindingPair winding(const ClosedCurve& c, double max_residue = 0.1);

/// The same closed curve started at sample j (lift kept continuous).
ClosedCurve rotate_start(const ClosedCurve& c, std::size_t j);

/// Inserts linearly interpolated samples until every chord is <= max_gap.
ClosedCurve densify(const ClosedCurve& c, double max_gap);

/// Uniform-grid index over the segments of a closed curve, for
/// nearest-distance queries under the torus metric.
class CurveIndex {
 public:
  explicit CurveIndex(const ClosedCurve& curve);

  /// Torus distance from p to the polyline through the samples. With a
  /// finite cap the search stops early and any result >= cap only means
  /// "at least cap".
  double distance(const LiftPoint& p,
                  double cap = std::numeric_limits<double>::infinity()) const;

  /// Minimum distance between the two polylines; 0 when they cross.
  double distance(const CurveIndex& other) const;

  const ClosedCurve& curve() const { return curve_; }

 private:
  struct Cell {
    std::vector<int> segments;
  };
  double segment_distance(int seg, const LiftPoint& p) const;
  void cells_of(const LiftPoint& a, const LiftPoint& b,
                std::vector<int>& out) const;

  ClosedCurve curve_;
  int n_ = 1;
  double cell_ = kTwoPi;
  std::vector<Cell> grid_;
};

/// Directed distance sup_{a in A} dist(a, B) over the samples of A.
double directed_hausdorff(const ClosedCurve& a, const CurveIndex& b);

/// Symmetric Hausdorff distance under the torus metric; samples of each
/// curve are measured against the polyline of the other.
double hausdorff_dist(const ClosedCurve& a, const ClosedCurve& b);

}  // namespace sftorus
