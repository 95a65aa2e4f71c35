#pragma once

// Dormand-Prince 5(4) integration of the augmented system
//   x' = f,  y' = eps g,  z' = div X_eps = f_x + eps g_y
// on the universal cover, with PI step control and dense output.

#include <sftorus/model.hpp>
#include <sftorus/torus.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace sftorus {

enum class Direction { Forward, Backward };

struct SolverOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = 5.0;
  double max_time = 1e7;
};

/// Accepted steps of one integration. For Direction::Backward the times are
/// elapsed reversed time and div_accum integrates the divergence of the
/// reversed field (that is, minus div X_eps).
struct Trajectory {
  std::vector<double> times;
  std::vector<LiftPoint> points;
  std::vector<double> div_accum;
  double eps = 0.0;
  Direction direction = Direction::Forward;
  std::string model_label;

  std::size_t size() const { return times.size(); }
};

/// Single-trajectory stepper exposing the continuous extension of each step.
class Dopri5 {
 public:
  Dopri5(const SlowFastModel& model, double eps, Direction dir, SolverOptions opts);

  void reset(const LiftPoint& p, double t = 0.0, double div = 0.0);
  /// One accepted step, never beyond t_limit.
  void step(double t_limit);

  double t() const { return t_; }
  double t_prev() const { return t_prev_; }
  const Vec3& state() const { return y_; }
  const Vec3& state_prev() const { return y_prev_; }
  LiftPoint point() const { return y_.head<2>(); }
  /// Dense output on [t_prev, t].
  Vec3 dense(double t) const;
  /// The (possibly reversed) field at a lift point.
  Vec3 rhs(const LiftPoint& p) const;
  long steps() const { return accepted_; }

 private:
  const SlowFastModel& model_;
  double eps_;
  double sign_;
  SolverOptions opts_;

  double t_ = 0.0, t_prev_ = 0.0, h_ = 1e-3, err_old_ = 1e-4;
  Vec3 y_ = Vec3::Zero(), y_prev_ = Vec3::Zero(), k1_ = Vec3::Zero();
  Eigen::Matrix<double, 3, 5> cont_;
  long accepted_ = 0;
};

/// Integrates for duration T > 0. Throws StepUnderflow, or MaxTimeExceeded
/// when T exceeds opts.max_time.
Trajectory flow(const SlowFastModel& model, double eps, const LiftPoint& p0,
                double T, const SolverOptions& opts = {},
                Direction direction = Direction::Forward);

inline Trajectory flow(const SlowFastModel& model, double eps, const TorusPoint& p0,
                       double T, const SolverOptions& opts = {},
                       Direction direction = Direction::Forward) {
  return flow(model, eps, LiftPoint(p0.vec()), T, opts, direction);
}

/// CSV with columns t,x_lift,y_lift,x_wrapped,y_wrapped,div_accum.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace sftorus
