#include <sftorus/integrate.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace sftorus {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer-Wanner, DOPRI5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Step-size controller constants.
constexpr double kSafe = 0.9, kFacMin = 0.2, kFacMax = 10.0, kBeta = 0.04;

}  // namespace

Dopri5::Dopri5(const SlowFastModel& model, double eps, Direction dir, SolverOptions opts)
    : model_(model),
      eps_(eps),
      sign_(dir == Direction::Forward ? 1.0 : -1.0),
      opts_(opts) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::InvalidArgument, "integrator: eps must be finite and >= 0");
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "integrator: tolerances must be positive");
  cont_.setZero();
}

Vec3 Dopri5::rhs(const LiftPoint& p) const {
  return sign_ * augmented_field(model_, p.x(), p.y(), eps_);
}

void Dopri5::reset(const LiftPoint& p, double t, double div) {
  if (!p.allFinite()) throw Error(ErrorCode::NonFinite, "integrator: non-finite start");
  t_ = t_prev_ = t;
  y_ << p.x(), p.y(), div;
  y_prev_ = y_;
  k1_ = rhs(p);
  const double speed = k1_.head<2>().norm();
  h_ = std::min(opts_.max_step, speed > 0.0 ? 1e-2 / std::max(speed, 1e-2) : 1e-2);
  err_old_ = 1e-4;
  cont_.setZero();
  cont_.col(0) = y_;
}

void Dopri5::step(double t_limit) {
  const double remaining = t_limit - t_;
  if (remaining <= 0.0) return;
  const double expo = 0.2 - kBeta * 0.75;
  for (;;) {
    double h = std::min({h_, opts_.max_step, remaining});
    if (h < 1e-14 * std::max(1.0, std::abs(t_)))
      throw Error(ErrorCode::StepUnderflow, "integrator: step-size underflow");
    auto f = [&](const Vec3& y) { return rhs(y.head<2>()); };
    const Vec3& y = y_;
    const Vec3 k2 = f(y + h * a21 * k1_);
    const Vec3 k3 = f(y + h * (a31 * k1_ + a32 * k2));
    const Vec3 k4 = f(y + h * (a41 * k1_ + a42 * k2 + a43 * k3));
    const Vec3 k5 = f(y + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec3 k6 = f(y + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec3 y1 = y + h * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const Vec3 k7 = f(y1);
    const Vec3 err_vec = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    // Angles are measured modulo 2 pi, so their relative scale is capped.
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      double mag = std::max(std::abs(y[i]), std::abs(y1[i]));
      if (i < 2) mag = std::min(mag, kTwoPi);
      const double sc = opts_.abs_tol + opts_.rel_tol * mag;
      err += (err_vec[i] / sc) * (err_vec[i] / sc);
    }
    err = std::sqrt(err / 3.0);
    if (!std::isfinite(err)) {
      h_ = 0.1 * h;
      continue;
    }

    const double fac11 = std::pow(err, expo);
    if (err <= 1.0) {
      double fac = fac11 / std::pow(err_old_, kBeta);
      fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
      err_old_ = std::max(err, 1e-4);
      const Vec3 ydiff = y1 - y;
      const Vec3 bspl = h * k1_ - ydiff;
      cont_.col(0) = y;
      cont_.col(1) = ydiff;
      cont_.col(2) = bspl;
      cont_.col(3) = ydiff - h * k7 - bspl;
      cont_.col(4) = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      y_prev_ = y_;
      t_prev_ = t_;
      y_ = y1;
      t_ = (h == remaining) ? t_limit : t_ + h;
      k1_ = k7;
      h_ = h / fac;
      ++accepted_;
      return;
    }
    h_ = h / std::min(1.0 / kFacMin, fac11 / kSafe);
  }
}

Vec3 Dopri5::dense(double t) const {
  const double h = t_ - t_prev_;
  if (h <= 0.0) return y_;
  const double s = (t - t_prev_) / h;
  const double s1 = 1.0 - s;
  return cont_.col(0) +
         s * (cont_.col(1) + s1 * (cont_.col(2) + s * (cont_.col(3) + s1 * cont_.col(4))));
}

Trajectory flow(const SlowFastModel& model, double eps, const LiftPoint& p0, double T,
                const SolverOptions& opts, Direction direction) {
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "flow: T must be positive");
  if (T > opts.max_time)
    throw Error(ErrorCode::MaxTimeExceeded, "flow: requested time exceeds max_time");
  Dopri5 stepper(model, eps, direction, opts);
  stepper.reset(p0);
  Trajectory traj;
  traj.eps = eps;
  traj.direction = direction;
  traj.model_label = model.label();
  traj.times.push_back(0.0);
  traj.points.push_back(p0);
  traj.div_accum.push_back(0.0);
  while (stepper.t() < T) {
    stepper.step(T);
    traj.times.push_back(stepper.t());
    traj.points.push_back(stepper.point());
    traj.div_accum.push_back(stepper.state()[2]);
  }
  return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x_lift,y_lift,x_wrapped,y_wrapped,div_accum\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto& p = traj.points[i];
    const TorusPoint w = wrap(p);
    os << traj.times[i] << ',' << p.x() << ',' << p.y() << ',' << w.x() << ',' << w.y()
       << ',' << traj.div_accum[i] << '\n';
  }
}

}  // namespace sftorus
