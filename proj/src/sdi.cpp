#include <sftorus/numerics.hpp>
#include <sftorus/sdi.hpp>

#include <algorithm>
#include <cmath>

namespace sftorus {

namespace {

void check_preconditions(const SlowFastModel& model, const CriticalCurve& curve) {
  for (const auto& p : curve.curve.samples())
    if (std::abs(model.slow(p.x(), p.y(), 0.0)) <= 1e-9)
      throw Error(ErrorCode::AssumptionViolated,
                  "slow divergence integral: slow flow vanishes on the curve");
  for (const auto& c : curve.contacts)
    if (!c.order || !c.odd || !c.regular)
      throw Error(ErrorCode::AssumptionViolated,
                  "slow divergence integral: even, irregular or undetermined contact");
}

}  // namespace

CurveParametrization::CurveParametrization(const SlowFastModel& model,
                                           const CriticalCurve& curve)
    : model_(model), curve_(curve), axis_(curve.axis) {
  coord_ = axis_ == ParamAxis::X ? 0 : 1;
  const auto& s = curve.curve.samples();
  if (s.size() < 2) throw Error(ErrorCode::InvalidArgument, "parametrization: curve too short");
  const Vec2 defect = curve.curve.closure_defect();
  if (std::abs(defect[coord_]) < 1.0)
    throw Error(ErrorCode::AssumptionViolated,
                "parametrization: curve does not advance in its parameter");
  sign_ = defect[coord_] > 0.0 ? 1.0 : -1.0;
  u0_ = s.front()[coord_];
  span_ = std::abs(defect[coord_]);
  shift_ = defect;

  // Slow flow moves y at rate g; convert to the parameter direction.
  const LiftPoint p = s.front();
  const double g = model.slow(p.x(), p.y(), 0.0);
  const double dy_du = sign_ * shift_.y() / span_;  // mean slope along the loop
  double dir = 0.0;
  if (coord_ == 1) {
    dir = g;
  } else {
    dir = g * dy_du;
  }
  slow_dir_ = dir >= 0.0 ? 1 : -1;
}

LiftPoint CurveParametrization::point(double u) const {
  const auto& s = curve_.curve.samples();
  const double full = sign_ * (u - u0_);
  const double loops = std::floor(full / span_);
  const double target = full - loops * span_;  // in [0, span)
  const int other = 1 - coord_;

  // Samples are monotone in the parameter: binary search the bracketing chord.
  auto key = [&](const LiftPoint& p) { return sign_ * (p[coord_] - u0_); };
  auto it = std::lower_bound(s.begin(), s.end(), target,
                             [&](const LiftPoint& p, double v) { return key(p) < v; });
  std::size_t hi = std::clamp<std::size_t>(it - s.begin(), 1, s.size() - 1);
  const LiftPoint& a = s[hi - 1];
  const LiftPoint& b = s[hi];
  const double ka = key(a);
  const double kb = key(b);
  const double t = kb > ka ? std::clamp((target - ka) / (kb - ka), 0.0, 1.0) : 0.0;
  const double guess = a[other] + t * (b[other] - a[other]);
  const double uu = u0_ + sign_ * target;  // the sample-frame parameter value

  auto residual = [&](double v) {
    return coord_ == 1 ? model_.fast(v, uu) : model_.fast(uu, v);
  };
  double lo = guess - 0.02;
  double hi_v = guess + 0.02;
  double flo = residual(lo);
  double fhi = residual(hi_v);
  for (int expand = 0; (flo > 0.0) == (fhi > 0.0) && expand < 6; ++expand) {
    lo -= 0.02;
    hi_v += 0.02;
    flo = residual(lo);
    fhi = residual(hi_v);
  }
  if ((flo > 0.0) == (fhi > 0.0))
    throw Error(ErrorCode::NoConvergence, "parametrization: lost the curve");
  const double v = brent_root(residual, lo, hi_v);

  LiftPoint q;
  q[coord_] = uu;
  q[other] = v;
  // Undo the periodic reduction.
  return q + loops * shift_;
}

double CurveParametrization::integrand(double u) const {
  const LiftPoint p = point(u);
  const Vec2 grad = model_.fast_gradient(p.x(), p.y());
  const double g = std::abs(model_.slow(p.x(), p.y(), 0.0));
  if (coord_ == 1) return grad.x() / g;
  // |dy/dx| = |f_x / f_y| on the curve.
  return grad.x() / g * std::abs(grad.x() / grad.y());
}

SdiValue sdi_by_segments(const SlowFastModel& model, const CriticalCurve& curve,
                         const std::vector<double>& breakpoints, double rel_tol) {
  check_preconditions(model, curve);
  const CurveParametrization param(model, curve);
  if (breakpoints.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "sdi_by_segments: need at least two breakpoints");
  const double dir = param.slow_direction();
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!((breakpoints[i] - breakpoints[i - 1]) * dir > 0.0))
      throw Error(ErrorCode::InvalidArgument,
                  "sdi_by_segments: breakpoints not ordered along the slow flow");
  const double loop = (breakpoints.back() - breakpoints.front()) * dir;
  if (std::abs(loop - param.span()) > 1e-9 * std::max(1.0, param.span()))
    throw Error(ErrorCode::InvalidArgument,
                "sdi_by_segments: breakpoints do not close one loop");

  SdiValue r;
  r.curve_index = curve.index;
  r.method = SdiMethod::Quadrature;
  auto f = [&](double u) { return param.integrand(u); };
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    const double a = std::min(breakpoints[i - 1], breakpoints[i]);
    const double b = std::max(breakpoints[i - 1], breakpoints[i]);
    const auto q = gauss_kronrod(f, a, b, rel_tol, 1e-14);
    r.value += q.value;
    r.est_error += q.error;
  }
  return r;
}

SdiValue slow_divergence_integral(const SlowFastModel& model,
                                  const CriticalCurve& curve, double rel_tol) {
  check_preconditions(model, curve);
  const CurveParametrization param(model, curve);
  const double a = param.start();
  const double b = a + param.slow_direction() * param.span();
  return sdi_by_segments(model, curve, {a, b}, rel_tol);
}

std::optional<SdiValue> analytic_sdi(const SlowFastModel& model,
                                     const CriticalCurve& curve) {
  if (curve.curve.empty()) return std::nullopt;
  const LiftPoint p = curve.curve[0];
  SdiValue r;
  r.curve_index = curve.index;
  r.method = SdiMethod::Analytic;

  if (auto sl = model.sine_link()) {
    // On the curve cos(m(ly - kx)) = +-1, f_x = -+mk, |g| = 1 and the loop
    // spans 2 pi k in y.
    const double fx = model.fast_gradient(p.x(), p.y()).x();
    const double sign = fx < 0.0 ? -1.0 : 1.0;
    r.value = sign * kTwoPi * sl->m * double(sl->k) * sl->k;
    return r;
  }
  if (const PhiSeries* phi = model.phi()) {
    // Curve y = phi(x) + j pi: f_x = -cos(j pi) phi', |g| = 1, dy = phi' dx, so
    // I = -cos(j pi) * sign(phi') * int_0^{2pi} phi'^2 dx (Parseval).
    int phi_sign = 0;
    for (int i = 0; i < 4096; ++i) {
      const double d = phi->derivative(kTwoPi * i / 4096.0, 1);
      const int s = d > 1e-12 ? 1 : (d < -1e-12 ? -1 : 0);
      if (s == 0) continue;
      if (phi_sign != 0 && s != phi_sign) return std::nullopt;
      phi_sign = s;
    }
    if (phi_sign == 0) return std::nullopt;
    double energy = kTwoPi * double(phi->q) * phi->q;
    for (std::size_t n = 0; n < phi->a.size(); ++n)
      energy += kPi * double((n + 1) * (n + 1)) * phi->a[n] * phi->a[n];
    for (std::size_t n = 0; n < phi->b.size(); ++n)
      energy += kPi * double((n + 1) * (n + 1)) * phi->b[n] * phi->b[n];
    const double cos_j = std::cos(p.y() - (*phi)(p.x())) > 0.0 ? 1.0 : -1.0;
    r.value = -cos_j * phi_sign * energy;
    return r;
  }
  return std::nullopt;
}

}  // namespace sftorus
