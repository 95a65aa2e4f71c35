#include <sftorus/curves.hpp>
#include <sftorus/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sftorus {

namespace {

// Newton along a fixed direction n onto {f = 0}.
Vec2 project_along(const SlowFastModel& model, Vec2 p, const Vec2& n) {
  for (int it = 0; it < 40; ++it) {
    const double fv = model.fast(p.x(), p.y());
    if (std::abs(fv) < 1e-15) break;
    const double dn = model.fast_gradient(p.x(), p.y()).dot(n);
    if (std::abs(dn) < 1e-14) break;
    const double step = fv / dn;
    p -= step * n;
    if (std::abs(step) < 1e-16) break;
  }
  return p;
}

Vec2 unit_tangent(const SlowFastModel& model, const Vec2& z) {
  const Vec2 g = model.fast_gradient(z.x(), z.y());
  const double n = g.norm();
  if (n < 1e-12)
    throw Error(ErrorCode::ContinuationFailure, "continuation: singular point of f");
  return Vec2(-g.y(), g.x()) / n;
}

int sign_of(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

std::vector<double> fiber_roots(const SlowFastModel& model, double y, int n) {
  std::vector<double> roots;
  const double dx = kTwoPi / n;
  double x0 = 0.0;
  double f0 = model.fast(x0, y);
  for (int i = 0; i < n; ++i) {
    const double x1 = (i + 1) * dx;
    const double f1 = model.fast(x1, y);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      roots.push_back(brent_root([&](double x) { return model.fast(x, y); }, x0, x1));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

int curve_stability(const SlowFastModel& model, const ClosedCurve& c,
                    const std::vector<ContactPoint>& contacts) {
  bool neg = false;
  bool pos = false;
  for (const auto& p : c.samples()) {
    bool near_contact = false;
    for (const auto& cp : contacts)
      if (lift_dist(p, cp.lift) < 1e-3) near_contact = true;
    if (near_contact) continue;
    const double fx = model.fast_gradient(p.x(), p.y()).x();
    if (fx < -1e-9) neg = true;
    if (fx > 1e-9) pos = true;
  }
  if (neg && !pos) return -1;
  if (pos && !neg) return 1;
  return 0;
}

bool monotone_in(const ClosedCurve& c, int coord) {
  const auto& s = c.samples();
  const double total = c.closure_defect()[coord];
  if (total == 0.0) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s[i][coord] - s[i - 1][coord]) * total < 0.0) return false;
  return true;
}

CriticalCurve finish_curve(const SlowFastModel& model, ClosedCurve c, int index) {
  CriticalCurve cc;
  cc.winding = winding(c);
  cc.contacts = contact_points(model, c);
  cc.stability = curve_stability(model, c, cc.contacts);
  cc.index = index;
  if (cc.contacts.empty() && cc.winding.k != 0 && monotone_in(c, 1))
    cc.axis = ParamAxis::Y;
  else if (monotone_in(c, 0))
    cc.axis = ParamAxis::X;
  else
    cc.axis = ParamAxis::Y;
  cc.curve = std::move(c);
  return cc;
}

std::vector<CriticalCurve> sine_link_curves(const SlowFastModel& model,
                                            const SineLinkParams& p,
                                            const CurveOptions& opts) {
  std::vector<CriticalCurve> out;
  const double speed = std::hypot(double(p.k), double(p.l));
  const int n = std::max(8, static_cast<int>(std::ceil(kTwoPi * speed / opts.sample_gap)));
  for (int j = 0; j < 2 * p.m; ++j) {
    // Level set l y - k x = j pi / m, through (x0, 0).
    const double level = j * kPi / p.m;
    const double x0 = -level / p.k;
    std::vector<LiftPoint> samples;
    samples.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double s = kTwoPi * i / n;
      samples.emplace_back(x0 + p.l * s, p.k * s);
    }
    out.push_back(finish_curve(model, ClosedCurve(std::move(samples)), j));
  }
  return out;
}

}  // namespace

ClosedCurve trace_zero_curve(const SlowFastModel& model, const LiftPoint& start,
                             const CurveOptions& opts) {
  const Vec2 g0 = model.fast_gradient(start.x(), start.y());
  if (g0.norm() < 1e-12)
    throw Error(ErrorCode::ContinuationFailure, "continuation: singular start point");
  const Vec2 origin = project_along(model, start, g0.normalized());

  Vec2 z = origin;
  Vec2 t = unit_tangent(model, z);
  if (std::abs(t.y()) > 1e-9 ? t.y() < 0.0 : t.x() < 0.0) t = -t;

  std::vector<LiftPoint> nodes{z};
  double h = 0.25 * opts.max_step;
  double length = 0.0;
  bool closed = false;
  while (!closed) {
    if (length > opts.max_lift_length)
      throw Error(ErrorCode::NotClosed, "continuation: curve does not close");
    const Vec2 pred = z + h * t;
    const Vec2 nrm(t.y(), -t.x());
    Vec2 w = pred;
    bool converged = false;
    int its = 0;
    for (; its < 8; ++its) {
      const double fv = model.fast(w.x(), w.y());
      if (std::abs(fv) < 1e-14) {
        converged = true;
        break;
      }
      const double dn = model.fast_gradient(w.x(), w.y()).dot(nrm);
      if (std::abs(dn) < 1e-14) break;
      w -= (fv / dn) * nrm;
    }
    Vec2 tn = t;
    if (converged && (w - pred).norm() < 0.5 * h) {
      tn = unit_tangent(model, w);
      if (tn.dot(t) < 0.0) tn = -tn;
      converged = tn.dot(t) > 0.9;
    } else {
      converged = false;
    }
    if (!converged) {
      h *= 0.5;
      if (h < opts.min_step)
        throw Error(ErrorCode::ContinuationFailure, "continuation: step collapse");
      continue;
    }
    // Closed once the start's image lies between z and w along the curve.
    const Vec2 image = origin + kTwoPi * ((w - origin) / kTwoPi).array().round().matrix();
    if (length > h && (image - z).dot(t) > 0.0 && (image - w).dot(tn) <= 0.0 &&
        (image - z).norm() <= 1.05 * h) {
      w = image;
      closed = true;
    }
    nodes.push_back(w);
    length += (w - z).norm();
    z = w;
    t = tn;
    if (its <= 2) h = std::min(1.5 * h, opts.max_step);
  }

  std::vector<LiftPoint> samples{nodes.front()};
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const Vec2 a = nodes[i - 1];
    const Vec2 b = nodes[i];
    const Vec2 d = b - a;
    const int pieces = std::max(1, static_cast<int>(std::ceil(d.norm() / opts.sample_gap)));
    const Vec2 n = Vec2(-d.y(), d.x()).normalized();
    for (int p = 1; p < pieces; ++p)
      samples.push_back(project_along(model, a + d * (double(p) / pieces), n));
    samples.push_back(b);
  }
  ClosedCurve c(std::move(samples));
  const Vec2 defect = c.closure_defect();
  if (defect.y() < -1.0 || (std::abs(defect.y()) <= 1.0 && defect.x() < -1.0)) {
    auto s = c.samples();
    std::reverse(s.begin(), s.end());
    c = ClosedCurve(std::move(s));
  }
  return c;
}

std::vector<ContactPoint> contact_points(const SlowFastModel& model,
                                         const ClosedCurve& curve) {
  std::vector<ContactPoint> out;
  const auto& s = curve.samples();
  if (s.size() < 3) return out;
  const std::size_t n = s.size() - 1;  // last sample repeats the first
  std::vector<double> fx(n);
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    fx[i] = std::abs(model.fast_gradient(s[i].x(), s[i].y()).x());
    scale = std::max(scale, fx[i]);
  }
  const double window = 3.0 * std::max(curve.max_gap(), 1e-3);

  for (std::size_t i = 0; i < n; ++i) {
    const double prev = fx[(i + n - 1) % n];
    const double next = fx[(i + 1) % n];
    if (!(fx[i] <= prev && fx[i] <= next && fx[i] < 0.05 * scale)) continue;

    // Near a contact f_y != 0, so the curve is locally a graph y = Y(x).
    double ylast = s[i].y();
    auto graph_y = [&](double x) {
      double y = ylast;
      for (int it = 0; it < 50; ++it) {
        const double fv = model.fast(x, y);
        const double fy = model.fast_gradient(x, y).y();
        if (std::abs(fy) < 1e-12) break;
        const double step = fv / fy;
        y -= step;
        if (std::abs(step) < 1e-16) break;
      }
      return y;
    };
    auto slope = [&](double x) { return model.fast_gradient(x, graph_y(x)).x(); };
    constexpr double kDelta = 1e-6;
    auto slope_change = [&](double x) { return slope(x + kDelta) - slope(x - kDelta); };

    const double a = s[i].x() - window;
    const double b = s[i].x() + window;
    double xc = 0.0;
    try {
      const double ha = slope(a);
      const double hb = slope(b);
      if ((ha < 0.0) != (hb < 0.0) && ha != 0.0 && hb != 0.0) {
        xc = brent_root(slope, a, b);
      } else {
        const double da = slope_change(a);
        const double db = slope_change(b);
        if ((da < 0.0) == (db < 0.0)) continue;
        xc = brent_root(slope_change, a, b);
      }
    } catch (const Error&) {
      continue;
    }
    const double yc = graph_y(xc);
    if (std::abs(model.fast(xc, yc)) > 1e-9) continue;
    if (std::abs(model.fast_gradient(xc, yc).x()) > 1e-7) continue;

    const LiftPoint lift(xc, yc);
    bool duplicate = false;
    for (const auto& c : out)
      if (lift_dist(c.lift, lift) < 1e-6) duplicate = true;
    if (duplicate) continue;

    ContactPoint cp;
    cp.lift = lift;
    cp.location = wrap(lift);
    const Taylor7 jet = model.fast_fiber_jet(xc, yc);
    for (int k = 2; k <= 7; ++k) {
      if (std::abs(jet.derivative(k)) > 1e-7) {
        cp.order = k;
        break;
      }
    }
    cp.odd = cp.order && (*cp.order % 2 == 1);
    cp.slow_value = model.slow(xc, yc, 0.0);
    cp.regular = std::abs(cp.slow_value) > 1e-7;
    out.push_back(cp);
  }
  return out;
}

std::vector<CriticalCurve> critical_curves(const SlowFastModel& model,
                                           const CurveOptions& opts) {
  if (auto p = model.sine_link()) return sine_link_curves(model, *p, opts);

  std::vector<CriticalCurve> out;
  std::vector<CurveIndex> indices;
  for (int i = 0; i < opts.fibers; ++i) {
    // Offset fibers so that the scan does not start on symmetric points.
    const double y = kTwoPi * (i + 0.37) / opts.fibers;
    for (double x : fiber_roots(model, y, opts.scan_points)) {
      const LiftPoint p(x, y);
      bool known = false;
      for (const auto& idx : indices)
        if (idx.distance(p) < 0.1 * opts.sample_gap) known = true;
      if (known) continue;
      ClosedCurve c = trace_zero_curve(model, p, opts);
      indices.emplace_back(c);
      out.push_back(finish_curve(model, std::move(c), static_cast<int>(out.size())));
    }
  }
  return out;
}

AssumptionReport validate_assumptions(const SlowFastModel& model,
                                      const std::vector<CriticalCurve>& curves) {
  AssumptionReport r;
  auto note = [&](const std::string& m) { r.messages.push_back(m); };

  bool hyperbolic = true;
  bool contacts_ok = true;
  bool slow_ok = true;
  int mixed = 0;
  for (const auto& c : curves) {
    CurveReport cr;
    cr.index = c.index;
    cr.winding = c.winding;
    cr.stability = c.stability;
    cr.contacts = c.contacts;
    double fx_min = std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (const auto& p : c.curve.samples()) {
      fx_min = std::min(fx_min, std::abs(model.fast_gradient(p.x(), p.y()).x()));
      g_min = std::min(g_min, std::abs(model.slow(p.x(), p.y(), 0.0)));
    }
    for (const auto& cp : c.contacts) g_min = std::min(g_min, std::abs(cp.slow_value));
    cr.hyperbolicity_margin = c.contacts.empty() ? fx_min : 0.0;
    cr.slow_margin = g_min;

    std::ostringstream id;
    id << "curve " << c.index << ": ";
    if (c.stability < 0) ++r.attracting;
    if (c.stability > 0) ++r.repelling;
    if (c.stability == 0) {
      ++mixed;
      note(id.str() + "stability changes along the curve (even contact points)");
    }
    if (!c.contacts.empty() || cr.hyperbolicity_margin <= 1e-6) {
      hyperbolic = false;
      note(id.str() + "not normally hyperbolic (" + std::to_string(c.contacts.size()) +
           " contact points)");
    }
    for (const auto& cp : c.contacts) {
      if (!cp.order) {
        contacts_ok = false;
        note(id.str() + "contact order undetermined (> 7)");
      }
      if (!cp.regular) {
        contacts_ok = false;
        note(id.str() + "contact point is not regular (slow flow vanishes)");
      }
    }
    if (cr.hyperbolicity_margin <= 1e-6 && c.contacts.empty()) contacts_ok = false;
    if (g_min <= 1e-9) {
      slow_ok = false;
      note(id.str() + "slow flow vanishes on the curve");
    }
    r.curves.push_back(std::move(cr));
  }

  r.windings_valid = !curves.empty();
  r.windings_equal = !curves.empty();
  for (const auto& c : curves) {
    const auto& w = c.winding;
    if (!w.coprime() || w.k < 0 || w.l < 0 || w.k + w.l <= 0) r.windings_valid = false;
    if (!(w == curves.front().winding)) r.windings_equal = false;
  }
  if (!r.windings_valid) note("winding pairs are not coprime non-negative with k+l > 0");
  if (!r.windings_equal) note("critical curves have different winding pairs");

  // Stabilities must alternate along a fast fiber.
  const double y = kTwoPi * 0.291;
  std::vector<int> signs;
  for (double x : fiber_roots(model, y, 4096))
    signs.push_back(sign_of(model.fast_gradient(x, y).x(), 1e-12));
  r.alternating = !signs.empty() && signs.size() % 2 == 0;
  for (std::size_t i = 0; i < signs.size(); ++i)
    if (signs[i] == 0 || signs[i] == signs[(i + 1) % signs.size()]) r.alternating = false;
  if (!r.alternating) note("stabilities do not alternate along the fast fibers");

  const bool even = !curves.empty() && curves.size() % 2 == 0;
  if (!even) note("critical set is not a 2m-link");
  const bool balanced = r.attracting == r.repelling;
  if (!balanced) note("attracting and repelling curve counts differ");

  r.hyperbolic_link = even && hyperbolic && mixed == 0 && balanced && r.windings_valid &&
                  r.windings_equal && r.alternating;
  r.contact_link = even && contacts_ok && balanced && r.windings_valid &&
                          r.windings_equal && r.alternating;
  r.slow_regular = !curves.empty() && slow_ok;
  return r;
}

AssumptionReport validate_assumptions(const SlowFastModel& model) {
  return validate_assumptions(model, critical_curves(model));
}

}  // namespace sftorus
