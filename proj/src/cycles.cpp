#include <sftorus/cycles.hpp>

#include <sftorus/numerics.hpp>
#include <sftorus/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace sftorus {
namespace {

// Slow time needed to run once around the seed curve, in fast time units.
double loop_time(const SlowFastModel& model, double eps, const CriticalCurve& seed) {
  const auto& s = seed.curve.samples();
  double slow_time = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const Vec2 mid = 0.5 * (s[i - 1] + s[i]);
    const double g = std::abs(model.slow(mid.x(), mid.y(), 1.0));
    slow_time += std::abs(s[i].y() - s[i - 1].y()) / std::max(g, 1e-3);
  }
  return std::max(slow_time, kTwoPi) / eps;
}

Vec2 lattice_round(const Vec2& d) {
  return {kTwoPi * std::round(d.x() / kTwoPi), kTwoPi * std::round(d.y() / kTwoPi)};
}

struct Return {
  double s = 0.0;
  LiftPoint point = LiftPoint::Zero();
  double time = 0.0;
  double div = 0.0;
  Vec2 lattice = Vec2::Zero();
  std::vector<LiftPoint> samples;
};

// First return to the local section {p_sec + L + s sigma : |s| < half}
// with a nonzero lattice shift L, crossing in the flow direction.
class Section {
 public:
  Section(const SlowFastModel& model, double eps, Direction dir,
          const CycleOptions& opts, const LiftPoint& p_sec, double budget)
      : stepper_(model, eps, dir, opts.solver), opts_(opts), p_(p_sec), budget_(budget) {
    const Vec3 F = stepper_.rhs(p_sec);
    const double n = F.head<2>().norm();
    if (!(n > 1e-14))
      throw Error(ErrorCode::SectionDegenerate, "flow vanishes at section point");
    along_ = F.head<2>() / n;
    sigma_ = Vec2(-along_.y(), along_.x());
  }

  const Vec2& sigma() const { return sigma_; }
  const LiftPoint& origin() const { return p_; }

  Return next(double s, bool record) {
    const LiftPoint start = p_ + s * sigma_;
    stepper_.reset(start);
    Return r;
    if (record) r.samples.push_back(start);
    while (true) {
      if (stepper_.t() >= budget_)
        throw Error(ErrorCode::NoConvergence, "no return to the section within budget");
      stepper_.step(budget_);
      const Vec2 z0 = stepper_.state_prev().head<2>();
      const Vec2 z1 = stepper_.point();
      const Vec2 L = lattice_round(z1 - p_);
      double tc = std::numeric_limits<double>::quiet_NaN();
      if (L.squaredNorm() > 0.0) {
        const double h0 = (z0 - p_ - L).dot(along_);
        const double h1 = (z1 - p_ - L).dot(along_);
        if (h0 < 0.0 && h1 >= 0.0) {
          auto h = [&](double t) {
            return (Vec2(stepper_.dense(t).head<2>()) - p_ - L).dot(along_);
          };
          tc = h1 == 0.0 ? stepper_.t() : brent_root(h, stepper_.t_prev(), stepper_.t(), 1e-15);
          const Vec3 zc = stepper_.dense(tc);
          const double sc = (Vec2(zc.head<2>()) - p_ - L).dot(sigma_);
          if (std::abs(sc) >= opts_.section_half_width) tc = std::numeric_limits<double>::quiet_NaN();
          else {
            r.s = sc;
            r.point = zc.head<2>();
            r.time = tc;
            r.div = zc[2];
            r.lattice = L;
          }
        }
      }
      const double t_end = std::isnan(tc) ? stepper_.t() : tc;
      if (record) sample_step(t_end, r.samples);
      if (!std::isnan(tc)) return r;
    }
  }

 private:
  void sample_step(double t_end, std::vector<LiftPoint>& out) const {
    const double t0 = stepper_.t_prev();
    const Vec2 a = stepper_.state_prev().head<2>();
    const Vec2 b = stepper_.dense(t_end).head<2>();
    // Chords of a step are short against the orbit curvature; subdivide
    // with margin so that no chord exceeds the requested gap.
    const int n = std::max(1, static_cast<int>(std::ceil(1.5 * (b - a).norm() / opts_.orbit_gap)));
    for (int i = 1; i <= n; ++i) {
      const double t = t0 + (t_end - t0) * i / n;
      out.push_back(i == n ? LiftPoint(b) : LiftPoint(stepper_.dense(t).head<2>()));
    }
  }

  Dopri5 stepper_;
  const CycleOptions& opts_;
  LiftPoint p_;
  double budget_;
  Vec2 along_, sigma_;
};

LimitCycle assemble(const Section& sec, const Return& r, Direction dir, double eps,
                    int curve_index, double residual) {
  std::vector<LiftPoint> pts = r.samples;
  pts.back() = pts.front() + r.lattice;
  if (dir == Direction::Backward) std::reverse(pts.begin(), pts.end());
  LimitCycle c;
  c.orbit = ClosedCurve(std::move(pts));
  c.period = r.time;
  c.winding = winding(c.orbit);
  c.div_integral = dir == Direction::Forward ? r.div : -r.div;
  c.log_multiplier = c.div_integral;
  c.multiplier = std::exp(c.log_multiplier);
  c.stability = c.div_integral < 0.0 ? CycleStability::Attracting : CycleStability::Repelling;
  c.canard = c.stability == CycleStability::Repelling;
  c.eps = eps;
  c.near_curve_index = curve_index;
  c.section_point = r.samples.front();
  c.section_direction = sec.sigma();
  c.fixed_point_residual = residual;
  c.detection_direction = dir;
  return c;
}

}  // namespace

LimitCycle find_limit_cycle(const SlowFastModel& model, double eps,
                            const CriticalCurve& seed, const CycleOptions& opts) {
  if (!(eps > 0.0 && eps <= 0.25))
    throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 0.25]");
  if (seed.curve.empty()) throw Error(ErrorCode::InvalidArgument, "empty seed curve");
  if (seed.stability == 0)
    throw Error(ErrorCode::AssumptionViolated, "seed curve has mixed stability");

  const Direction dir = seed.stability < 0 ? Direction::Forward : Direction::Backward;
  const double T_loop = loop_time(model, eps, seed);
  const double budget = 3.0 * T_loop + 200.0;

  const auto& samples = seed.curve.samples();
  const LiftPoint start =
      samples[opts.start_sample % (samples.size() - 1)] + Vec2(opts.offset, 0.0);

  // Transient: half a slow loop brings the orbit exponentially close to the cycle.
  Dopri5 transient(model, eps, dir, opts.solver);
  transient.reset(start);
  const double T_trans = std::max(0.5 * T_loop, 20.0);
  while (transient.t() < T_trans) transient.step(T_trans);

  Section sec(model, eps, dir, opts, transient.point(), budget);

  double s_prev = 0.0;
  Return r = sec.next(s_prev, false);
  int loops = 1;
  while (std::abs(r.s - s_prev) >= opts.fixed_point_tol && loops < opts.max_loops) {
    // Stop iterating once the returns are no longer contracting quickly;
    // the secant takes over from there.
    const double before = std::abs(r.s - s_prev);
    s_prev = r.s;
    r = sec.next(s_prev, false);
    ++loops;
    if (std::abs(r.s - s_prev) > 0.5 * before) break;
  }

  // Secant on R(s) = P(s) - s starting from the last two iterates.
  double sa = s_prev, Ra = r.s - s_prev;
  double sb = r.s;
  Return rb = sec.next(sb, true);
  double Rb = rb.s - sb;
  for (int it = 0; std::abs(Rb) >= opts.fixed_point_tol; ++it) {
    if (it >= opts.max_secant)
      throw Error(ErrorCode::NoConvergence, "return map fixed point not found");
    const double denom = Rb - Ra;
    double sn = (denom == 0.0 || !std::isfinite(denom)) ? sb + Rb : sb - Rb * (sb - sa) / denom;
    if (!std::isfinite(sn) || std::abs(sn) >= opts.section_half_width) sn = sb + Rb;
    sa = sb;
    Ra = Rb;
    sb = sn;
    rb = sec.next(sb, true);
    Rb = rb.s - sb;
  }
  return assemble(sec, rb, dir, eps, seed.index, std::abs(Rb));
}

CycleCensus cycle_census(const SlowFastModel& model,
                         const std::vector<CriticalCurve>& curves, double eps,
                         const CycleOptions& opts, int workers) {
  CycleCensus out;
  out.cycles.resize(curves.size());
  parallel_for(curves.size(), workers, [&](std::size_t i) {
    out.cycles[i] = find_limit_cycle(model, eps, curves[i], opts);
  });
  out.windings_equal = true;
  for (const auto& c : out.cycles) {
    (c.stability == CycleStability::Attracting ? out.attracting_count : out.repelling_count)++;
    if (!(c.winding == out.cycles.front().winding)) out.windings_equal = false;
  }
  double sep = std::numeric_limits<double>::infinity();
  std::vector<CurveIndex> idx;
  idx.reserve(out.cycles.size());
  for (const auto& c : out.cycles) idx.emplace_back(c.orbit);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) sep = std::min(sep, idx[i].distance(idx[j]));
  out.min_separation = sep;
  return out;
}

CycleCensus cycle_census(const SlowFastModel& model, double eps,
                         const CycleOptions& opts, int workers) {
  const auto curves = critical_curves(model);
  const auto report = validate_assumptions(model, curves);
  if (!report.passes(true)) {
    std::string msg = "model fails the assumption check";
    for (const auto& m : report.messages) msg += "; " + m;
    throw Error(ErrorCode::AssumptionViolated, msg);
  }
  return cycle_census(model, curves, eps, opts, workers);
}

bool verify_divergence_bracket(const LimitCycle& cycle, const SdiValue& sdi, double kappa) {
  if (cycle.near_curve_index != sdi.curve_index)
    throw Error(ErrorCode::InvalidArgument, "cycle and SDI refer to different curves");
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  const double v = cycle.eps * cycle.div_integral;
  return v >= sdi.value - kappa && v <= sdi.value + kappa;
}

Rational rotation_number(const LimitCycle& cycle) {
  const WindingPair w = cycle.winding;
  if (w.k == 0) throw Error(ErrorCode::InvalidArgument, "rotation number undefined for k = 0");
  long num = w.l, den = w.k;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  return {num / g, den / g};
}

std::vector<HausdorffSample> hausdorff_convergence(const SlowFastModel& model,
                                                   const CriticalCurve& seed,
                                                   const std::vector<double>& eps_list,
                                                   const CycleOptions& opts) {
  if (eps_list.empty()) throw Error(ErrorCode::InvalidArgument, "empty eps list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0 && eps_list[i] <= 0.25))
      throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, 0.25]");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "eps list must be strictly decreasing");
  }
  std::vector<HausdorffSample> out;
  for (double eps : eps_list) {
    const LimitCycle c = find_limit_cycle(model, eps, seed, opts);
    out.push_back({eps, hausdorff_dist(c.orbit, seed.curve)});
  }
  return out;
}

bool decreasing_within(const std::vector<HausdorffSample>& samples, double slack) {
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (samples[i].distance > (1.0 + slack) * samples[i - 1].distance) return false;
  return true;
}

double fd_log_multiplier(const SlowFastModel& model, const LimitCycle& cycle, double delta) {
  const Direction dir = cycle.detection_direction;
  const SolverOptions tight{1e-12, 1e-14, 1.0, 1e7};
  Dopri5 ref(model, cycle.eps, dir, tight);
  Dopri5 plus(model, cycle.eps, dir, tight);
  Dopri5 minus(model, cycle.eps, dir, tight);

  auto advance = [](Dopri5& s, const LiftPoint& p, double T) {
    s.reset(p);
    while (s.t() < T) s.step(T);
    return LiftPoint(s.point());
  };

  LiftPoint p = cycle.section_point;
  double remaining = cycle.period;
  double total = 0.0;
  while (remaining > 0.0) {
    const Vec3 Fp = ref.rhs(p);
    const Vec2 F = Fp.head<2>();
    // Segments with about unit contraction keep the finite differences well scaled.
    const double dt = std::min({remaining, 10.0, 1.0 / std::max(std::abs(Fp[2]), 0.1)});
    const Vec2 n = Vec2(-F.y(), F.x()) / F.norm();
    const LiftPoint q = advance(ref, p, dt);
    const LiftPoint qp = advance(plus, p + delta * n, dt);
    const LiftPoint qm = advance(minus, p - delta * n, dt);
    const Vec2 d = (qp - qm) / (2.0 * delta);
    const Vec2 Fq = ref.rhs(q).head<2>();
    auto wedge = [](const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); };
    total += std::log(std::abs(wedge(d, Fq) / wedge(n, F)));
    p = q;
    remaining -= dt;
  }
  return dir == Direction::Forward ? total : -total;
}

double restart_spread(const SlowFastModel& model, double eps, const CriticalCurve& seed,
                      const LimitCycle& reference, int n, std::uint64_t rng_seed,
                      const CycleOptions& opts) {
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> offset(0.02, 0.15);
  std::uniform_int_distribution<std::size_t> sample(0, seed.curve.size() - 2);
  std::uniform_int_distribution<int> side(0, 1);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    CycleOptions o = opts;
    o.offset = (side(rng) ? 1.0 : -1.0) * offset(rng);
    o.start_sample = sample(rng);
    const LimitCycle c = find_limit_cycle(model, eps, seed, o);
    worst = std::max(worst, hausdorff_dist(c.orbit, reference.orbit));
  }
  return worst;
}

BasinCensus basin_census(const SlowFastModel& model, double eps,
                         const CycleCensus& census, int grid_n, const BasinOptions& opts) {
  if (grid_n < 1) throw Error(ErrorCode::InvalidArgument, "grid size must be positive");
  std::vector<CurveIndex> idx;
  double longest = 0.0;
  for (const auto& c : census.cycles) {
    idx.emplace_back(c.orbit);
    longest = std::max(longest, c.period);
  }
  const double T = opts.max_time > 0.0 ? opts.max_time : 2.0 * longest + 100.0;

  BasinCensus out;
  out.grid_n = grid_n;
  const double h = kTwoPi / grid_n;
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      BasinEntry e{TorusPoint((i + 0.5) * h, (j + 0.5) * h)};
      for (const auto& ix : idx)
        if (ix.distance(e.start.vec()) < opts.exclusion) e.excluded = true;
      out.entries.push_back(e);
    }

  auto limit = [&](const LiftPoint& p, Direction dir, bool& exhausted) {
    const CycleStability target =
        dir == Direction::Forward ? CycleStability::Attracting : CycleStability::Repelling;
    Dopri5 s(model, eps, dir, opts.solver);
    s.reset(p);
    while (s.t() < T) {
      s.step(T);
      const LiftPoint q = s.point();
      for (std::size_t c = 0; c < idx.size(); ++c)
        if (census.cycles[c].stability == target && idx[c].distance(q, opts.capture) < opts.capture)
          return static_cast<int>(c);
    }
    exhausted = true;
    return -1;
  };

  parallel_for(out.entries.size(), opts.workers, [&](std::size_t k) {
    BasinEntry& e = out.entries[k];
    if (e.excluded) return;
    bool exhausted = false;
    e.omega = limit(e.start.vec(), Direction::Forward, exhausted);
    e.alpha = limit(e.start.vec(), Direction::Backward, exhausted);
    e.budget_exhausted = exhausted;
  });
  for (const auto& e : out.entries) {
    if (e.excluded) continue;
    ++out.considered;
    if (e.omega >= 0 && e.alpha >= 0) ++out.classified;
  }
  return out;
}

}  // namespace sftorus
