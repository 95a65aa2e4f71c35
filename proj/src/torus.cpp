#include <sftorus/torus.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sftorus {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::NotClosed: return "curve not closed";
    case ErrorCode::StepUnderflow: return "step-size underflow";
    case ErrorCode::MaxTimeExceeded: return "max time exceeded";
    case ErrorCode::NoConvergence: return "no convergence";
    case ErrorCode::SectionDegenerate: return "section degenerate";
    case ErrorCode::AssumptionViolated: return "assumption violated";
    case ErrorCode::Intersecting: return "curves intersect";
    case ErrorCode::OrderUndetermined: return "order undetermined";
    case ErrorCode::ContinuationFailure: return "continuation failure";
  }
  return "unknown";
}

namespace {

double wrap_angle(double a) {
  double r = a - kTwoPi * std::floor(a / kTwoPi);
  if (r >= kTwoPi || r < 0.0) r = 0.0;
  return r;
}

double reduce_angle(double a) { return a - kTwoPi * std::round(a / kTwoPi); }

// Euclidean distance from p to segment [a, b].
double point_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * d - p).norm();
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_segment(const Vec2& a, const Vec2& b, const Vec2& c,
                       const Vec2& d) {
  const Vec2 r = b - a;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  if (denom != 0.0) {
    const double t = cross(c - a, s) / denom;
    const double u = cross(c - a, r) / denom;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return 0.0;
  }
  return std::min({point_segment(a, c, d), point_segment(b, c, d),
                    point_segment(c, a, b), point_segment(d, a, b)});
}

int mod(int a, int n) {
  const int r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TorusPoint::TorusPoint(double x, double y) : v_(x, y) {
  if (!(x >= 0.0 && x < kTwoPi && y >= 0.0 && y < kTwoPi))
    throw Error(ErrorCode::InvalidArgument, "torus point outside [0,2pi)^2");
}

WindingPair WindingPair::normalized() const {
  if (k < 0 || (k == 0 && l < 0)) return {-k, -l};
  return *this;
}

bool WindingPair::coprime() const {
  return std::gcd(std::abs(k), std::abs(l)) == 1;
}

ClosedCurve::ClosedCurve(std::vector<LiftPoint> samples)
    : samples_(std::move(samples)) {
  for (const auto& p : samples_)
    if (!p.allFinite())
      throw Error(ErrorCode::NonFinite, "non-finite curve sample");
}

LiftPoint ClosedCurve::closure_defect() const {
  if (samples_.empty()) return LiftPoint::Zero();
  return samples_.back() - samples_.front();
}

double ClosedCurve::max_gap() const {
  double g = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i)
    g = std::max(g, (samples_[i] - samples_[i - 1]).norm());
  return g;
}

double ClosedCurve::length() const {
  double len = 0.0;
  for (std::size_t i = 1; i < samples_.size(); ++i)
    len += (samples_[i] - samples_[i - 1]).norm();
  return len;
}

TorusPoint wrap(const LiftPoint& p) {
  if (!p.allFinite()) throw Error(ErrorCode::NonFinite, "wrap: non-finite point");
  return TorusPoint(wrap_angle(p.x()), wrap_angle(p.y()));
}

Vec2 reduce(const Vec2& d) { return {reduce_angle(d.x()), reduce_angle(d.y())}; }

double torus_dist(const TorusPoint& a, const TorusPoint& b) {
  return reduce(a.vec() - b.vec()).norm();
}

WindingPair winding(const ClosedCurve& c, double max_residue) {
  if (c.size() < 2) throw Error(ErrorCode::NotClosed, "winding: curve has < 2 samples");
  const Vec2 turns = c.closure_defect() / kTwoPi;
  const Vec2 rounded = turns.array().round();
  const double residue = (turns - rounded).cwiseAbs().maxCoeff();
  if (residue >= max_residue)
    throw Error(ErrorCode::NotClosed,
                "winding: closure residue " + std::to_string(residue) + " revolutions");
  return WindingPair{static_cast<int>(rounded.y()), static_cast<int>(rounded.x())}
      .normalized();
}

ClosedCurve rotate_start(const ClosedCurve& c, std::size_t j) {
  const auto& s = c.samples();
  if (s.size() < 2 || j == 0 || j >= s.size() - 1) return c;
  const Vec2 shift = c.closure_defect();
  std::vector<LiftPoint> out;
  out.reserve(s.size());
  for (std::size_t i = j; i < s.size(); ++i) out.push_back(s[i]);
  for (std::size_t i = 1; i <= j; ++i) out.push_back(s[i] + shift);
  return ClosedCurve(std::move(out));
}

ClosedCurve densify(const ClosedCurve& c, double max_gap) {
  const auto& s = c.samples();
  if (s.size() < 2) return c;
  std::vector<LiftPoint> out;
  out.push_back(s.front());
  for (std::size_t i = 1; i < s.size(); ++i) {
    const Vec2 d = s[i] - s[i - 1];
    const int pieces = std::max(1, static_cast<int>(std::ceil(d.norm() / max_gap)));
    for (int p = 1; p <= pieces; ++p) out.push_back(s[i - 1] + d * (double(p) / pieces));
  }
  return ClosedCurve(std::move(out));
}

CurveIndex::CurveIndex(const ClosedCurve& curve) : curve_(curve) {
  if (curve_.empty()) throw Error(ErrorCode::InvalidArgument, "CurveIndex: empty curve");
  const double gap = curve_.max_gap();
  // Cells a few gaps wide keep the per-cell lists short.
  const double target = std::max(4.0 * gap, 0.02);
  n_ = std::clamp(static_cast<int>(kTwoPi / target), 1, 256);
  cell_ = kTwoPi / n_;
  grid_.assign(static_cast<std::size_t>(n_) * n_, Cell{});
  const auto& s = curve_.samples();
  std::vector<int> cells;
  if (s.size() == 1) {
    cells_of(s[0], s[0], cells);
    for (int ci : cells) grid_[ci].segments.push_back(0);
    return;
  }
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    cells_of(s[i], s[i + 1], cells);
    for (int ci : cells) grid_[ci].segments.push_back(static_cast<int>(i));
  }
}

void CurveIndex::cells_of(const LiftPoint& a, const LiftPoint& b,
                          std::vector<int>& out) const {
  out.clear();
  const Vec2 aw = wrap(a).vec();
  const Vec2 bw = aw + (b - a);
  const int i0 = static_cast<int>(std::floor(std::min(aw.x(), bw.x()) / cell_));
  const int i1 = static_cast<int>(std::floor(std::max(aw.x(), bw.x()) / cell_));
  const int j0 = static_cast<int>(std::floor(std::min(aw.y(), bw.y()) / cell_));
  const int j1 = static_cast<int>(std::floor(std::max(aw.y(), bw.y()) / cell_));
  for (int i = i0; i <= std::min(i1, i0 + n_ - 1); ++i)
    for (int j = j0; j <= std::min(j1, j0 + n_ - 1); ++j)
      out.push_back(mod(i, n_) * n_ + mod(j, n_));
}

double CurveIndex::segment_distance(int seg, const LiftPoint& p) const {
  const auto& s = curve_.samples();
  const Vec2& a = s[seg];
  const Vec2& b = s.size() == 1 ? s[seg] : s[seg + 1];
  const Vec2 q = a + reduce(p - a);
  return point_segment(q, a, b);
}

double CurveIndex::distance(const LiftPoint& p, double cap) const {
  const Vec2 pw = wrap(p).vec();
  const int ci = std::min(static_cast<int>(pw.x() / cell_), n_ - 1);
  const int cj = std::min(static_cast<int>(pw.y() / cell_), n_ - 1);
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0;; ++r) {
    const bool covers_all = 2 * r + 1 >= n_;
    for (int di = -r; di <= r; ++di) {
      for (int dj = -r; dj <= r; ++dj) {
        if (std::max(std::abs(di), std::abs(dj)) != r) continue;
        for (int seg : grid_[mod(ci + di, n_) * n_ + mod(cj + dj, n_)].segments)
          best = std::min(best, segment_distance(seg, p));
      }
    }
    // Every cell in ring r+1 lies at least r cell widths from p.
    if (covers_all || best <= r * cell_ || r * cell_ >= cap) break;
  }
  return best;
}

double CurveIndex::distance(const CurveIndex& other) const {
  const auto& os = other.curve_.samples();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : os) best = std::min(best, distance(p));
  if (os.size() < 2 || curve_.size() < 2 || best > 2.0 * cell_) return best;
  // Close curves: exact segment-segment test to catch crossings between samples.
  const auto& s = curve_.samples();
  std::vector<int> cells;
  for (std::size_t i = 0; i + 1 < os.size(); ++i) {
    cells_of(os[i], os[i + 1], cells);
    for (int c : cells) {
      const int ci = c / n_;
      const int cj = c % n_;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          for (int seg : grid_[mod(ci + di, n_) * n_ + mod(cj + dj, n_)].segments) {
            const Vec2& a = s[seg];
            const Vec2& b = s[seg + 1];
            const Vec2 c0 = a + reduce(os[i] - a);
            const Vec2 c1 = c0 + (os[i + 1] - os[i]);
            best = std::min(best, segment_segment(a, b, c0, c1));
          }
        }
      }
    }
  }
  return best;
}

double directed_hausdorff(const ClosedCurve& a, const CurveIndex& b) {
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "hausdorff: empty curve");
  double h = 0.0;
  for (const auto& p : a.samples()) h = std::max(h, b.distance(p));
  return h;
}

double hausdorff_dist(const ClosedCurve& a, const ClosedCurve& b) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::InvalidArgument, "hausdorff: empty curve");
  const CurveIndex ia(a);
  const CurveIndex ib(b);
  return std::max(directed_hausdorff(a, ib), directed_hausdorff(b, ia));
}

}  // namespace sftorus
