#include <doctest.h>

#include <sftorus/cycles.hpp>
#include <sftorus/knots.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace sftorus;

namespace {

// Exact invariant line l y - k x = theta* of a sine-link model with unit
// slow flow: l eps - k sin(m theta*) = 0 on the line.
struct ExactCycle {
  double theta;
  double period;
  double div_integral;
  double offset;  // torus distance to the critical line
};

ExactCycle exact_cycle(int m, int k, int l, int j, double eps) {
  // m theta* is the root of sin = l eps / k next to j pi.
  const double a = std::asin(l * eps / k);
  const double mt = (j % 2 == 0) ? j * oracle::pi + a : j * oracle::pi - a;
  const double theta = mt / m;
  const double period = 2 * oracle::pi * k / eps;
  return {theta, period, -m * k * std::cos(mt) * period,
          std::abs(theta - j * oracle::pi / m) / std::hypot(k, l)};
}

int line_index(int m, int k, int l, const CriticalCurve& c) {
  const auto& s = c.curve.samples().front();
  const long j = std::lround((l * s.y() - k * s.x()) / (oracle::pi / m)) % (2 * m);
  return static_cast<int>(j < 0 ? j + 2 * m : j);
}

Model reversed_diagonal() {
  TrigPoly f, g;
  f.cos_coeffs = Eigen::MatrixXd::Zero(3, 3);
  f.sin_coeffs = Eigen::MatrixXd::Zero(3, 3);
  f.sin_coeffs(2, 0) = 1.0;  // sin(x - y)
  g.cos_coeffs = Eigen::MatrixXd::Constant(1, 1, -1.0);
  g.sin_coeffs = Eigen::MatrixXd::Zero(1, 1);
  return trig_model(f, g, "diagonal-reversed");
}

}  // namespace

TEST_SUITE("cycles") {

TEST_CASE("sine-link cycles match the exact invariant lines") {
  for (auto [m, k, l] : {std::tuple{1, 1, 1}, {1, 3, 2}, {2, 1, 1}, {1, 2, 3}, {1, 1, 0}}) {
    const Model model = sine_link_model(m, k, l);
    for (const auto& c : critical_curves(*model)) {
      const double eps = 0.05;
      const int j = line_index(m, k, l, c);
      const ExactCycle ex = exact_cycle(m, k, l, j, eps);
      const LimitCycle cyc = find_limit_cycle(*model, eps, c);
      CHECK(cyc.period == doctest::Approx(ex.period).epsilon(1e-9));
      CHECK(cyc.div_integral == doctest::Approx(ex.div_integral).epsilon(1e-7));
      CHECK(std::abs(hausdorff_dist(cyc.orbit, c.curve) - ex.offset) < 1e-8);
      for (const auto& p : cyc.orbit.samples()) {
        const double th = l * p.y() - k * p.x();
        CHECK(std::abs(std::remainder(th - ex.theta, 2 * oracle::pi)) < 1e-8);
      }
      CHECK(cyc.winding == WindingPair{k, l});
      CHECK(cyc.near_curve_index == c.index);
    }
  }
}

TEST_CASE("sin(y-x) model attracting and repelling cycles") {
  const Model m = diagonal_model();
  const auto curves = critical_curves(*m);
  for (const auto& c : curves) {
    const LimitCycle cyc = find_limit_cycle(*m, 0.05, c);
    CHECK(cyc.winding == WindingPair{1, 1});
    CHECK(cyc.eps == 0.05);
    CHECK(cyc.log_multiplier == cyc.div_integral);
    CHECK(cyc.fixed_point_residual < 1e-10);
    CHECK((cyc.orbit.closure_defect() - Vec2(kTwoPi, kTwoPi)).norm() < 1e-12);
    CHECK(cyc.orbit.max_gap() <= 0.01 + 1e-12);
    if (c.stability < 0) {
      CHECK(cyc.stability == CycleStability::Attracting);
      CHECK(cyc.multiplier < 1.0);
      CHECK_FALSE(cyc.canard);
      CHECK(cyc.detection_direction == Direction::Forward);
    } else {
      CHECK(cyc.stability == CycleStability::Repelling);
      CHECK(cyc.multiplier > 1.0);
      CHECK(cyc.canard);
      CHECK(cyc.detection_direction == Direction::Backward);
    }
  }
}

TEST_CASE("orbit samples follow the forward flow") {
  const Model m = diagonal_model();
  for (const auto& c : critical_curves(*m)) {
    const LimitCycle cyc = find_limit_cycle(*m, 0.1, c);
    const auto& s = cyc.orbit.samples();
    // Slow flow is upward, so forward-time order has increasing y.
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i].y() > s[i - 1].y());
  }
}

TEST_CASE("trefoil cycle: winding (3,2) and eps * div within 15% of -18 pi") {
  const Model m = sine_link_model(1, 3, 2);
  for (const auto& c : critical_curves(*m)) {
    if (c.stability > 0) continue;
    const LimitCycle cyc = find_limit_cycle(*m, 0.05, c);
    CHECK(cyc.winding == WindingPair{3, 2});
    CHECK(0.05 * cyc.div_integral == doctest::Approx(-18 * oracle::pi).epsilon(0.15));
  }
}

TEST_CASE("detection preconditions") {
  const Model m = diagonal_model();
  const auto c = critical_curves(*m).front();
  CHECK_THROWS_AS(find_limit_cycle(*m, 0.0, c), Error);
  CHECK_THROWS_AS(find_limit_cycle(*m, 0.3, c), Error);
  CHECK_THROWS_AS(find_limit_cycle(*m, 0.05, CriticalCurve{}), Error);
  CriticalCurve mixed = c;
  mixed.stability = 0;
  CHECK_THROWS_AS(find_limit_cycle(*m, 0.05, mixed), Error);
}

TEST_CASE("census examples") {
  const CycleCensus e = cycle_census(*diagonal_model(), 0.05);
  CHECK(e.cycles.size() == 2);
  CHECK(e.attracting_count == 1);
  CHECK(e.repelling_count == 1);
  CHECK(e.windings_equal);
  CHECK(e.disjoint());

  const CycleCensus s = cycle_census(*sine_link_model(2, 1, 1), 0.05, {}, 2);
  CHECK(s.cycles.size() == 4);
  CHECK(s.attracting_count == 2);
  CHECK(s.repelling_count == 2);
  CHECK(s.disjoint());

  const CycleCensus o = cycle_census(*odd_contact_model(), 0.01);
  CHECK(o.attracting_count == 1);
  CHECK(o.repelling_count == 1);
  for (const auto& c : o.cycles) CHECK(c.winding == WindingPair{1, 1});

  std::vector<ClosedCurve> orbits;
  for (const auto& c : s.cycles) orbits.push_back(c.orbit);
  CHECK(link_consistent(orbits));
}

TEST_CASE("census preconditions") {
  TrigPoly f, g;
  f.cos_coeffs = Eigen::MatrixXd::Zero(3, 3);
  f.sin_coeffs = Eigen::MatrixXd::Zero(3, 3);
  f.sin_coeffs(0, 2) = 1.0;
  g = f;  // slow flow vanishes on the critical curves
  CHECK_THROWS_AS(cycle_census(*trig_model(f, g), 0.05), Error);
  // Curves with fold points have no single stability to seed detection.
  CHECK_THROWS_AS(cycle_census(*graph_model(PhiSeries::parse("q:1,s1:2")), 0.05), Error);
}

TEST_CASE("knot type of each cycle equals its seed's") {
  for (const Model& m : {sine_link_model(2, 3, 2), sine_link_model(1, 5, 2),
                         graph_model(PhiSeries::parse("q:2"))}) {
    const auto curves = critical_curves(*m);
    const CycleCensus cen = cycle_census(*m, curves, 0.05);
    for (std::size_t i = 0; i < curves.size(); ++i) CHECK(cen.cycles[i].winding == curves[i].winding);
  }
}

TEST_CASE("divergence bracket examples") {
  const Model m = diagonal_model();
  const auto curves = critical_curves(*m);
  for (const auto& c : curves) {
    const SdiValue sdi = slow_divergence_integral(*m, c);
    const LimitCycle at05 = find_limit_cycle(*m, 0.05, c);
    CHECK(verify_divergence_bracket(at05, sdi, 0.1 * 2 * oracle::pi));
    CHECK((at05.div_integral > 0) == (c.stability > 0));
    const LimitCycle at2 = find_limit_cycle(*m, 0.2, c);
    CHECK_FALSE(verify_divergence_bracket(at2, sdi, 1e-6));
  }
  const LimitCycle a = find_limit_cycle(*m, 0.05, curves[0]);
  SdiValue other = slow_divergence_integral(*m, curves[1]);
  CHECK_THROWS_AS(verify_divergence_bracket(a, other, 1.0), Error);
  other.curve_index = a.near_curve_index;
  CHECK_THROWS_AS(verify_divergence_bracket(a, other, 0.0), Error);
}

TEST_CASE("rotation number") {
  LimitCycle c;
  c.winding = {1, 1};
  CHECK(rotation_number(c) == Rational{1, 1});
  c.winding = {3, 2};
  CHECK(rotation_number(c) == Rational{2, 3});
  c.winding = {1, 0};
  CHECK(rotation_number(c) == Rational{0, 1});
  c.winding = {0, 1};
  CHECK_THROWS_AS(rotation_number(c), Error);

  const Model m = sine_link_model(1, 5, 2);
  for (const auto& cyc : cycle_census(*m, 0.05).cycles) CHECK(rotation_number(cyc) == Rational{2, 5});
}

TEST_CASE("hausdorff convergence") {
  const Model m = diagonal_model();
  const auto seed = critical_curves(*m).front();
  const auto h = hausdorff_convergence(*m, seed, {0.2, 0.1, 0.05, 0.025});
  REQUIRE(h.size() == 4);
  for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i].distance < h[i - 1].distance);
  CHECK(decreasing_within(h, 0.05));
  CHECK(h.back().distance < 0.1);
  CHECK_THROWS_AS(hausdorff_convergence(*m, seed, {0.05, 0.1}), Error);
  CHECK_THROWS_AS(hausdorff_convergence(*m, seed, {0.5, 0.1}), Error);
  CHECK_THROWS_AS(hausdorff_convergence(*m, seed, {}), Error);
  CHECK(decreasing_within({{0.2, 1.0}, {0.1, 1.04}}, 0.05));
  CHECK_FALSE(decreasing_within({{0.2, 1.0}, {0.1, 1.06}}, 0.05));
}

TEST_CASE("Floquet multiplier agrees with finite differences of the flow") {
  for (const Model& m : {diagonal_model(), odd_contact_model(), sine_link_model(2, 3, 2)}) {
    for (const auto& cyc : cycle_census(*m, 0.05).cycles) {
      const double fd = fd_log_multiplier(*m, cyc);
      CHECK(std::abs(fd - cyc.log_multiplier) <= 0.05 * std::abs(cyc.log_multiplier));
      CHECK(std::abs(fd - cyc.log_multiplier) <= 1e-4 * std::abs(cyc.log_multiplier));
    }
  }
}

TEST_CASE("restarts from perturbed seeds find the same cycle") {
  CycleOptions o;
  o.orbit_gap = 0.002;
  for (const Model& m : {diagonal_model(), sine_link_model(1, 3, 2), odd_contact_model()}) {
    for (double eps : {0.1, 0.05, 0.025}) {
      const auto curves = critical_curves(*m);
      for (const auto& c : curves) {
        const LimitCycle ref = find_limit_cycle(*m, eps, c, o);
        CHECK(restart_spread(*m, eps, c, ref, 5, 11, o) < 1e-6);
      }
    }
  }
}

TEST_CASE("repelling cycle is the attracting cycle of the reversed field") {
  const Model m = diagonal_model();
  const Model r = reversed_diagonal();
  const auto curves = critical_curves(*m);
  const auto rcurves = critical_curves(*r);
  for (const auto& c : curves) {
    if (c.stability < 0) continue;
    const LimitCycle rep = find_limit_cycle(*m, 0.05, c);
    const CriticalCurve* twin = nullptr;
    for (const auto& rc : rcurves)
      if (hausdorff_dist(rc.curve, c.curve) < 1e-9) twin = &rc;
    REQUIRE(twin != nullptr);
    CHECK(twin->stability < 0);
    const LimitCycle att = find_limit_cycle(*r, 0.05, *twin);
    CHECK(att.stability == CycleStability::Attracting);
    CHECK(att.detection_direction == Direction::Forward);
    CHECK(hausdorff_dist(att.orbit, rep.orbit) < 1e-8);
    CHECK(att.div_integral == doctest::Approx(-rep.div_integral).epsilon(1e-8));
  }
}

TEST_CASE("basin census: sin(y-x) model") {
  const Model m = diagonal_model();
  const CycleCensus cen = cycle_census(*m, 0.05);
  const BasinCensus b = basin_census(*m, 0.05, cen, 20);
  CHECK(b.entries.size() == 400);
  CHECK(b.classified == b.considered);
  std::vector<CurveIndex> idx;
  for (const auto& c : cen.cycles) idx.emplace_back(c.orbit);
  for (const auto& e : b.entries) {
    double d = 1e9;
    for (const auto& ix : idx) d = std::min(d, ix.distance(e.start.vec()));
    CHECK(e.excluded == (d < 0.05));
    if (e.excluded) continue;
    REQUIRE(e.omega >= 0);
    REQUIRE(e.alpha >= 0);
    CHECK(cen.cycles[e.omega].stability == CycleStability::Attracting);
    CHECK(cen.cycles[e.alpha].stability == CycleStability::Repelling);
  }
}

TEST_CASE("basin census: both attracting cycles of (2,1,1) have basins") {
  const Model m = sine_link_model(2, 1, 1);
  const CycleCensus cen = cycle_census(*m, 0.05);
  const BasinCensus b = basin_census(*m, 0.05, cen, 12);
  std::vector<int> hits(cen.cycles.size(), 0);
  for (const auto& e : b.entries)
    if (e.omega >= 0) ++hits[e.omega];
  int nonempty = 0;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (cen.cycles[i].stability == CycleStability::Attracting && hits[i] > 0) ++nonempty;
  CHECK(nonempty == 2);
  CHECK(b.classified_fraction() >= 0.99);
}

TEST_CASE("a point on a cycle is excluded") {
  const Model m = diagonal_model();
  CycleCensus cen = cycle_census(*m, 0.05);
  // Grid 4 puts cell centres on the diagonal, which is within 0.05 of the
  // attracting cycle (offset asin(0.05)/sqrt 2 = 0.035).
  const BasinCensus b = basin_census(*m, 0.05, cen, 4);
  CHECK(b.entries[0].excluded);
  CHECK(b.entries[5].excluded);
  CHECK_THROWS_AS(basin_census(*m, 0.05, cen, 0), Error);
}

}  // TEST_SUITE
