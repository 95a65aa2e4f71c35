#include <doctest.h>

#include <sftorus/curves.hpp>
#include <sftorus/model.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace sftorus;

namespace {

std::vector<Model> catalog() {
  std::vector<Model> out;
  for (auto [m, k, l] : {std::tuple{1, 1, 1}, {1, 1, 0}, {2, 1, 1}, {1, 3, 2}, {1, 2, 3},
                         {2, 3, 2}, {1, 5, 2}})
    out.push_back(sine_link_model(m, k, l));
  out.push_back(sine_link_model(1, 1, 1, SlowVariant::Cosine));
  out.push_back(odd_contact_model());
  out.push_back(graph_model(PhiSeries::parse("q:2")));
  out.push_back(graph_model(PhiSeries::parse("q:1,s2:0.5")));
  return out;
}

TrigPoly trig(int P, int R) {
  TrigPoly t;
  t.cos_coeffs = Eigen::MatrixXd::Zero(2 * P + 1, 2 * R + 1);
  t.sin_coeffs = Eigen::MatrixXd::Zero(2 * P + 1, 2 * R + 1);
  return t;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("factories reject invalid parameters") {
  CHECK_THROWS_AS(sine_link_model(0, 1, 1), Error);
  CHECK_THROWS_AS(sine_link_model(1, 0, 1), Error);
  CHECK_THROWS_AS(sine_link_model(1, 1, -1), Error);
  CHECK_THROWS_AS(sine_link_model(1, 2, 2), Error);
  CHECK_THROWS_AS(sine_link_model(1, 4, 6), Error);
  CHECK_THROWS_AS(sine_link_model(1, 3, 2, SlowVariant::Cosine), Error);
  CHECK_THROWS_AS(sine_link_model(2, 1, 1, SlowVariant::Cosine), Error);
  CHECK_NOTHROW(sine_link_model(1, 1, 1, SlowVariant::Cosine));
  CHECK_THROWS_AS(PhiSeries::parse("q:1,z3:1"), Error);
  CHECK_THROWS_AS(PhiSeries::parse("q:x"), Error);
}

TEST_CASE("sine-link field values and exact partials") {
  const Model m = sine_link_model(2, 3, 2);
  const double x = 0.3, y = 1.1, eps = 0.05;
  const double arg = 2 * (2 * y - 3 * x);
  CHECK(m->fast(x, y) == doctest::Approx(std::sin(arg)).epsilon(1e-15));
  const Vec2 g = m->fast_gradient(x, y);
  CHECK(g.x() == doctest::Approx(-6 * std::cos(arg)).epsilon(1e-14));
  CHECK(g.y() == doctest::Approx(4 * std::cos(arg)).epsilon(1e-14));
  CHECK(m->slow(x, y, eps) == 1.0);
  CHECK(m->divergence(x, y, eps) == doctest::Approx(-6 * std::cos(arg)));

  const Model c = sine_link_model(1, 1, 1, SlowVariant::Cosine);
  CHECK(c->slow(x, y, eps) == doctest::Approx(std::cos(y - x)));
  CHECK(c->divergence(x, y, eps) ==
        doctest::Approx(-std::cos(y - x) - eps * std::sin(y - x)).epsilon(1e-14));
}

TEST_CASE("fields are doubly periodic") {
  for (const auto& m : catalog()) CHECK(periodicity_residue(*m, 100, 7) < 1e-12);
}

TEST_CASE("phi series parse and print round trip") {
  const PhiSeries p = PhiSeries::parse("q:1,c0:0.25,s1:1,c2:-0.5");
  CHECK(p.q == 1);
  CHECK(p.c0 == 0.25);
  const double x = 0.9;
  CHECK(p(x) == doctest::Approx(x + 0.25 + std::sin(x) - 0.5 * std::cos(2 * x)));
  CHECK(p.derivative(x, 1) == doctest::Approx(1 + std::cos(x) + std::sin(2 * x)));
  const PhiSeries q = PhiSeries::parse(p.to_string());
  CHECK(q(x) == doctest::Approx(p(x)).epsilon(1e-15));
}

TEST_CASE("sin(y-x) model critical curves") {
  const auto curves = critical_curves(*diagonal_model());
  REQUIRE(curves.size() == 2);
  for (const auto& c : curves) {
    CHECK(c.winding == WindingPair{1, 1});
    CHECK(c.contacts.empty());
    const double shift = c.stability < 0 ? 0.0 : oracle::pi;
    for (const auto& p : c.curve.samples())
      CHECK(std::abs(std::remainder(p.y() - p.x() - shift, 2 * oracle::pi)) < 1e-12);
  }
  CHECK(curves[0].stability * curves[1].stability == -1);
}

TEST_CASE("sine-link curves: count, winding and alternation") {
  for (auto [m, k, l] : {std::tuple{1, 3, 2}, {2, 1, 1}, {2, 3, 2}, {1, 1, 0}, {1, 5, 2}}) {
    const Model model = sine_link_model(m, k, l);
    const auto curves = critical_curves(*model);
    CHECK(curves.size() == std::size_t(2 * m));
    // Independent count: zeros of f along a fiber, one per curve per l-wrap
    // of the fiber, i.e. k crossings per curve.
    auto f = [&](double x, double y) { return std::sin(m * (l * y - k * x)); };
    CHECK(oracle::sign_changes(f, 0.4321) == 2 * m * k);
    for (const auto& c : curves) {
      CHECK(c.winding == WindingPair{k, l});
      CHECK(c.stability != 0);
    }
    const auto report = validate_assumptions(*model, curves);
    CHECK(report.alternating);
    CHECK(report.attracting == m);
    CHECK(report.repelling == m);
  }
}

TEST_CASE("(2,1,1) stability pattern along a fast fiber") {
  const Model model = sine_link_model(2, 1, 1);
  const auto curves = critical_curves(*model);
  REQUIRE(curves.size() == 4);
  // Roots of sin(2(y - x)) on the fiber y = 0.2, ordered in x, and the
  // sign of f_x = -2 cos(2(y - x)) there.
  const double y = 0.2;
  std::vector<std::pair<double, int>> roots;
  for (int j = 0; j < 4; ++j) {
    double x = std::fmod(y - j * oracle::pi / 2 + 4 * oracle::pi, 2 * oracle::pi);
    roots.push_back({x, -2 * std::cos(2 * (y - x)) < 0 ? -1 : 1});
  }
  std::sort(roots.begin(), roots.end());
  int prev = 0;
  for (auto [x, s] : roots) {
    CHECK(s != prev);
    prev = s;
    const CriticalCurve* match = nullptr;
    for (const auto& c : curves) {
      const CurveIndex idx(c.curve);
      if (idx.distance({x, y}) < 1e-9) match = &c;
    }
    REQUIRE(match != nullptr);
    CHECK(match->stability == s);
  }
}

TEST_CASE("curve samples lie on the zero set with consistent stability") {
  for (const auto& m : catalog()) {
    for (const auto& c : critical_curves(*m)) {
      CHECK(c.curve.max_gap() <= 0.01 + 1e-9);
      for (const auto& p : c.curve.samples()) {
        CHECK(std::abs(m->fast(p.x(), p.y())) < 1e-9);
        const double fx = m->fast_gradient(p.x(), p.y()).x();
        if (std::abs(fx) > 1e-3) CHECK((fx < 0 ? -1 : 1) == c.stability);
      }
    }
  }
}

TEST_CASE("all curves of a model share one winding pair") {
  for (const auto& m : catalog()) {
    const auto curves = critical_curves(*m);
    for (const auto& c : curves) CHECK(c.winding == curves.front().winding);
  }
}

TEST_CASE("graph model examples") {
  const auto linear = critical_curves(*graph_model(PhiSeries::parse("q:1")));
  REQUIRE(linear.size() == 2);
  for (const auto& c : linear) CHECK(c.winding == WindingPair{1, 1});
  const auto doubled = critical_curves(*graph_model(PhiSeries::parse("q:2")));
  REQUIRE(doubled.size() == 2);
  for (const auto& c : doubled) CHECK(c.winding == WindingPair{2, 1});
}

TEST_CASE("sin(y-x) model assumption report") {
  const auto r = validate_assumptions(*diagonal_model());
  CHECK(r.hyperbolic_link);
  CHECK(r.contact_link);
  CHECK(r.slow_regular);
  CHECK(r.windings_equal);
  for (const auto& c : r.curves) {
    CHECK(c.hyperbolicity_margin == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(c.slow_margin == doctest::Approx(1.0));
    CHECK(c.contacts.empty());
  }
}

TEST_CASE("odd-contact model: one cubic regular contact per curve") {
  const Model m = odd_contact_model();
  const auto curves = critical_curves(*m);
  REQUIRE(curves.size() == 2);
  for (const auto& c : curves) {
    REQUIRE(c.contacts.size() == 1);
    const ContactPoint& p = c.contacts.front();
    CHECK(p.location.x() == doctest::Approx(oracle::pi).epsilon(1e-9));
    REQUIRE(p.order.has_value());
    CHECK(*p.order == 3);
    CHECK(p.regular);
    CHECK(p.odd);
    CHECK(c.stability != 0);
    // Oracle: along the fiber, |f| / |u|^3 -> |phi'''(pi)| / 3! = 1/6.
    const double X = p.lift.x(), Y = p.lift.y();
    for (double u : {1e-2, 5e-3}) {
      const double ratio = std::abs(m->fast(X + u, Y)) / (u * u * u);
      CHECK(ratio == doctest::Approx(1.0 / 6).epsilon(1e-3));
    }
  }
  const auto r = validate_assumptions(*m, curves);
  CHECK_FALSE(r.hyperbolic_link);
  CHECK(r.contact_link);
  CHECK(r.slow_regular);
  CHECK_FALSE(r.passes(false));
  CHECK(r.passes(true));
}

TEST_CASE("phi = x + sin(2x)/2 has cubic contacts at pi/2 and 3pi/2") {
  const Model m = graph_model(PhiSeries::parse("q:1,s2:0.5"));
  for (const auto& c : critical_curves(*m)) {
    REQUIRE(c.contacts.size() == 2);
    std::vector<double> xs;
    for (const auto& p : c.contacts) {
      xs.push_back(p.location.x());
      CHECK(p.order.value_or(-1) == 3);
      CHECK(p.regular);
    }
    std::sort(xs.begin(), xs.end());
    CHECK(xs[0] == doctest::Approx(oracle::pi / 2).epsilon(1e-9));
    CHECK(xs[1] == doctest::Approx(3 * oracle::pi / 2).epsilon(1e-9));
  }
}

TEST_CASE("fold points are even contacts: relaxed mode only") {
  // phi' = 1 + 2 cos x changes sign: the graphs have quadratic tangencies.
  const Model m = graph_model(PhiSeries::parse("q:1,s1:2"));
  const auto curves = critical_curves(*m);
  REQUIRE(curves.size() == 2);
  for (const auto& c : curves) {
    CHECK(c.stability == 0);
    REQUIRE(c.contacts.size() == 2);
    for (const auto& p : c.contacts) {
      CHECK(p.order.value_or(-1) == 2);
      CHECK_FALSE(p.odd);
      CHECK(std::abs(1 + 2 * std::cos(p.location.x())) < 1e-9);
    }
  }
  const auto r = validate_assumptions(*m, curves);
  CHECK_FALSE(r.hyperbolic_link);
  // Regular contacts of finite order are admitted whatever their parity.
  CHECK(r.contact_link);
}

TEST_CASE("cosine slow variant: slow flow up on C-, down on C+") {
  const Model m = sine_link_model(1, 1, 1, SlowVariant::Cosine);
  const auto curves = critical_curves(*m);
  REQUIRE(curves.size() == 2);
  const auto r = validate_assumptions(*m, curves);
  CHECK(r.slow_regular);
  for (const auto& c : curves) {
    const auto& p = c.curve.samples().front();
    const double g = m->slow(p.x(), p.y(), 0.0);
    CHECK(std::abs(g) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK((g > 0) == (c.stability < 0));
  }
  for (const auto& rc : r.curves) CHECK(rc.slow_margin == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("slow flow vanishing on a curve is not slow-regular") {
  TrigPoly f = trig(1, 1), g = trig(1, 1);
  f.sin_coeffs(0, 2) = 1.0;  // sin(y - x)
  g.sin_coeffs(0, 2) = 1.0;  // sin(y - x) vanishes on both curves
  const auto r = validate_assumptions(*trig_model(f, g));
  CHECK_FALSE(r.slow_regular);
  CHECK_FALSE(r.passes(true));
}

TEST_CASE("trigonometric model reproduces sin(y-x) model") {
  TrigPoly f = trig(1, 1), g = trig(0, 0);
  f.sin_coeffs(0, 2) = 1.0;  // p = -1, r = 1
  g.cos_coeffs(0, 0) = 1.0;
  const Model t = trig_model(f, g);
  const Model e = diagonal_model();
  for (double x : {0.1, 2.0, 5.5})
    for (double y : {0.3, 4.0}) {
      CHECK(t->fast(x, y) == doctest::Approx(e->fast(x, y)).epsilon(1e-15));
      CHECK(t->slow(x, y, 0.1) == doctest::Approx(1.0));
    }
  const auto curves = critical_curves(*t);
  REQUIRE(curves.size() == 2);
  for (const auto& c : curves) {
    CHECK(c.winding == WindingPair{1, 1});
    const auto ref = critical_curves(*e);
    double best = 1e9;
    for (const auto& r : ref) best = std::min(best, hausdorff_dist(c.curve, r.curve));
    CHECK(best < 1e-6);
  }
  TrigPoly bad = trig(1, 1);
  bad.sin_coeffs = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(trig_model(bad, g), Error);
}

}  // TEST_SUITE
