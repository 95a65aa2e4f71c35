#pragma once

// Limit-cycle detection near critical curves, classification, and the
// quantitative checks that relate cycles to slow divergence integrals.

#include <sftorus/curves.hpp>
#include <sftorus/integrate.hpp>
#include <sftorus/sdi.hpp>

#include <cstdint>
#include <vector>

namespace sftorus {

enum class CycleStability { Attracting, Repelling };

struct LimitCycle {
  /// Orbit samples in forward-time order; last sample = first + lattice loop.
  ClosedCurve orbit;
  double period = 0.0;
  WindingPair winding;
  /// int div X_eps dt over one period, forward time.
  double div_integral = 0.0;
  /// ln of the Floquet multiplier. Kept separately because the multiplier
  /// itself under- or overflows a double for eps * |div_integral| ~ 700.
  double log_multiplier = 0.0;
  double multiplier = 1.0;
  CycleStability stability = CycleStability::Attracting;
  bool canard = false;
  double eps = 0.0;
  int near_curve_index = 0;

  LiftPoint section_point = LiftPoint::Zero();
  Vec2 section_direction = Vec2::Zero();
  double fixed_point_residual = 0.0;
  Direction detection_direction = Direction::Forward;
};

struct CycleOptions {
  SolverOptions solver{1e-11, 1e-13, 5.0, 1e7};
  /// Torus distance of the starting point from the seed curve, along the fast fiber.
  double offset = 0.1;
  std::size_t start_sample = 0;
  double fixed_point_tol = 1e-10;
  int max_secant = 50;
  int max_loops = 30;
  double orbit_gap = 0.01;
  double section_half_width = 0.2;
};

/// Detects the cycle generated by one critical curve: forward integration
/// for attracting seeds, time reversal for repelling ones, local transverse
/// section and secant refinement of the one-loop return map.
LimitCycle find_limit_cycle(const SlowFastModel& model, double eps,
                            const CriticalCurve& seed, const CycleOptions& opts = {});

struct CycleCensus {
  std::vector<LimitCycle> cycles;
  int attracting_count = 0;
  int repelling_count = 0;
  bool windings_equal = false;
  /// Minimum pairwise distance between orbits.
  double min_separation = 0.0;
  bool disjoint() const { return min_separation > 0.0; }
};

/// One detection per critical curve, run on a bounded worker pool
/// (0: hardware concurrency). Throws AssumptionViolated unless the model
/// passes the relaxed assumption check.
CycleCensus cycle_census(const SlowFastModel& model, double eps,
                         const CycleOptions& opts = {}, int workers = 0);
CycleCensus cycle_census(const SlowFastModel& model,
                         const std::vector<CriticalCurve>& curves, double eps,
                         const CycleOptions& opts = {}, int workers = 0);

/// eps * div_integral within [I - kappa, I + kappa]. Throws InvalidArgument
/// when the curve indices differ.
bool verify_divergence_bracket(const LimitCycle& cycle, const SdiValue& sdi,
                               double kappa);

struct Rational {
  long num = 0;
  long den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// l / k in lowest terms. Throws InvalidArgument when k = 0.
Rational rotation_number(const LimitCycle& cycle);

struct HausdorffSample {
  double eps = 0.0;
  double distance = 0.0;
};

/// Hausdorff distance between the detected cycle and its seed curve for
/// each eps (strictly decreasing, all in (0, 0.25]).
std::vector<HausdorffSample> hausdorff_convergence(const SlowFastModel& model,
                                                   const CriticalCurve& seed,
                                                   const std::vector<double>& eps_list,
                                                   const CycleOptions& opts = {});

/// True when every distance is at most (1 + slack) times its predecessor.
bool decreasing_within(const std::vector<HausdorffSample>& samples, double slack);

/// ln P'(s0) assembled from central finite differences of the flow along
/// the orbit: each short segment contributes the growth of the wedge
/// product of a transverse perturbation with the field. Independent of the
/// divergence accumulator.
double fd_log_multiplier(const SlowFastModel& model, const LimitCycle& cycle,
                         double delta = 1e-6);

/// Restarts detection from n random offsets and start samples; returns the
/// largest Hausdorff distance to the reference cycle.
double restart_spread(const SlowFastModel& model, double eps, const CriticalCurve& seed,
                      const LimitCycle& reference, int n, std::uint64_t rng_seed,
                      const CycleOptions& opts = {});

struct BasinOptions {
  double exclusion = 0.05;
  double capture = 0.02;
  /// 0: twice the longest cycle period plus 100.
  double max_time = 0.0;
  SolverOptions solver{1e-8, 1e-10, 2.0, 1e7};
  int workers = 0;
};

struct BasinEntry {
  TorusPoint start;
  bool excluded = false;
  /// Positions in CycleCensus::cycles; -1 when not reached.
  int omega = -1;
  int alpha = -1;
  bool budget_exhausted = false;
};

struct BasinCensus {
  int grid_n = 0;
  std::vector<BasinEntry> entries;
  int considered = 0;
  int classified = 0;
  double classified_fraction() const {
    return considered == 0 ? 1.0 : double(classified) / considered;
  }
};

/// Forward/backward limits of grid_n x grid_n cell-centred initial points.
BasinCensus basin_census(const SlowFastModel& model, double eps,
                         const CycleCensus& census, int grid_n,
                         const BasinOptions& opts = {});

}  // namespace sftorus
