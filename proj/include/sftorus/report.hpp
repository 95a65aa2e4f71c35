#pragma once

// JSON records and CSV tables for assumption reports, SDI values, cycles,
// sweeps and basin censuses.

#include <sftorus/cycles.hpp>
#include <sftorus/knots.hpp>

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sftorus {

using json = nlohmann::ordered_json;

const char* to_string(CycleStability s);
const char* to_string(SdiMethod m);

json to_json(const WindingPair& w);
json to_json(const ContactPoint& c);
json to_json(const AssumptionReport& r);
json to_json(const SdiValue& v);
/// Cycle record without orbit samples (those go to CSV).
json to_json(const LimitCycle& c);
json to_json(const KnotClass& k);

/// One row per (eps, curve).
struct SweepRow {
  double eps = 0.0;
  int curve_index = 0;
  std::optional<LimitCycle> cycle;
  std::string error;
  double sdi = 0.0;
  double kappa = 0.0;
  bool bracket_pass = false;
  double hausdorff = 0.0;
  double gap = 0.0;
  bool gap_monotone = true;
  bool hausdorff_monotone = true;
};

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
json to_json(const SweepRow& r);

/// Rows (eps, cycle, sample, x_lift, y_lift, x_wrapped, y_wrapped).
void write_orbits_csv(std::ostream& os, double eps, const std::vector<LimitCycle>& cycles,
                      bool header);

void write_basin_csv(std::ostream& os, double eps, const BasinCensus& b, bool header);
json to_json(const BasinCensus& b);

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace sftorus
