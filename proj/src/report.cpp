#include <sftorus/report.hpp>

#include <charconv>
#include <cmath>
#include <ostream>

namespace sftorus {

const char* to_string(CycleStability s) {
  return s == CycleStability::Attracting ? "attracting" : "repelling";
}

const char* to_string(SdiMethod m) {
  return m == SdiMethod::Analytic ? "analytic" : "quadrature";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json to_json(const WindingPair& w) { return {{"k", w.k}, {"l", w.l}}; }

json to_json(const ContactPoint& c) {
  json j = {{"x", c.location.x()},
            {"y", c.location.y()},
            {"order", nullptr},
            {"regular", c.regular},
            {"odd", c.odd},
            {"slow_value", c.slow_value}};
  if (c.order) j["order"] = *c.order;
  return j;
}

json to_json(const AssumptionReport& r) {
  json curves = json::array();
  for (const auto& c : r.curves) {
    json contacts = json::array();
    for (const auto& p : c.contacts) contacts.push_back(to_json(p));
    curves.push_back({{"index", c.index},
                      {"winding", to_json(c.winding)},
                      {"stability", c.stability},
                      {"hyperbolicity_margin", c.hyperbolicity_margin},
                      {"slow_margin", c.slow_margin},
                      {"contacts", contacts}});
  }
  return {{"curves", curves},
          {"attracting", r.attracting},
          {"repelling", r.repelling},
          {"windings_equal", r.windings_equal},
          {"windings_valid", r.windings_valid},
          {"alternating", r.alternating},
          {"hyperbolic_link", r.hyperbolic_link},
          {"contact_link", r.contact_link},
          {"slow_regular", r.slow_regular},
          {"messages", r.messages}};
}

json to_json(const SdiValue& v) {
  return {{"curve_index", v.curve_index},
          {"value", v.value},
          {"method", to_string(v.method)},
          {"est_error", v.est_error}};
}

json to_json(const LimitCycle& c) {
  // JSON has no infinities; an overflowed multiplier is written as null
  // and log_multiplier carries the value.
  json mult = std::isfinite(c.multiplier) ? json(c.multiplier) : json(nullptr);
  return {{"near_curve_index", c.near_curve_index},
          {"eps", c.eps},
          {"period", c.period},
          {"winding", to_json(c.winding)},
          {"div_integral", c.div_integral},
          {"eps_div_integral", c.eps * c.div_integral},
          {"log_multiplier", c.log_multiplier},
          {"multiplier", mult},
          {"stability", to_string(c.stability)},
          {"canard", c.canard},
          {"orbit_samples", c.orbit.size()},
          {"section_point", {c.section_point.x(), c.section_point.y()}},
          {"section_direction", {c.section_direction.x(), c.section_direction.y()}},
          {"fixed_point_residual", c.fixed_point_residual}};
}

json to_json(const KnotClass& k) {
  return {{"k", k.pair.k}, {"l", k.pair.l}, {"essential", k.essential}};
}

json to_json(const SweepRow& r) {
  json j = {{"eps", r.eps}, {"curve_index", r.curve_index}};
  if (!r.cycle) {
    j["error"] = r.error;
    return j;
  }
  const LimitCycle& c = *r.cycle;
  j["winding"] = to_json(c.winding);
  j["period"] = c.period;
  j["div_integral"] = c.div_integral;
  j["eps_div_integral"] = c.eps * c.div_integral;
  j["sdi"] = r.sdi;
  j["gap"] = r.gap;
  j["kappa"] = r.kappa;
  j["bracket_pass"] = r.bracket_pass;
  j["hausdorff"] = r.hausdorff;
  j["log_multiplier"] = c.log_multiplier;
  j["multiplier"] = std::isfinite(c.multiplier) ? json(c.multiplier) : json(nullptr);
  j["gap_monotone"] = r.gap_monotone;
  j["hausdorff_monotone"] = r.hausdorff_monotone;
  return j;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "eps,curve_index,k,l,period,div_integral,eps_div_integral,sdi,gap,kappa,"
        "bracket_pass,hausdorff,multiplier,log_multiplier,gap_monotone,"
        "hausdorff_monotone,error\n";
  for (const auto& r : rows) {
    os << format_double(r.eps) << ',' << r.curve_index << ',';
    if (!r.cycle) {
      os << ",,,,,,,,,,,,,," << '"' << r.error << '"' << '\n';
      continue;
    }
    const LimitCycle& c = *r.cycle;
    os << c.winding.k << ',' << c.winding.l << ',' << format_double(c.period) << ','
       << format_double(c.div_integral) << ',' << format_double(c.eps * c.div_integral) << ','
       << format_double(r.sdi) << ',' << format_double(r.gap) << ','
       << format_double(r.kappa) << ',' << (r.bracket_pass ? 1 : 0) << ','
       << format_double(r.hausdorff) << ',' << format_double(c.multiplier) << ','
       << format_double(c.log_multiplier) << ',' << (r.gap_monotone ? 1 : 0) << ','
       << (r.hausdorff_monotone ? 1 : 0) << ",\n";
  }
}

void write_orbits_csv(std::ostream& os, double eps, const std::vector<LimitCycle>& cycles,
                      bool header) {
  if (header) os << "eps,cycle,stability,sample,x_lift,y_lift,x_wrapped,y_wrapped\n";
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& s = cycles[c].orbit.samples();
    for (std::size_t i = 0; i < s.size(); ++i) {
      os << format_double(eps) << ',' << c << ',' << to_string(cycles[c].stability) << ','
         << i << ',' << format_double(s[i].x()) << ',' << format_double(s[i].y()) << ','
         << format_double(wrap(s[i]).x()) << ',' << format_double(wrap(s[i]).y()) << '\n';
    }
  }
}

void write_basin_csv(std::ostream& os, double eps, const BasinCensus& b, bool header) {
  if (header) os << "eps,i,j,x,y,excluded,omega_index,alpha_index,budget_exhausted\n";
  for (std::size_t n = 0; n < b.entries.size(); ++n) {
    const auto& e = b.entries[n];
    os << format_double(eps) << ',' << n / b.grid_n << ',' << n % b.grid_n << ',' << format_double(e.start.x()) << ','
       << format_double(e.start.y()) << ',' << (e.excluded ? 1 : 0) << ',' << e.omega << ','
       << e.alpha << ',' << (e.budget_exhausted ? 1 : 0) << '\n';
  }
}

json to_json(const BasinCensus& b) {
  return {{"grid_n", b.grid_n},
          {"considered", b.considered},
          {"classified", b.classified},
          {"classified_fraction", b.classified_fraction()}};
}

}  // namespace sftorus
