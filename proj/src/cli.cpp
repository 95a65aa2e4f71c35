#include <sftorus/cli.hpp>

#include <sftorus/parallel.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace sftorus::cli {
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

std::vector<double> eps_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return v.get<std::vector<double>>();
  throw Error(ErrorCode::InvalidArgument, "eps must be a number or an array");
}

std::vector<std::string> formats_from_json(const json& v) {
  if (v.is_string()) return {v.get<std::string>()};
  return v.get<std::vector<std::string>>();
}

Eigen::MatrixXd matrix_from_json(const json& v) {
  const auto rows = v.get<std::vector<std::vector<double>>>();
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient matrix");
  Eigen::MatrixXd M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size())
      throw Error(ErrorCode::InvalidArgument, "ragged coefficient matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  }
  return M;
}

TrigPoly trig_from_json(const json& v) {
  TrigPoly p;
  p.cos_coeffs = matrix_from_json(v.at("cos"));
  p.sin_coeffs = v.contains("sin") ? matrix_from_json(v.at("sin"))
                                   : Eigen::MatrixXd::Zero(p.cos_coeffs.rows(),
                                                           p.cos_coeffs.cols());
  p.validate();
  return p;
}

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  std::ofstream f(fs::path(cfg.out) / name);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + (fs::path(cfg.out) / name).string());
  return f;
}

void write_json(const ExperimentConfig& cfg, const std::string& name, const json& j) {
  auto f = open_out(cfg, name);
  f << j.dump(2) << '\n';
}

std::vector<std::string> g_written;

void note(const std::string& name) { g_written.push_back(name); }

CycleOptions cycle_options(const ExperimentConfig& cfg) {
  CycleOptions o;
  o.solver = cfg.solver;
  return o;
}

// Curves plus assumption check; returns the exit code to use on failure.
struct Prepared {
  Model model;
  std::vector<CriticalCurve> curves;
  AssumptionReport report;
};

Prepared prepare(const ExperimentConfig& cfg) {
  Prepared p;
  p.model = build_model(cfg);
  p.curves = critical_curves(*p.model);
  p.report = validate_assumptions(*p.model, p.curves);
  return p;
}

void require_assumptions(const ExperimentConfig& cfg, const Prepared& p) {
  if (p.report.passes(cfg.relaxed)) return;
  std::string msg = cfg.relaxed ? "relaxed assumption check failed"
                                : "strict assumption check failed (try --relaxed)";
  for (const auto& m : p.report.messages) msg += "; " + m;
  throw Error(ErrorCode::AssumptionViolated, msg);
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg);
  json j = {{"model", p.model->label()},
            {"relaxed", cfg.relaxed},
            {"pass", p.report.passes(cfg.relaxed)},
            {"report", to_json(p.report)}};
  write_json(cfg, "assumptions.json", j);
  note("assumptions.json");
  out << p.model->label() << ": " << p.curves.size() << " critical curves, hyperbolic_link="
      << p.report.hyperbolic_link << " contact_link=" << p.report.contact_link
      << " slow_regular=" << p.report.slow_regular << '\n';
  for (const auto& m : p.report.messages) out << "  " << m << '\n';
  return p.report.passes(cfg.relaxed) ? kOk : kAssumptionFailure;
}

int cmd_sdi(const ExperimentConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg);
  json rows = json::array();
  std::ostringstream csv;
  csv << "curve_index,k,l,stability,value,est_error,analytic\n";
  for (const auto& c : p.curves) {
    const SdiValue v = slow_divergence_integral(*p.model, c);
    const auto a = analytic_sdi(*p.model, c);
    json r = to_json(v);
    r["winding"] = to_json(c.winding);
    r["stability"] = c.stability;
    r["analytic"] = a ? json(a->value) : json(nullptr);
    rows.push_back(r);
    csv << c.index << ',' << c.winding.k << ',' << c.winding.l << ',' << c.stability << ','
        << format_double(v.value) << ',' << format_double(v.est_error) << ','
        << (a ? format_double(a->value) : std::string()) << '\n';
    out << "curve " << c.index << " (" << c.winding.k << "," << c.winding.l
        << "): I = " << format_double(v.value) << '\n';
  }
  if (cfg.wants("csv")) {
    open_out(cfg, "sdi.csv") << csv.str();
    note("sdi.csv");
  }
  if (cfg.wants("json")) {
    write_json(cfg, "sdi.json", {{"model", p.model->label()}, {"curves", rows}});
    note("sdi.json");
  }
  return kOk;
}

struct Detection {
  std::optional<LimitCycle> cycle;
  std::string error;
  ErrorCode code = ErrorCode::NoConvergence;
};

std::vector<Detection> detect_all(const ExperimentConfig& cfg, const Prepared& p, double eps) {
  std::vector<Detection> d(p.curves.size());
  const CycleOptions o = cycle_options(cfg);
  parallel_for(p.curves.size(), cfg.workers, [&](std::size_t i) {
    try {
      d[i].cycle = find_limit_cycle(*p.model, eps, p.curves[i], o);
    } catch (const Error& e) {
      d[i].error = e.what();
      d[i].code = e.code();
    }
  });
  return d;
}

int cmd_cycles(const ExperimentConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg);
  require_assumptions(cfg, p);
  json census = json::array();
  std::ostringstream orbits, table;
  table << "eps,curve_index,k,l,stability,canard,period,div_integral,eps_div_integral,"
           "log_multiplier,multiplier,restart_spread,error\n";
  bool failed = false;
  bool header = true;
  for (double eps : cfg.eps) {
    const auto det = detect_all(cfg, p, eps);
    std::vector<LimitCycle> found;
    json cycles = json::array(), errors = json::array();
    int att = 0, rep = 0;
    for (std::size_t i = 0; i < det.size(); ++i) {
      if (!det[i].cycle) {
        failed = true;
        errors.push_back({{"curve_index", int(i)}, {"error", det[i].error}});
        table << format_double(eps) << ',' << i << ",,,,,,,,,,," << '"' << det[i].error << "\"\n";
        continue;
      }
      const LimitCycle& c = *det[i].cycle;
      json jc = to_json(c);
      double spread = std::nan("");
      if (cfg.restarts > 0) {
        spread = restart_spread(*p.model, eps, p.curves[i], c, cfg.restarts,
                                cfg.seed + i, cycle_options(cfg));
        jc["restart_spread"] = spread;
      }
      cycles.push_back(jc);
      (c.stability == CycleStability::Attracting ? att : rep)++;
      table << format_double(eps) << ',' << i << ',' << c.winding.k << ',' << c.winding.l << ','
            << to_string(c.stability) << ',' << (c.canard ? 1 : 0) << ','
            << format_double(c.period) << ',' << format_double(c.div_integral) << ','
            << format_double(eps * c.div_integral) << ',' << format_double(c.log_multiplier)
            << ',' << format_double(c.multiplier) << ','
            << (std::isnan(spread) ? std::string() : format_double(spread)) << ",\n";
      found.push_back(c);
    }
    std::vector<ClosedCurve> orbit_curves;
    for (const auto& c : found) orbit_curves.push_back(c.orbit);
    json link = nullptr;
    try {
      link = link_consistent(orbit_curves);
    } catch (const Error&) {
      link = false;
    }
    census.push_back({{"eps", eps},
                      {"attracting_count", att},
                      {"repelling_count", rep},
                      {"link_consistent", link},
                      {"cycles", cycles},
                      {"errors", errors}});
    write_orbits_csv(orbits, eps, found, header);
    header = false;
    out << "eps " << format_double(eps) << ": " << att << " attracting, " << rep
        << " repelling";
    if (!errors.empty()) out << ", " << errors.size() << " failed";
    out << '\n';
  }
  if (cfg.wants("json")) {
    write_json(cfg, "census.json", {{"model", p.model->label()}, {"census", census}});
    note("census.json");
  }
  if (cfg.wants("csv")) {
    open_out(cfg, "cycles.csv") << table.str();
    note("cycles.csv");
  }
  open_out(cfg, "orbits.csv") << orbits.str();
  note("orbits.csv");
  return failed ? kDetectionFailure : kOk;
}

int cmd_sweep(const ExperimentConfig& cfg, std::ostream& out) {
  for (std::size_t i = 1; i < cfg.eps.size(); ++i)
    if (!(cfg.eps[i] < cfg.eps[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "sweep eps list must be strictly decreasing");
  const Prepared p = prepare(cfg);
  require_assumptions(cfg, p);

  std::vector<SdiValue> sdi;
  for (const auto& c : p.curves) sdi.push_back(slow_divergence_integral(*p.model, c));

  const std::size_t nc = p.curves.size();
  std::vector<SweepRow> rows(cfg.eps.size() * nc);
  const CycleOptions o = cycle_options(cfg);
  parallel_for(rows.size(), cfg.workers, [&](std::size_t n) {
    SweepRow& r = rows[n];
    r.eps = cfg.eps[n / nc];
    r.curve_index = static_cast<int>(n % nc);
    r.sdi = sdi[r.curve_index].value;
    r.kappa = 0.1 * std::abs(r.sdi);
    try {
      LimitCycle c = find_limit_cycle(*p.model, r.eps, p.curves[r.curve_index], o);
      r.bracket_pass = verify_divergence_bracket(c, sdi[r.curve_index], r.kappa);
      r.hausdorff = hausdorff_dist(c.orbit, p.curves[r.curve_index].curve);
      r.gap = std::abs(r.eps * c.div_integral - r.sdi);
      r.cycle = std::move(c);
    } catch (const Error& e) {
      r.error = e.what();
    }
  });

  bool failed = false;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (!rows[n].cycle) failed = true;
    if (n < nc) continue;
    const SweepRow& prev = rows[n - nc];
    SweepRow& r = rows[n];
    if (!r.cycle || !prev.cycle) continue;
    r.gap_monotone = prev.gap_monotone && r.gap < prev.gap;
    r.hausdorff_monotone = prev.hausdorff_monotone && r.hausdorff < prev.hausdorff;
  }

  if (cfg.wants("csv")) {
    auto f = open_out(cfg, "sweep.csv");
    write_sweep_csv(f, rows);
    note("sweep.csv");
  }
  if (cfg.wants("json")) {
    json jr = json::array();
    for (const auto& r : rows) jr.push_back(to_json(r));
    write_json(cfg, "sweep.json", {{"model", p.model->label()}, {"rows", jr}});
    note("sweep.json");
  }
  for (const auto& r : rows) {
    out << "eps " << format_double(r.eps) << " curve " << r.curve_index;
    if (r.cycle)
      out << ": eps*div = " << format_double(r.eps * r.cycle->div_integral) << ", I = "
          << format_double(r.sdi) << ", bracket " << (r.bracket_pass ? "pass" : "fail")
          << ", hausdorff " << format_double(r.hausdorff) << '\n';
    else
      out << ": " << r.error << '\n';
  }
  return failed ? kDetectionFailure : kOk;
}

int cmd_basin(const ExperimentConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg);
  require_assumptions(cfg, p);
  std::ostringstream csv;
  json summary = json::array();
  bool header = true;
  for (double eps : cfg.eps) {
    const CycleCensus census =
        cycle_census(*p.model, p.curves, eps, cycle_options(cfg), cfg.workers);
    BasinOptions bo;
    bo.workers = cfg.workers;
    const BasinCensus b = basin_census(*p.model, eps, census, cfg.grid, bo);
    write_basin_csv(csv, eps, b, header);
    header = false;
    json s = to_json(b);
    s["eps"] = eps;
    json stab = json::array();
    for (const auto& c : census.cycles) stab.push_back(to_string(c.stability));
    s["cycle_stability"] = stab;
    summary.push_back(s);
    out << "eps " << format_double(eps) << ": classified " << b.classified << " of "
        << b.considered << " grid points\n";
  }
  open_out(cfg, "basin.csv") << csv.str();
  note("basin.csv");
  if (cfg.wants("json")) {
    write_json(cfg, "basin.json", {{"model", p.model->label()}, {"basins", summary}});
    note("basin.json");
  }
  return kOk;
}

int cmd_knots(const ExperimentConfig& cfg, std::ostream& out) {
  const Prepared p = prepare(cfg);
  json curves = json::array();
  std::vector<ClosedCurve> cc;
  for (const auto& c : p.curves) {
    const SignedPair s{c.winding.k, c.winding.l};
    const SignedPair key = isotopy_key(s);
    curves.push_back({{"index", c.index},
                      {"winding", to_json(c.winding)},
                      {"isotopy_key", {{"k", key.k}, {"l", key.l}}},
                      {"class", to_json(homeo_class(s))}});
    cc.push_back(c.curve);
    out << "curve " << c.index << ": (" << c.winding.k << "," << c.winding.l
        << ") isotopic to (" << key.k << "," << key.l << ")\n";
  }
  const bool consistent = link_consistent(cc);
  out << "link consistent: " << (consistent ? "yes" : "no") << '\n';
  write_json(cfg, "knots.json",
             {{"model", p.model->label()}, {"curves", curves}, {"link_consistent", consistent}});
  note("knots.json");
  return kOk;
}

void write_metadata(const ExperimentConfig& cfg, const std::string& cmdline,
                    const std::string& started, int code) {
  auto f = open_out(cfg, "run_metadata.txt");
  f << "tool: sftorus " << kVersion << '\n'
    << "command: " << cmdline << '\n'
    << "started: " << started << '\n'
    << "finished: " << iso_now() << '\n'
    << "exit_code: " << code << '\n'
    << "files:";
  for (const auto& n : g_written) f << ' ' << n;
  f << '\n' << "config: " << to_json(cfg).dump() << '\n';
}

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument:
      return kConfigError;
    case ErrorCode::AssumptionViolated:
    case ErrorCode::Intersecting:
    case ErrorCode::OrderUndetermined:
      return kAssumptionFailure;
    default:
      return kDetectionFailure;
  }
}

}  // namespace

bool ExperimentConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void apply_json(ExperimentConfig& cfg, const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  static const std::vector<std::string> known{
      "model", "m",     "k",    "l",       "slow",    "phi",     "model_file", "eps",
      "grid",  "relaxed", "seed", "restarts", "out",   "format", "solver",     "workers"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw Error(ErrorCode::InvalidArgument, "unknown config key: " + key);
  if (doc.contains("model")) cfg.model = doc["model"].get<std::string>();
  if (doc.contains("m")) cfg.m = doc["m"].get<int>();
  if (doc.contains("k")) cfg.k = doc["k"].get<int>();
  if (doc.contains("l")) cfg.l = doc["l"].get<int>();
  if (doc.contains("slow")) cfg.slow = doc["slow"].get<std::string>();
  if (doc.contains("phi")) cfg.phi = doc["phi"].get<std::string>();
  if (doc.contains("model_file")) cfg.model_file = doc["model_file"].get<std::string>();
  if (doc.contains("eps")) cfg.eps = eps_from_json(doc["eps"]);
  if (doc.contains("grid")) cfg.grid = doc["grid"].get<int>();
  if (doc.contains("relaxed")) cfg.relaxed = doc["relaxed"].get<bool>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("restarts")) cfg.restarts = doc["restarts"].get<int>();
  if (doc.contains("out")) cfg.out = doc["out"].get<std::string>();
  if (doc.contains("format")) cfg.formats = formats_from_json(doc["format"]);
  if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    if (s.contains("rel_tol")) cfg.solver.rel_tol = s["rel_tol"].get<double>();
    if (s.contains("abs_tol")) cfg.solver.abs_tol = s["abs_tol"].get<double>();
    if (s.contains("max_step")) cfg.solver.max_step = s["max_step"].get<double>();
    if (s.contains("max_time")) cfg.solver.max_time = s["max_time"].get<double>();
  }
}

json to_json(const ExperimentConfig& cfg) {
  return {{"model", cfg.model},
          {"m", cfg.m},
          {"k", cfg.k},
          {"l", cfg.l},
          {"slow", cfg.slow},
          {"phi", cfg.phi},
          {"model_file", cfg.model_file},
          {"eps", cfg.eps},
          {"grid", cfg.grid},
          {"relaxed", cfg.relaxed},
          {"seed", cfg.seed},
          {"restarts", cfg.restarts},
          {"out", cfg.out},
          {"format", cfg.formats},
          {"solver",
           {{"rel_tol", cfg.solver.rel_tol},
            {"abs_tol", cfg.solver.abs_tol},
            {"max_step", cfg.solver.max_step},
            {"max_time", cfg.solver.max_time}}},
          {"workers", cfg.workers}};
}

void validate_config(const ExperimentConfig& cfg) {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
  if (cfg.eps.empty()) bad("eps list is empty");
  for (double e : cfg.eps)
    if (!(e > 0.0 && e <= 0.25)) bad("eps values must lie in (0, 0.25]");
  if (cfg.grid < 4) bad("grid must be at least 4");
  if (cfg.slow != "unit" && cfg.slow != "cosine") bad("slow must be unit or cosine");
  for (const auto& f : cfg.formats)
    if (f != "csv" && f != "json") bad("format must be csv or json");
  if (!(cfg.solver.rel_tol > 0.0 && cfg.solver.abs_tol > 0.0)) bad("tolerances must be positive");
  if (cfg.restarts < 0) bad("restarts must be non-negative");
}

Model build_model(const ExperimentConfig& cfg) {
  const SlowVariant slow = cfg.slow == "cosine" ? SlowVariant::Cosine : SlowVariant::Unit;
  if (cfg.model == "diagonal") return diagonal_model();
  if (cfg.model == "diagonal-cosine") return sine_link_model(1, 1, 1, SlowVariant::Cosine);
  if (cfg.model == "sine-link") return sine_link_model(cfg.m, cfg.k, cfg.l, slow);
  if (cfg.model == "odd-contact") return odd_contact_model();
  if (cfg.model == "graph") return graph_model(PhiSeries::parse(cfg.phi), slow);
  if (cfg.model == "trig") {
    if (cfg.model_file.empty())
      throw Error(ErrorCode::InvalidArgument, "model trig needs --model-file");
    std::ifstream f(cfg.model_file);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read " + cfg.model_file);
    const json doc = json::parse(f);
    return trig_model(trig_from_json(doc.at("f")), trig_from_json(doc.at("g")),
                      doc.value("label", std::string("trig")));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model: " + cfg.model);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Slow-fast vector fields on the torus: critical curves, slow divergence "
               "integrals, limit cycles and knot types"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file, model, slow, phi, model_file, outdir;
  int m = 0, k = 0, l = 0, grid = 0, workers = 0, restarts = 0;
  std::uint64_t seed = 0;
  std::vector<double> eps;
  std::vector<std::string> formats;
  bool relaxed = false;

  app.add_option("--config", config_file, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  auto* o_model = app.add_option("--model", model,
                                 "diagonal | diagonal-cosine | sine-link | odd-contact | graph | trig");
  auto* o_m = app.add_option("--m", m, "sine-link multiplicity m");
  auto* o_k = app.add_option("--k", k, "sine-link vertical winding k");
  auto* o_l = app.add_option("--l", l, "sine-link horizontal winding l");
  auto* o_slow = app.add_option("--slow", slow, "slow flow: unit | cosine");
  auto* o_phi = app.add_option("--phi", phi, "graph coefficients, e.g. \"q:1,s1:1\"");
  auto* o_file = app.add_option("--model-file", model_file, "trigonometric model JSON");
  auto* o_eps = app.add_option("--eps", eps, "comma-separated eps values")->delimiter(',');
  auto* o_grid = app.add_option("--grid", grid, "basin grid size N (N x N points)");
  auto* o_relaxed = app.add_flag("--relaxed", relaxed, "accept regular odd contact points");
  auto* o_seed = app.add_option("--seed", seed, "seed for restart offsets");
  auto* o_restarts = app.add_option("--restarts", restarts, "multi-seed restarts per cycle");
  auto* o_out = app.add_option("--out", outdir, "output directory");
  auto* o_format = app.add_option("--format", formats, "csv,json")->delimiter(',');
  auto* o_workers = app.add_option("--workers", workers, "worker threads (0: all cores)");

  for (const char* name : {"validate", "sdi", "cycles", "sweep", "basin", "knots"})
    app.add_subcommand(name)->fallthrough();

  ExperimentConfig cfg;
  std::string started = iso_now();
  std::string cmdline;
  for (int i = 0; i < argc; ++i) cmdline += (i ? " " : "") + std::string(argv[i]);
  g_written.clear();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (!config_file.empty()) {
      std::ifstream f(config_file);
      apply_json(cfg, json::parse(f));
    }
    if (*o_model) cfg.model = model;
    if (*o_m) cfg.m = m;
    if (*o_k) cfg.k = k;
    if (*o_l) cfg.l = l;
    if (*o_slow) cfg.slow = slow;
    if (*o_phi) cfg.phi = phi;
    if (*o_file) cfg.model_file = model_file;
    if (*o_eps) cfg.eps = eps;
    if (*o_grid) cfg.grid = grid;
    if (*o_relaxed) cfg.relaxed = relaxed;
    if (*o_seed) cfg.seed = seed;
    if (*o_restarts) cfg.restarts = restarts;
    if (*o_out) cfg.out = outdir;
    if (*o_format) cfg.formats = formats;
    if (*o_workers) cfg.workers = workers;
    cfg.command = app.get_subcommands().front()->get_name();
    validate_config(cfg);
    fs::create_directories(cfg.out);
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  int code = kOk;
  try {
    if (cfg.command == "validate") code = cmd_validate(cfg, out);
    else if (cfg.command == "sdi") code = cmd_sdi(cfg, out);
    else if (cfg.command == "cycles") code = cmd_cycles(cfg, out);
    else if (cfg.command == "sweep") code = cmd_sweep(cfg, out);
    else if (cfg.command == "basin") code = cmd_basin(cfg, out);
    else if (cfg.command == "knots") code = cmd_knots(cfg, out);
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    code = exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    code = kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kFailure;
  }
  try {
    write_metadata(cfg, cmdline, started, code);
  } catch (const std::exception& e) {
    err << "cannot write run metadata: " << e.what() << '\n';
  }
  return code;
}

}  // namespace sftorus::cli
