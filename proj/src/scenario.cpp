#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "nsledger/harness.hpp"
#include "nsledger/snapshot_io.hpp"

namespace nsledger {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ConfigError("key '" + key + "' expects a number, got '" + text + "'");
  return v;
}

long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("key '" + key + "' expects an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_double(key, item));
  return out;
}

std::size_t samples_in(const std::vector<double>& taus, double lo, double hi) {
  return static_cast<std::size_t>(std::count_if(taus.begin(), taus.end(), [&](double t) {
    return t >= lo - 1e-12 && t <= hi + 1e-12;
  }));
}

}  // namespace

double parse_length(const std::string& text) {
  std::string t = trim(text);
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    std::string head = trim(t.substr(0, t.size() - 2));
    if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
    const double factor = head.empty() ? 1.0 : parse_double("l_box", head);
    return factor * std::numbers::pi;
  }
  return parse_double("l_box", t);
}

void ScenarioConfig::validate() const {
  if (name.empty() || name.find('/') != std::string::npos)
    throw ConfigError("scenario name must be a nonempty file stem");
  trajectory.validate();
  if (trajectory.normalize && !(field.l2_norm_target > 0.0))
    throw ConfigError("delta must be positive");
  if (!(check_options.tolerance_scale > 0.0)) throw ConfigError("tolerance_scale must be positive");
  if (check_options.fd_order < 2 || check_options.fd_order % 2 != 0)
    throw ConfigError("fd_order must be even and >= 2");
  if (check_options.alpha != trajectory.alpha) throw ConfigError("inconsistent alpha");
  const auto& known = known_checks();
  for (const auto& c : checks)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ConfigError("unknown check: " + c);
  const auto& taus = trajectory.sample_taus;
  if (taus.size() < 5) throw ConfigError("checks need at least 5 sample taus");
  const std::vector<std::string> all = checks.empty() ? known : checks;
  const bool fits = std::any_of(all.begin(), all.end(),
                                [](const std::string& c) { return c == "prop3.2-decay" || c == "lemma4.3"; });
  if (fits && samples_in(taus, check_options.decay_tau_min, check_options.decay_tau_max) < 2)
    throw ConfigError("decay window holds fewer than two sample taus");
  if (field.family == FieldFamily::random_solenoidal && field.spectrum_slope < 0.0)
    throw ConfigError("spectrum_slope must be nonnegative");
}

ScenarioConfig parse_scenario(std::istream& is) {
  ScenarioConfig cfg;
  std::set<std::string> seen;
  std::string line, schema;
  double tau_min = 0.0, tau_max = 4.0, dtau = 0.02;
  bool have_taus = false, have_range = false, snapshot_family = false;
  double l_box = 16.0 * std::numbers::pi;
  int n = 64;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError("duplicate key: " + key);

    if (key == "schema") schema = val;
    else if (key == "name") cfg.name = val;
    else if (key == "n") n = static_cast<int>(parse_int(key, val));
    else if (key == "l_box") l_box = parse_length(val);
    else if (key == "family") {
      snapshot_family = val == "snapshot";
      if (!snapshot_family) cfg.field.family = parse_family(val);
    } else if (key == "snapshot") cfg.snapshot_path = val;
    else if (key == "seed") {
      const long s = parse_int(key, val);
      if (s < 0) throw ConfigError("seed must be nonnegative");
      cfg.field.seed = static_cast<std::uint64_t>(s);
    } else if (key == "spectrum_slope") cfg.field.spectrum_slope = parse_double(key, val);
    else if (key == "xi_max") cfg.field.xi_max = parse_double(key, val);
    else if (key == "mode") cfg.field.mode = static_cast<int>(parse_int(key, val));
    else if (key == "abc") {
      const auto v = parse_doubles(key, val);
      if (v.size() != 3) throw ConfigError("abc expects three numbers");
      cfg.field.abc_a = v[0];
      cfg.field.abc_b = v[1];
      cfg.field.abc_c = v[2];
    } else if (key == "delta") cfg.trajectory.delta = parse_double(key, val);
    else if (key == "alpha") cfg.trajectory.alpha = parse_double(key, val);
    else if (key == "horizon") cfg.trajectory.t_horizon = parse_double(key, val);
    else if (key == "dt_max") cfg.trajectory.dt_max = parse_double(key, val);
    else if (key == "cfl") cfg.trajectory.cfl = parse_double(key, val);
    else if (key == "taus") {
      cfg.trajectory.sample_taus = parse_doubles(key, val);
      have_taus = true;
    } else if (key == "tau_min") { tau_min = parse_double(key, val); have_range = true; }
    else if (key == "tau_max") { tau_max = parse_double(key, val); have_range = true; }
    else if (key == "dtau") { dtau = parse_double(key, val); have_range = true; }
    else if (key == "nonlinear") cfg.trajectory.nonlinear = parse_bool(key, val);
    else if (key == "normalize") cfg.trajectory.normalize = parse_bool(key, val);
    else if (key == "resolution") {
      if (val == "error") cfg.trajectory.resolution = ResolutionPolicy::error;
      else if (val == "warn") cfg.trajectory.resolution = ResolutionPolicy::warn;
      else throw ConfigError("resolution expects error or warn");
    } else if (key == "tail_threshold") cfg.trajectory.tail_threshold = parse_double(key, val);
    else if (key == "checks") {
      if (val != "all") cfg.checks = split_list(val);
    } else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "tolerance_scale") cfg.check_options.tolerance_scale = parse_double(key, val);
    else if (key == "fd_order") cfg.check_options.fd_order = static_cast<int>(parse_int(key, val));
    else if (key == "decay_window") {
      const auto v = parse_doubles(key, val);
      if (v.size() != 2 || !(v[1] > v[0])) throw ConfigError("decay_window expects lo, hi");
      cfg.check_options.decay_tau_min = v[0];
      cfg.check_options.decay_tau_max = v[1];
    } else if (key == "lemma43_margin") cfg.check_options.lemma43_margin = parse_double(key, val);
    else throw ConfigError("unknown key: " + key);
  }
  if (schema.empty()) throw ConfigError("missing schema line");
  if (schema != kScenarioSchema) throw ConfigError("unsupported schema: " + schema);
  if (have_taus && have_range) throw ConfigError("give either taus or tau_min/tau_max/dtau");
  if (snapshot_family && cfg.snapshot_path.empty())
    throw ConfigError("family = snapshot requires a snapshot path");
  if (!snapshot_family && !cfg.snapshot_path.empty())
    throw ConfigError("snapshot path given without family = snapshot");
  if (!have_taus) cfg.trajectory.sample_taus = uniform_taus(tau_min, tau_max, dtau);
  cfg.trajectory.n = n;
  cfg.trajectory.l_box = l_box;
  cfg.field.l2_norm_target = cfg.trajectory.delta;
  cfg.check_options.alpha = cfg.trajectory.alpha;
  cfg.check_options.delta = cfg.trajectory.delta;
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config: " + path);
  return parse_scenario(is);
}

namespace {

void write_summary(std::ostream& os, const ScenarioConfig& cfg, const std::vector<CheckSummary>& checks) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "scenario %s  n=%d  l_box=%.17g  delta=%.17g  alpha=%.17g\n",
                cfg.name.c_str(), cfg.trajectory.n, cfg.trajectory.box(), cfg.trajectory.delta,
                cfg.trajectory.alpha);
  os << buf;
  std::snprintf(buf, sizeof buf, "%-18s %8s %24s %24s %24s  %s\n", "check", "samples",
                "max_residual", "tolerance", "constant", "verdict");
  os << buf;
  for (const auto& c : checks) {
    char cst[32] = "-";
    if (c.empirical_constant) std::snprintf(cst, sizeof cst, "%.17g", *c.empirical_constant);
    std::snprintf(buf, sizeof buf, "%-18s %8zu %24.17g %24.17g %24s  %s\n", c.name.c_str(),
                  c.samples, c.max_residual, c.tolerance, cst, c.pass ? "PASS" : "FAIL");
    os << buf;
  }
}

}  // namespace

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, std::ostream& log) {
  ScenarioOutcome out;
  try {
    cfg.validate();
    GridPtr grid;
    SpectralVectorField u0(Grid::build(8, 1.0));
    if (!cfg.snapshot_path.empty()) {
      const SnapshotFile f = read_snapshot(cfg.snapshot_path);
      if (f.field.grid->n() != cfg.trajectory.n ||
          std::abs(f.field.grid->l_box() - cfg.trajectory.box()) > 1e-12 * cfg.trajectory.box())
        throw ConfigError("snapshot grid does not match the configured grid");
      u0 = transform_forward(f.field);
    } else {
      grid = Grid::build(cfg.trajectory.n, cfg.trajectory.box());
      FieldSpec spec = cfg.field;
      spec.l2_norm_target = cfg.trajectory.normalize ? cfg.trajectory.delta : 1.0;
      u0 = generate(spec, grid);
    }

    std::vector<EnergyRecord> recs;
    RecordBuilder build(cfg.trajectory);
    const Trajectory traj =
        simulate(u0, cfg.trajectory, [&](const Snapshot& s) { recs.push_back(build(s)); });
    out.records = recs;

    const std::vector<std::string> names = cfg.checks.empty() ? known_checks() : cfg.checks;
    for (const auto& name : names) out.checks.push_back(summarize(check_inequality(name, recs, cfg.check_options)));

    std::filesystem::create_directories(cfg.out_dir);
    const std::filesystem::path base = std::filesystem::path(cfg.out_dir) / cfg.name;
    {
      std::ofstream csv(base.string() + "_energy.csv");
      write_records_csv(csv, recs);
    }
    {
      std::ofstream js(base.string() + "_report.json");
      js << report_json(cfg.name, out.checks) << "\n";
    }
    {
      std::ofstream txt(base.string() + "_summary.txt");
      write_summary(txt, cfg, out.checks);
    }
    write_summary(log, cfg, out.checks);

    if (!traj.resolution_ok) {
      out.exit_code = kExitResolutionError;
      out.message = "spectral tail exceeded the resolution threshold";
    } else {
      const bool ok = std::all_of(out.checks.begin(), out.checks.end(),
                                  [](const CheckSummary& c) { return c.pass; });
      out.exit_code = ok ? kExitPass : kExitCheckFailure;
      out.message = ok ? "all checks passed" : "one or more checks failed";
    }
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfigError;
    out.message = std::string("configuration error: ") + e.what();
  } catch (const DomainError& e) {
    out.exit_code = kExitConfigError;
    out.message = std::string("configuration error: ") + e.what();
  } catch (const GridMismatch& e) {
    out.exit_code = kExitConfigError;
    out.message = std::string("configuration error: ") + e.what();
  } catch (const ResolutionError& e) {
    out.exit_code = kExitResolutionError;
    out.message = std::string("resolution error: ") + e.what();
  } catch (const std::runtime_error& e) {
    // Step-size or numerical breakdown mid-run: the checks cannot be certified.
    out.exit_code = kExitCheckFailure;
    out.message = std::string("run failed: ") + e.what();
  }
  log << out.message << "\n";
  return out;
}

}  // namespace nsledger
