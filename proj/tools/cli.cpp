#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "relstring/acceptance.hpp"
#include "relstring/convexity2d.hpp"
#include "relstring/dalembert.hpp"
#include "relstring/diagnostics.hpp"
#include "relstring/errors.hpp"
#include "relstring/gauge.hpp"
#include "relstring/scenarios.hpp"
#include "relstring/tolerances.hpp"
#include "relstring/wiggly.hpp"

#ifndef RELSTRING_VERSION
#define RELSTRING_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace relstring::cli {

namespace {

// Configuration problems detected after parsing.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scenario construction problems (unknown names, bad parameters, bad input).
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string scenario;
  std::vector<std::string> params;
  std::string input;
  int grid = 512;
  double t0 = 0.0;
  double t1 = 1.0;
  int frames = 10;
  std::string out = "out";
  std::string format = "csv";
  std::vector<std::string> tolerances;
};

std::pair<std::string, double> parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected name=value, got '" + text + "'");
  const std::string value = text.substr(eq + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("'" + value + "' is not a number");
  return {text.substr(0, eq), v};
}

void apply_tolerances(const std::vector<std::string>& overrides) {
  ToleranceConfig cfg = tolerances();
  for (const std::string& o : overrides) {
    const auto [name, value] = parse_assignment(o);
    if (!cfg.set(name, value)) throw ConfigError("unknown tolerance '" + name + "'");
  }
  set_tolerances(cfg);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    cells.push_back(cell);
  }
  return cells;
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open input file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ScenarioError("input file '" + path + "' is empty");
  header = split_csv_line(line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ScenarioError("ragged row in '" + path + "'");
    std::vector<double> row;
    for (const std::string& c : cells) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) throw ScenarioError("non-numeric cell '" + c + "'");
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Sampled-curve file: header s, x1..xn[, v1..vn] on a uniform s grid.
DAlembertPair load_sampled_pair(const std::string& path, int N) {
  std::vector<std::string> header;
  const auto rows = read_numeric_csv(path, header);
  if (header.empty() || header[0] != "s") throw ScenarioError("first column of '" + path + "' must be 's'");
  int nx = 0, nv = 0;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c] == "x" + std::to_string(nx + 1) && nv == 0) ++nx;
    else if (header[c] == "v" + std::to_string(nv + 1)) ++nv;
    else throw ScenarioError("unexpected column '" + header[c] + "'");
  }
  if (nx < 2 || (nv != 0 && nv != nx)) throw ScenarioError("need x1..xn (n >= 2) and optionally v1..vn");
  if (rows.size() < 2) throw ScenarioError("too few rows in '" + path + "'");
  const auto M = static_cast<Eigen::Index>(rows.size());
  const double spacing = rows[1][0] - rows[0][0];
  const double period = rows.back()[0] - rows.front()[0] + spacing;
  for (Eigen::Index j = 1; j < M; ++j)
    if (std::abs(rows[j][0] - rows[j - 1][0] - spacing) > 1e-9 * period) throw ScenarioError("s grid is not uniform");
  Points x(nx, M);
  Points v = Points::Zero(nx, M);
  for (Eigen::Index j = 0; j < M; ++j)
    for (int c = 0; c < nx; ++c) {
      x(c, j) = rows[j][1 + c];
      if (nv) v(c, j) = rows[j][1 + nx + c];
    }
  const PeriodicLoop curve = PeriodicLoop::sampled(x, period);
  const VelocityField vel = nv ? VelocityField(PeriodicLoop::sampled(v, period)) : VelocityField::zero(period, nx);
  const ConformalData data = conformal_normalize(curve, vel, N);
  return decompose(data.curve, data.velocity, N);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

struct Frame {
  StringState state;
  DiagnosticsReport report;
};

std::string frame_csv(const StringState& st) {
  const int n = st.dimension();
  std::string text = "x";
  for (const char* prefix : {"gamma_", "gammat_", "gammax_"})
    for (int c = 1; c <= n; ++c) text += "," + std::string(prefix) + std::to_string(c);
  text += "\n";
  for (int j = 0; j < st.size(); ++j) {
    text += format_double(st.grid(j));
    for (const Points* m : {&st.gamma, &st.gamma_t, &st.gamma_x})
      for (int c = 0; c < n; ++c) text += "," + format_double((*m)(c, j));
    text += "\n";
  }
  return text;
}

json frame_json(const StringState& st) {
  auto rows = [&](const Points& m) {
    json arr = json::array();
    for (int j = 0; j < st.size(); ++j) arr.push_back(std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows()));
    return arr;
  };
  return json{{"t", st.t},
              {"x", std::vector<double>(st.grid.data(), st.grid.data() + st.grid.size())},
              {"gamma", rows(st.gamma)},
              {"gamma_t", rows(st.gamma_t)},
              {"gamma_x", rows(st.gamma_x)}};
}

// Evaluates frames concurrently; results land in time order.
std::vector<Frame> compute_frames(const DAlembertPair& pair, const std::vector<double>& times, int N) {
  std::vector<std::optional<Frame>> slots(times.size());
  std::vector<std::exception_ptr> errors(times.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < times.size(); k = next++) {
      try {
        slots[k] = Frame{evaluate_state(pair, times[k], N), diagnose(pair, times[k], N)};
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(thread_cap(), static_cast<unsigned>(times.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<Frame> frames;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    frames.push_back(std::move(*slots[k]));
  }
  return frames;
}

json tolerance_json() {
  json t = json::object();
  for (const auto& [k, v] : tolerances().as_map()) t[k] = v;
  return t;
}

int do_run(const RunConfig& cfg) {
  if (cfg.grid < 8) throw ConfigError("--grid must be at least 8");
  if (cfg.frames < 1) throw ConfigError("--frames must be at least 1");
  if (cfg.t0 > cfg.t1) throw ConfigError("--t0 must not exceed --t1");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format must be csv or json");
  if (cfg.scenario.empty() == cfg.input.empty()) throw ConfigError("give exactly one of --scenario or --input");
  apply_tolerances(cfg.tolerances);

  std::map<std::string, double> overrides;
  for (const std::string& p : cfg.params) overrides.insert(parse_assignment(p));

  std::optional<DAlembertPair> pair;
  json scenario_json;
  try {
    if (!cfg.scenario.empty()) {
      Scenario s = build_scenario(cfg.scenario, overrides);
      scenario_json = {{"name", s.spec.name}, {"parameters", s.spec.parameters}, {"expected", s.spec.expected}};
      pair = std::move(s.pair);
    } else {
      if (!overrides.empty()) throw ConfigError("--param applies to --scenario only");
      pair = load_sampled_pair(cfg.input, cfg.grid);
      scenario_json = {{"input", cfg.input}};
    }
  } catch (const StringError& e) {
    throw ScenarioError(e.what());
  }

  std::vector<double> times(static_cast<std::size_t>(cfg.frames));
  for (int k = 0; k < cfg.frames; ++k)
    times[k] = cfg.frames == 1 ? cfg.t0 : cfg.t0 + (cfg.t1 - cfg.t0) * k / (cfg.frames - 1);
  const std::vector<Frame> frames = compute_frames(*pair, times, cfg.grid);

  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "'");

  std::string diag;
  json diag_json = json::array();
  for (std::size_t c = 0; c < DiagnosticsReport::kColumns.size(); ++c)
    diag += (c ? "," : "") + std::string(DiagnosticsReport::kColumns[c]);
  diag += "\n";
  for (std::size_t k = 0; k < frames.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "frames_%04zu", k);
    if (cfg.format == "csv") write_file(dir / (std::string(name) + ".csv"), frame_csv(frames[k].state));
    else write_file(dir / (std::string(name) + ".json"), frame_json(frames[k].state).dump() + "\n");
    const auto values = frames[k].report.values();
    json row = json::object();
    for (std::size_t c = 0; c < values.size(); ++c) {
      diag += (c ? "," : "") + format_double(values[c]);
      row[std::string(DiagnosticsReport::kColumns[c])] = values[c];
    }
    diag += "\n";
    diag_json.push_back(row);
  }
  if (cfg.format == "csv") write_file(dir / "diagnostics.csv", diag);
  else write_file(dir / "diagnostics.json", diag_json.dump(1) + "\n");

  json manifest = {{"version", RELSTRING_VERSION},
                   {"command", "run"},
                   {"scenario", scenario_json},
                   {"grid", cfg.grid},
                   {"t0", cfg.t0},
                   {"t1", cfg.t1},
                   {"frames", cfg.frames},
                   {"format", cfg.format},
                   {"output", cfg.out},
                   {"period", pair->period()},
                   {"dimension", pair->dimension()},
                   {"tolerances", tolerance_json()}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return kOk;
}

// Piecewise-linear file: header length, c1..cn; one row per segment.
PiecewiseLinearLoop load_polygon(const std::string& path) {
  std::vector<std::string> header;
  const auto rows = read_numeric_csv(path, header);
  if (header.size() < 3 || header[0] != "length") throw ScenarioError("expected header length, c1..cn");
  const int n = static_cast<int>(header.size()) - 1;
  std::vector<double> bp{0.0};
  Points slopes(n, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bp.push_back(bp.back() + rows[i][0]);
    for (int c = 0; c < n; ++c) slopes(c, static_cast<Eigen::Index>(i)) = rows[i][1 + c];
  }
  return PiecewiseLinearLoop(std::move(bp), std::move(slopes), Vec::Zero(n));
}

struct WigglyConfig {
  std::string input;
  std::string input_b;
  std::string builtin;
  std::vector<int> ks{8, 16, 32};
  double ell = 0.0;
  double eta = 0.0;
  int grid = 512;
  std::string out = "wiggly_out";
};

int do_wiggly(const WigglyConfig& cfg) {
  if (cfg.grid < 8) throw ConfigError("--grid must be at least 8");
  if (cfg.input.empty() == cfg.builtin.empty()) throw ConfigError("give exactly one of --input or --builtin");
  std::optional<PiecewiseLinearLoop> a, b;
  try {
    if (!cfg.builtin.empty()) {
      if (cfg.builtin == "flat") a = flat_loop();
      else if (cfg.builtin == "square") a = square_loop(1.0);
      else throw ScenarioError("unknown builtin polygon '" + cfg.builtin + "' (flat, square)");
    } else {
      a = load_polygon(cfg.input);
    }
    b = cfg.input_b.empty() ? *a : load_polygon(cfg.input_b);
  } catch (const StringError& e) {
    throw ScenarioError(e.what());
  }
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "'");

  const double E = a->period();
  const int n = a->dimension();
  const double min_seg = std::min(a->min_segment(), b->min_segment());
  const DAlembertPair exact(a->loop(), b->loop(), ConstraintMode::SubUnit);
  std::string table = "k,ell,eta,zigzag_sup,smoothed_sup,evolution_sup,bound\n";
  for (int k : cfg.ks) {
    const double ell = cfg.ell > 0.0 ? cfg.ell : 0.9 * min_seg / (3.0 * k);
    const double eta = cfg.eta > 0.0 ? cfg.eta : ell / 4.0;
    const SmoothingParams params{k, ell, eta};
    const PiecewiseLinearLoop za = zigzag(*a, k);
    const DAlembertPair pair = approximate_string(*a, *b, params);
    double zig = 0.0, smooth = 0.0;
    std::string samples = "s";
    for (const char* prefix : {"a_", "b_"})
      for (int c = 1; c <= n; ++c) samples += "," + std::string(prefix) + std::to_string(c);
    samples += "\n";
    for (int j = 0; j < cfg.grid; ++j) {
      const double s = E * j / cfg.grid;
      const Vec ak = pair.a()(s);
      const Vec bk = pair.b()(s);
      zig = std::max(zig, (za(s) - (*a)(s)).norm());
      smooth = std::max(smooth, (ak - (*a)(s)).norm());
      samples += format_double(s);
      for (int c = 0; c < n; ++c) samples += "," + format_double(ak(c));
      for (int c = 0; c < n; ++c) samples += "," + format_double(bk(c));
      samples += "\n";
    }
    double evo = 0.0;
    for (int q = 0; q < 32; ++q) {
      const double t = E * q / 32.0;
      const StringState s1 = evaluate_state(pair, t, cfg.grid);
      const StringState s2 = evaluate_state(exact, t, cfg.grid);
      evo = std::max(evo, (s1.gamma - s2.gamma).colwise().norm().maxCoeff());
    }
    write_file(dir / ("pair_k" + std::to_string(k) + ".csv"), samples);
    table += std::to_string(k) + "," + format_double(ell) + "," + format_double(eta) + "," + format_double(zig) + "," +
             format_double(smooth) + "," + format_double(evo) + "," + format_double(E / k + 2.0 * eta) + "\n";
  }
  write_file(dir / "convergence.csv", table);
  std::cout << table;
  return kOk;
}

struct ProfileConfig {
  std::string scenario;
  std::vector<std::string> params;
  std::vector<double> deltas{0.04, 0.02, 0.01};
  std::optional<double> t_bar;
  int grid = 1024;
  std::string out;
};

int do_profile(const ProfileConfig& cfg) {
  if (cfg.grid < 8) throw ConfigError("--grid must be at least 8");
  if (cfg.scenario.empty()) throw ConfigError("--scenario is required");
  std::map<std::string, double> overrides;
  for (const std::string& p : cfg.params) overrides.insert(parse_assignment(p));
  std::optional<Scenario> s;
  try {
    s = build_scenario(cfg.scenario, overrides);
  } catch (const StringError& e) {
    throw ScenarioError(e.what());
  }
  const auto& exp = s->spec.expected;
  double t_bar = 0.0;
  if (cfg.t_bar) t_bar = *cfg.t_bar;
  else if (exp.count("collapse_time")) t_bar = exp.at("collapse_time");
  else throw ConfigError("scenario has no known collapse time; pass --tbar");
  const double E = s->pair.period();
  const CollapseCheck check = detect_collapse(s->pair, t_bar, cfg.grid);
  if (!check.point) throw StringError(ErrorCode::NoCollapseAtTbar, "no collapse at t_bar");
  std::vector<double> times;
  for (double d : cfg.deltas) times.push_back(t_bar - d * E);
  const auto rows = collapse_profile(s->pair, t_bar, *check.point, times, cfg.grid);
  std::string table = "t,delta,max_ratio,min_ratio,spread\n";
  for (const auto& r : rows)
    table += format_double(r.t) + "," + format_double(r.delta) + "," + format_double(r.max_ratio) + "," +
             format_double(r.min_ratio) + "," + format_double(r.spread()) + "\n";
  if (!cfg.out.empty()) {
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "'");
    write_file(dir / "profile.csv", table);
  }
  std::cout << table;
  return kOk;
}

int do_list() {
  for (const ScenarioSpec& s : scenario_registry()) {
    std::cout << s.name << " (n=" << s.dimension << "): " << s.summary;
    if (!s.parameters.empty()) {
      std::cout << " [";
      bool first = true;
      for (const auto& [k, v] : s.parameters) {
        std::cout << (first ? "" : ", ") << k << "=" << format_double(v);
        first = false;
      }
      std::cout << "]";
    }
    std::cout << "\n";
  }
  return kOk;
}

int do_verify() {
  const auto results = run_acceptance(&std::cout);
  const auto failed = std::count_if(results.begin(), results.end(), [](const CriterionResult& r) { return !r.passed; });
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed ? kVerifyFailed : kOk;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

unsigned thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RELSTRING_THREADS")) {
    int v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && v >= 1) cap = static_cast<unsigned>(v);
  }
  return cap;
}

int main(const std::vector<std::string>& args) {
  CLI::App app{"Closed relativistic string laboratory"};
  app.require_subcommand(1);

  RunConfig run;
  auto* run_cmd = app.add_subcommand("run", "evolve a scenario or sampled curve and write frames");
  run_cmd->add_option("--scenario", run.scenario, "registered scenario name");
  run_cmd->add_option("--param", run.params, "scenario parameter name=value (repeatable)");
  run_cmd->add_option("--input", run.input, "sampled-curve CSV (s, x1..xn[, v1..vn])");
  run_cmd->add_option("--grid", run.grid, "nodes per slice")->capture_default_str();
  run_cmd->add_option("--t0", run.t0, "first frame time")->capture_default_str();
  run_cmd->add_option("--t1", run.t1, "last frame time")->capture_default_str();
  run_cmd->add_option("--frames", run.frames, "number of frames")->capture_default_str();
  run_cmd->add_option("--out", run.out, "output directory")->capture_default_str();
  run_cmd->add_option("--format", run.format, "csv or json")->capture_default_str();
  run_cmd->add_option("--tol", run.tolerances, "tolerance override name=value (repeatable)");

  WigglyConfig wig;
  auto* wig_cmd = app.add_subcommand("wiggly", "zig-zag and smooth a sub-unit polygon; write convergence table");
  wig_cmd->add_option("--input", wig.input, "polygon CSV (length, c1..cn per segment)");
  wig_cmd->add_option("--input-b", wig.input_b, "second polygon for b (defaults to a)");
  wig_cmd->add_option("--builtin", wig.builtin, "built-in polygon: flat or square");
  wig_cmd->add_option("--k", wig.ks, "zig-zag densities")->delimiter(',')->capture_default_str();
  wig_cmd->add_option("--ell", wig.ell, "corner window width (default 0.9 * shortest segment / 3k)");
  wig_cmd->add_option("--eta", wig.eta, "sup-norm budget (default ell / 4)");
  wig_cmd->add_option("--grid", wig.grid, "sample nodes")->capture_default_str();
  wig_cmd->add_option("--out", wig.out, "output directory")->capture_default_str();

  ProfileConfig prof;
  double t_bar = 0.0;
  auto* prof_cmd = app.add_subcommand("profile", "collapse-profile ratios near a collapse");
  prof_cmd->add_option("--scenario", prof.scenario, "registered scenario name");
  prof_cmd->add_option("--param", prof.params, "scenario parameter name=value (repeatable)");
  auto* tbar_opt = prof_cmd->add_option("--tbar", t_bar, "collapse time (default: scenario's)");
  prof_cmd->add_option("--deltas", prof.deltas, "distances to t_bar as fractions of E")->delimiter(',');
  prof_cmd->add_option("--grid", prof.grid, "nodes per slice")->capture_default_str();
  prof_cmd->add_option("--out", prof.out, "directory for profile.csv");

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  auto* list_cmd = app.add_subcommand("list-scenarios", "list registered scenarios");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kConfigError;
  }

  try {
    if (run_cmd->parsed()) return do_run(run);
    if (wig_cmd->parsed()) return do_wiggly(wig);
    if (prof_cmd->parsed()) {
      if (tbar_opt->count()) prof.t_bar = t_bar;
      return do_profile(prof);
    }
    if (verify_cmd->parsed()) return do_verify();
    if (list_cmd->parsed()) return do_list();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n" << app.help();
    return kConfigError;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return kScenarioError;
  } catch (const StringError& e) {
    std::cerr << e.what() << "\n";
    return kNumericalError;
  }
  return kConfigError;
}

}  // namespace relstring::cli
