#include "mcf/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mcf/asymptotics.hpp"
#include "mcf/csv.hpp"
#include "mcf/errors.hpp"
#include "mcf/soliton.hpp"
#include "mcf/verification.hpp"

namespace mcf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const MismatchError& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const json::exception& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    log << "config error: " << e.what() << '\n';
  } catch (const SolverError& e) {
    log << "solver abort: " << e.what() << '\n';
    return exit_code::solver;
  }
  return exit_code::config;
}

json base_manifest(const std::string& command) {
  return {{"command", command}, {"version", MCF_VERSION}, {"files", json::array()}};
}

void finish_manifest(const fs::path& dir, json& manifest, Clock::time_point start, int code) {
  manifest["duration_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  manifest["exit_code"] = code;
  write_manifest(dir, manifest);
}

void add_file(json& manifest, const std::string& rel) { manifest["files"].push_back(rel); }

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

CsvTable series_table(const TimeSeries& s, const std::string& name) {
  CsvTable t{{"t", name}, {{}, {}}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    t.columns[0].push_back(s.t(i));
    t.columns[1].push_back(s.value(i));
  }
  return t;
}

TimeSeries table_series(const CsvTable& t) {
  TimeSeries s;
  for (std::size_t i = 0; i < t.rows(); ++i) s.push(t.columns[0][i], t.columns[1][i]);
  return s;
}

std::string snapshot_file(Form form, double t) {
  return std::string("snapshots/") + to_string(form) + "_t" + format_time(t) + ".csv";
}

json check_entry(CheckStatus status) { return to_string(status); }

// ---------------------------------------------------------------------------
// verify checks; each returns (status, report)

std::pair<CheckStatus, json> check_barriers(const RunConfig& cfg) {
  const auto& b = cfg.verify.barriers;
  const int dim = cfg.solver.dim;
  const auto grid = build_grid(cfg.solver.n_nodes);
  auto times_up_to = [&](double t_max) {
    std::vector<double> ts(b.times);
    for (std::size_t j = 0; j < b.times; ++j) ts[j] = t_max * j / static_cast<double>(b.times - 1);
    return ts;
  };
  const BarrierSpec specs[] = {{BarrierSpec::Kind::SubU, b.m0, dim},
                               {BarrierSpec::Kind::SuperU, b.M0, dim},
                               {BarrierSpec::Kind::SubW, b.m_minus, dim},
                               {BarrierSpec::Kind::SuperW, b.m_plus, dim}};
  json reports = json::array();
  bool ok = true;
  for (const auto& spec : specs) {
    double t_max = b.t_max;
    if (spec.kind == BarrierSpec::Kind::SuperW) t_max = std::min(t_max, spec.t_plus());
    const auto rep = barrier_residual(spec, *grid, times_up_to(t_max), cfg.solver.exec);
    ok = ok && rep.certified;
    reports.push_back({{"kind", to_string(spec.kind)},
                       {"param", spec.param},
                       {"samples", rep.samples},
                       {"t_max", t_max},
                       {"min_residual", rep.min_residual},
                       {"max_residual", rep.max_residual},
                       {"min_boundary_defect", rep.min_boundary_defect},
                       {"max_boundary_defect", rep.max_boundary_defect},
                       {"worst_signed_violation", rep.worst_signed_violation},
                       {"certified", rep.certified}});
  }
  bool rejected = true;
  const BarrierSpec super_w = specs[3];
  if (std::isfinite(super_w.t_plus())) {
    rejected = false;
    try {
      barrier_residual(super_w, *grid, {super_w.t_plus() * 1.5 + 1e-3});
    } catch (const DomainError&) {
      rejected = true;
    }
  }
  ok = ok && rejected;
  return {ok ? CheckStatus::Pass : CheckStatus::Fail,
          {{"barriers", reports}, {"super_w_rejected_past_t_plus", rejected}}};
}

std::pair<CheckStatus, json> check_comparison(const RunConfig& cfg) {
  SolverConfig sc = cfg.solver;
  sc.t_end = cfg.verify.comparison_t_end;
  std::erase_if(sc.snapshot_times, [&](double t) { return t > sc.t_end; });
  const auto pairs = random_ordered_pairs(cfg.verify.comparison_pairs, cfg.verify.seed);
  const auto reps = comparison_sweep(pairs, sc, 1e-10, cfg.solver.exec);
  bool ok = true;
  double worst = -HUGE_VAL;
  json list = json::array();
  for (const auto& r : reps) {
    ok = ok && r.passed;
    worst = std::max(worst, r.worst_gap);
    list.push_back({{"passed", r.passed}, {"worst_gap", r.worst_gap}, {"snapshots", r.snapshots}});
  }
  return {ok ? CheckStatus::Pass : CheckStatus::Fail,
          {{"pairs", list}, {"worst_gap", worst}, {"t_end", sc.t_end}, {"tolerance", 1e-10}}};
}

std::pair<CheckStatus, json> check_sandwich(const RunConfig& cfg) {
  const auto grid = build_grid(cfg.solver.n_nodes);
  const auto& kind = cfg.verify.sandwich_w0;
  const auto w0 = ScalarField::sample(grid, [&](double r) {
    if (kind == "r") return r;
    if (kind == "r2") return r * r;
    return r >= 1.0 ? 1.0 : 0.0;
  });
  const auto rep = sandwich_test(w0, cfg.solver);
  return {rep.passed() ? CheckStatus::Pass : CheckStatus::Fail,
          {{"w0", kind},
           {"ordered", rep.ordered},
           {"monotone", rep.monotone},
           {"converged", rep.converged},
           {"worst_order_violation", rep.worst_order_violation},
           {"worst_monotone_violation", rep.worst_monotone_violation},
           {"final_distance_lower", rep.final_distance_lower},
           {"final_distance_middle", rep.final_distance_middle},
           {"final_distance_upper", rep.final_distance_upper},
           {"consistency", rep.consistency},
           {"final_t", rep.final_t}}};
}

std::pair<CheckStatus, json> check_intersections(const RunConfig& cfg, const Trajectory& traj) {
  const auto pairs = random_translator_pairs(cfg.verify.intersection_pairs, cfg.verify.seed);
  bool ok = true;
  json list = json::array();
  for (const auto& [k, shift] : pairs) {
    const auto tr = make_translator(k, cfg.solver.dim);
    const auto hist = intersection_history(traj, tr, shift);
    std::vector<std::size_t> counts;
    std::vector<int> signs;
    for (const auto& h : hist) {
      counts.push_back(h.count);
      signs.push_back(h.boundary_sign);
    }
    const bool mono = nonincreasing(hist);
    ok = ok && mono;
    list.push_back({{"k", k},
                    {"c", tr.c},
                    {"shift", shift},
                    {"counts", counts},
                    {"boundary_signs", signs},
                    {"nonincreasing", mono},
                    {"nonincreasing_away_from_boundary", nonincreasing_away_from_boundary(hist)}});
  }
  std::vector<double> times;
  for (const auto& s : traj.snapshots) times.push_back(s.t());
  return {ok ? CheckStatus::Pass : CheckStatus::Fail, {{"times", times}, {"pairs", list}}};
}

std::pair<CheckStatus, json> check_domination(const RunConfig& cfg, const Trajectory& traj) {
  const auto tr = make_translator(cfg.verify.domination_k, cfg.solver.dim);
  const auto rep = gradient_domination(traj, tr, cfg.verify.domination_r_min);
  return {rep.status,
          {{"k", tr.k},
           {"c", tr.c},
           {"r_min", cfg.verify.domination_r_min},
           {"t_final", rep.t_final},
           {"min_margin", rep.min_margin}}};
}

}  // namespace

fs::path default_output_dir(const std::string& command) {
  const char* root = std::getenv("MCF_OUTPUT_DIR");
  return (root && *root ? fs::path(root) : fs::path("mcf_out")) / command;
}

void write_manifest(const fs::path& dir, const json& manifest) {
  for (const auto& f : manifest.at("files")) {
    const fs::path p = dir / f.get<std::string>();
    if (!fs::exists(p)) throw ConfigError("manifest lists missing file " + p.string());
  }
  fs::create_directories(dir);
  write_json(dir / "manifest.json", manifest);
}

Trajectory load_trajectory(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw ConfigError("no manifest.json in " + dir.string());
  const json manifest = json::parse(in);
  if (manifest.value("command", "") != "solve") {
    throw ConfigError(dir.string() + " does not hold a solve run");
  }
  Trajectory traj;
  traj.config = parse_config(manifest.at("config").dump()).solver;
  const auto grid = build_grid(traj.config.n_nodes);
  for (const auto& entry : manifest.at("snapshots")) {
    const auto table = read_csv(dir / entry.at("file").get<std::string>());
    const auto& r = table.column("r");
    if (r.size() != grid->size()) throw ConfigError("snapshot size does not match n_nodes");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] != grid->r(i)) throw ConfigError("snapshot r column does not match the grid");
    }
    const auto& vals = table.column(to_string(traj.config.form));
    traj.snapshots.emplace_back(ScalarField(grid, vals), entry.at("t").get<double>(),
                                traj.config.form, traj.config.dim);
  }
  if (traj.snapshots.empty()) throw ConfigError("trajectory has no snapshots");
  traj.center_series = table_series(read_csv(dir / "center.csv"));
  traj.boundary_series = table_series(read_csv(dir / "boundary.csv"));
  traj.dt_series = table_series(read_csv(dir / "dt.csv"));
  traj.accepted_steps = manifest.value("accepted_steps", std::size_t{0});
  traj.rejected_steps = manifest.value("rejected_steps", std::size_t{0});
  return traj;
}

int cmd_solve(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    const auto start = Clock::now();
    const auto traj = run(config.solver);
    fs::create_directories(out_dir / "snapshots");
    json manifest = base_manifest("solve");
    manifest["config"] = to_json(config);
    json snaps = json::array();
    const auto name = to_string(config.solver.form);
    for (const auto& s : traj.snapshots) {
      const auto file = snapshot_file(s.form(), s.t());
      CsvTable t{{"r", name}, {{}, {s.field().values().begin(), s.field().values().end()}}};
      for (std::size_t i = 0; i < s.grid().size(); ++i) t.columns[0].push_back(s.grid().r(i));
      write_csv(out_dir / file, t);
      add_file(manifest, file);
      snaps.push_back({{"t", s.t()}, {"file", file}});
    }
    write_csv(out_dir / "center.csv", series_table(traj.center_series, "ln_u0"));
    write_csv(out_dir / "boundary.csv", series_table(traj.boundary_series, "ln_u1"));
    write_csv(out_dir / "dt.csv", series_table(traj.dt_series, "dt"));
    for (const char* f : {"center.csv", "boundary.csv", "dt.csv"}) add_file(manifest, f);
    manifest["snapshots"] = snaps;
    manifest["accepted_steps"] = traj.accepted_steps;
    manifest["rejected_steps"] = traj.rejected_steps;
    manifest["corridor_violations"] = traj.corridor_violations.size();
    manifest["checks"] = {{"corridor", traj.corridor_violations.empty() ? "PASS" : "WARN"}};
    finish_manifest(out_dir, manifest, start, exit_code::ok);
    log << "solve: " << traj.snapshots.size() << " snapshots, " << traj.accepted_steps
        << " steps, t = " << traj.final_state().t() << " -> " << out_dir.string() << '\n';
    if (!traj.corridor_violations.empty()) {
      log << "warning: " << traj.corridor_violations.size() << " corridor violations\n";
    }
    return exit_code::ok;
  });
}

int cmd_solve(const fs::path& config_file, const fs::path& out_dir, std::ostream& log) {
  RunConfig cfg;
  const int rc = guarded(log, [&] {
    cfg = load_config(config_file);
    return exit_code::ok;
  });
  return rc != exit_code::ok ? rc : cmd_solve(cfg, out_dir, log);
}

int cmd_soliton(const SolitonOptions& opt, const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const auto start = Clock::now();
    if (opt.c.has_value() == opt.k.has_value()) {
      throw ConfigError("soliton: give exactly one of --c and --k");
    }
    if (opt.dim < 1) throw ConfigError("soliton: --dim must be >= 1");
    if (!(opt.tol > 0.0)) throw ConfigError("soliton: --tol must be > 0");
    json manifest = base_manifest("soliton");
    manifest["config"] = {{"dim", opt.dim}, {"r_max", opt.r_max}, {"tol", opt.tol}};
    double c = 0.0;
    fs::create_directories(out_dir);
    if (opt.k) {
      if (!(*opt.k >= 0.0)) throw ConfigError("soliton: --k must be >= 0");
      const auto entry = c_of_k(*opt.k, opt.dim);
      c = entry.c;
      manifest["config"]["k"] = *opt.k;
      write_json(out_dir / "speed_slope.json",
                 {{"k", entry.k}, {"c", entry.c}, {"dim", entry.dim}, {"residual", entry.residual}});
      add_file(manifest, "speed_slope.json");
    } else {
      c = *opt.c;
      if (!(c > 0.0)) throw ConfigError("soliton: --c must be > 0");
      manifest["config"]["c"] = c;
    }
    SolitonProfile prof;
    try {
      prof = phi_profile(c, opt.dim, opt.r_max, opt.tol);
    } catch (const SolverError& e) {
      throw ConfigError(std::string("soliton: no profile on [0, r_max]: ") + e.what());
    }
    write_csv(out_dir / "profile.csv",
              {{"r", "phi", "phi_prime"}, {prof.r_samples, prof.phi_samples, prof.phi_prime_samples}});
    add_file(manifest, "profile.csv");
    manifest["c"] = c;
    manifest["residual"] = soliton_residual(prof);
    finish_manifest(out_dir, manifest, start, exit_code::ok);
    log << "soliton: c = " << format_double(c) << ", " << prof.r_samples.size() << " samples -> "
        << out_dir.string() << '\n';
    return exit_code::ok;
  });
}

int cmd_ck_table(int dim, const std::vector<double>& k_list, const fs::path& out_dir,
                 std::ostream& log) {
  return guarded(log, [&]() -> int {
    const auto start = Clock::now();
    if (k_list.empty()) throw ConfigError("ck-table: empty k list");
    if (dim < 1) throw ConfigError("ck-table: --dim must be >= 1");
    std::vector<double> ks = k_list;
    std::sort(ks.begin(), ks.end());
    if (!(ks.front() > 0.0)) throw ConfigError("ck-table: k values must be > 0");
    if (std::adjacent_find(ks.begin(), ks.end()) != ks.end()) {
      throw ConfigError("ck-table: duplicate k values");
    }
    std::vector<SpeedSlopeEntry> rows(ks.size());
    std::vector<std::exception_ptr> errors(ks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < ks.size(); ++j) {
      try {
        rows[j] = c_of_k(ks[j], dim);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    json manifest = base_manifest("ck-table");
    manifest["config"] = {{"dim", dim}, {"k_list", ks}};
    fs::create_directories(out_dir);
    for (std::size_t j = 1; j < rows.size(); ++j) {
      if (!(rows[j].c > rows[j - 1].c)) {
        log << "ck-table: c is not increasing between k = " << format_double(ks[j - 1])
            << " and k = " << format_double(ks[j]) << " (integrator fault)\n";
        manifest["checks"] = {{"monotone_c", "FAIL"}};
        finish_manifest(out_dir, manifest, start, exit_code::monotonicity);
        return exit_code::monotonicity;
      }
    }
    CsvTable t{{"k", "c", "residual"}, {{}, {}, {}}};
    for (const auto& r : rows) {
      t.columns[0].push_back(r.k);
      t.columns[1].push_back(r.c);
      t.columns[2].push_back(r.residual);
    }
    write_csv(out_dir / "ck_table.csv", t);
    add_file(manifest, "ck_table.csv");
    manifest["checks"] = {{"monotone_c", "PASS"}};
    finish_manifest(out_dir, manifest, start, exit_code::ok);
    log << "ck-table: " << rows.size() << " rows -> " << out_dir.string() << '\n';
    return exit_code::ok;
  });
}

int cmd_verify(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const auto start = Clock::now();
    const auto& names = config.verify.checks;
    const bool needs_run =
        std::any_of(names.begin(), names.end(),
                    [](const std::string& n) { return n == "intersections" || n == "gradient_domination"; });
    std::optional<Trajectory> traj;
    if (needs_run) {
      SolverConfig sc = config.solver;
      sc.form = Form::V;
      traj = run(sc);
    }

    std::vector<std::pair<CheckStatus, json>> results(names.size());
    std::vector<std::exception_ptr> errors(names.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < names.size(); ++j) {
      try {
        const auto& n = names[j];
        if (n == "barriers") results[j] = check_barriers(config);
        else if (n == "comparison") results[j] = check_comparison(config);
        else if (n == "sandwich") results[j] = check_sandwich(config);
        else if (n == "intersections") results[j] = check_intersections(config, *traj);
        else results[j] = check_domination(config, *traj);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    std::map<std::string, std::pair<CheckStatus, json>> merged;
    for (std::size_t j = 0; j < names.size(); ++j) merged[names[j]] = std::move(results[j]);
    fs::create_directories(out_dir);
    json manifest = base_manifest("verify");
    manifest["config"] = to_json(config);
    json checks = json::object();
    bool failed = false;
    for (const auto& [name, res] : merged) {
      json report = res.second;
      report["status"] = to_string(res.first);
      write_json(out_dir / (name + ".json"), report);
      add_file(manifest, name + ".json");
      checks[name] = check_entry(res.first);
      failed = failed || res.first == CheckStatus::Fail;
      log << "verify " << name << ": " << to_string(res.first) << '\n';
    }
    manifest["checks"] = checks;
    const int code = failed ? exit_code::verify_failed : exit_code::ok;
    finish_manifest(out_dir, manifest, start, code);
    return code;
  });
}

int cmd_verify(const fs::path& config_file, const fs::path& out_dir, std::ostream& log) {
  RunConfig cfg;
  const int rc = guarded(log, [&] {
    cfg = load_config(config_file);
    return exit_code::ok;
  });
  return rc != exit_code::ok ? rc : cmd_verify(cfg, out_dir, log);
}

int cmd_asymptotics(const fs::path& trajectory_dir, const std::optional<fs::path>& config_file,
                    const fs::path& out_dir, std::ostream& log) {
  return guarded(log, [&]() -> int {
    const auto start = Clock::now();
    AsymptoticsThresholds th;
    if (config_file) th = load_config(*config_file).thresholds;
    const auto traj = load_trajectory(trajectory_dir);
    const auto rep = report(traj, th);

    fs::create_directories(out_dir);
    json manifest = base_manifest("asymptotics");
    RunConfig echo;
    echo.thresholds = th;
    echo.asymptotics.trajectory_dir = trajectory_dir.string();
    manifest["config"] = to_json(echo);
    write_csv(out_dir / "epsilon.csv", series_table(rep.epsilon_series, "epsilon"));
    write_csv(out_dir / "H.csv", series_table(rep.H_series, "H"));
    write_csv(out_dir / "rate.csv", series_table(rep.rate_series, "rate"));
    write_csv(out_dir / "profile_dev.csv",
              series_table(rep.profile_deviation_series, "profile_deviation"));
    json checks = json::object();
    json check_list = json::array();
    std::vector<std::string> failing;
    for (const auto& c : rep.checks) {
      checks[c.name] = to_string(c.status);
      check_list.push_back({{"name", c.name},
                            {"value", c.value},
                            {"threshold", c.threshold},
                            {"status", to_string(c.status)}});
      if (c.status == CheckStatus::Fail) failing.push_back(c.name);
    }
    write_json(out_dir / "report.json", {{"dim", rep.dim},
                                         {"C0_estimate", rep.C0_estimate},
                                         {"C0_cauchy_defect", rep.C0_cauchy_defect},
                                         {"mean_rate", rep.mean_rate},
                                         {"h_window_ratio", rep.h_window_ratio},
                                         {"checks", check_list}});
    for (const char* f : {"epsilon.csv", "H.csv", "rate.csv", "profile_dev.csv", "report.json"}) {
      add_file(manifest, f);
    }
    manifest["checks"] = checks;
    manifest["C0_estimate"] = rep.C0_estimate;
    for (const auto& c : rep.checks) {
      log << "asymptotics " << c.name << ": " << format_double(c.value) << " (threshold "
          << format_double(c.threshold) << ") " << to_string(c.status) << '\n';
    }
    const int code = failing.empty() ? exit_code::ok : exit_code::threshold;
    if (!failing.empty()) {
      log << "threshold failure in:";
      for (const auto& f : failing) log << ' ' << f;
      log << '\n';
    }
    finish_manifest(out_dir, manifest, start, code);
    return code;
  });
}

}  // namespace mcf
