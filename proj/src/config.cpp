#include "mcf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mcf/errors.hpp"
#include "mcf/verification.hpp"

namespace mcf {

using nlohmann::json;

namespace {

std::size_t line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Key lookup by path: each segment is searched after the previous one, which is exact for
// the nesting depths used here unless a key name also appears as a string value.
class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) {}

  std::size_t line(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    for (const auto& seg : path) {
      const auto hit = text_.find("\"" + seg + "\"", pos);
      if (hit == std::string::npos) break;
      pos = hit + 1;
    }
    return line_of(text_, pos);
  }

 private:
  const std::string& text_;
};

class Reader {
 public:
  Reader(const json& obj, std::vector<std::string> path, const Locator& loc,
         std::set<std::string> allowed)
      : obj_(obj), path_(std::move(path)), loc_(loc) {
    if (!obj_.is_object()) fail(path_, "must be an object");
    for (const auto& [key, value] : obj_.items()) {
      (void)value;
      if (!allowed.count(key)) fail(child(key), "unknown key '" + key + "'" + where());
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  const json& raw(const std::string& key) const { return obj_.at(key); }
  std::vector<std::string> child(const std::string& key) const {
    auto p = path_;
    p.push_back(key);
    return p;
  }

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    std::string dotted;
    for (const auto& s : path) dotted += (dotted.empty() ? "" : ".") + s;
    throw ConfigError("line " + std::to_string(loc_.line(path)) + ": " +
                      (dotted.empty() ? "" : dotted + ": ") + what);
  }

  void number(const std::string& key, double& out) const {
    if (!has(key)) return;
    const auto& v = raw(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) fail(child(key), "must be finite");
  }

  void positive(const std::string& key, double& out) const {
    number(key, out);
    if (has(key) && !(out > 0.0)) fail(child(key), "must be > 0");
  }

  void optional_number(const std::string& key, std::optional<double>& out) const {
    if (!has(key)) return;
    double x = 0.0;
    number(key, x);
    out = x;
  }

  template <class Int>
  void integer(const std::string& key, Int& out, long long min_value) const {
    if (!has(key)) return;
    const auto& v = raw(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    const auto x = v.get<long long>();
    if (x < min_value) fail(child(key), "must be >= " + std::to_string(min_value));
    out = static_cast<Int>(x);
  }

  void boolean(const std::string& key, bool& out) const {
    if (!has(key)) return;
    if (!raw(key).is_boolean()) fail(child(key), "expected true or false");
    out = raw(key).get<bool>();
  }

  void string(const std::string& key, std::string& out) const {
    if (!has(key)) return;
    if (!raw(key).is_string()) fail(child(key), "expected a string");
    out = raw(key).get<std::string>();
  }

  void numbers(const std::string& key, std::vector<double>& out) const {
    if (!has(key)) return;
    const auto& v = raw(key);
    if (!v.is_array()) fail(child(key), "expected an array of numbers");
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number()) fail(child(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
  }

  Reader sub(const std::string& key, std::set<std::string> allowed) const {
    return Reader(raw(key), child(key), loc_, std::move(allowed));
  }

 private:
  std::string where() const {
    std::string dotted;
    for (const auto& s : path_) dotted += (dotted.empty() ? "" : ".") + s;
    return dotted.empty() ? " at top level" : " in section '" + dotted + "'";
  }

  const json& obj_;
  std::vector<std::string> path_;
  const Locator& loc_;
};

InitialData read_initial(const Reader& r) {
  const auto sec = r.sub("initial", {"kind", "value", "a", "b", "rows"});
  std::string kind = "constant";
  sec.string("kind", kind);
  auto path = r.child("initial");
  if (kind == "constant") {
    double m = 1.0;
    sec.number("value", m);
    return InitialData::constant(m);
  }
  if (kind == "gaussian" || kind == "quadratic") {
    double a = 1.0, b = 1.0;
    sec.number("a", a);
    sec.number("b", b);
    return kind == "gaussian" ? InitialData::gaussian(a, b) : InitialData::quadratic(a, b);
  }
  if (kind == "table") {
    if (!sec.has("rows")) sec.fail(path, "table needs 'rows'");
    const auto& rows = sec.raw("rows");
    std::vector<std::pair<double, double>> table;
    if (!rows.is_array()) sec.fail(sec.child("rows"), "expected [[r, u], ...]");
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
        sec.fail(sec.child("rows"), "expected [[r, u], ...]");
      }
      table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    try {
      return InitialData::tabulated(std::move(table));
    } catch (const ConfigError& e) {
      sec.fail(sec.child("rows"), e.what());
    }
  }
  sec.fail(sec.child("kind"), "unknown initial kind '" + kind +
                                  "' (constant, gaussian, quadratic, table)");
}

double round_time(double t) { return std::round(t * 1e12) / 1e12; }

SolverConfig read_solver(const Reader& top) {
  SolverConfig c;
  if (!top.has("solver")) return c;
  const auto r = top.sub("solver", {"dim", "n_nodes", "form", "t_end", "dt_init", "dt_min",
                                    "dt_max", "error_tol", "snapshot_times",
                                    "snapshot_interval", "initial", "boundary", "adaptive",
                                    "parallel"});
  r.integer("dim", c.dim, 1);
  r.integer("n_nodes", c.n_nodes, 0);
  std::string form = "v";
  r.string("form", form);
  if (form == "u") {
    c.form = Form::U;
  } else if (form != "v") {
    r.fail(r.child("form"), "expected \"u\" or \"v\"");
  }
  r.number("t_end", c.t_end);
  r.number("dt_init", c.dt_init);
  r.number("dt_min", c.dt_min);
  r.number("dt_max", c.dt_max);
  r.number("error_tol", c.error_tol);
  r.numbers("snapshot_times", c.snapshot_times);
  if (r.has("snapshot_interval")) {
    if (r.has("snapshot_times")) {
      r.fail(r.child("snapshot_interval"), "give either snapshot_times or snapshot_interval");
    }
    double h = 0.0;
    r.positive("snapshot_interval", h);
    for (std::size_t k = 1; round_time(k * h) <= c.t_end; ++k) {
      c.snapshot_times.push_back(round_time(k * h));
    }
  }
  if (r.has("initial")) c.initial = read_initial(r);
  if (r.has("boundary")) {
    const auto b = r.sub("boundary", {"kind", "slope"});
    std::string kind = "robin";
    b.string("kind", kind);
    if (kind == "robin") {
      if (b.has("slope")) b.fail(b.child("slope"), "robin boundary takes no slope");
    } else if (kind == "neumann") {
      double k = 0.0;
      if (!b.has("slope")) b.fail(r.child("boundary"), "neumann boundary needs 'slope'");
      b.number("slope", k);
      c.boundary = BoundaryCondition::neumann(k);
    } else {
      b.fail(b.child("kind"), "expected \"robin\" or \"neumann\"");
    }
  }
  r.boolean("adaptive", c.adaptive);
  bool parallel = false;
  r.boolean("parallel", parallel);
  c.exec = parallel ? Exec::Parallel : Exec::Serial;
  try {
    c.validate();
  } catch (const ConfigError& e) {
    r.fail(top.child("solver"), e.what());
  }
  return c;
}

SolitonSection read_soliton(const Reader& top) {
  SolitonSection s;
  if (!top.has("soliton")) return s;
  const auto r = top.sub("soliton", {"c", "k", "dim", "r_max", "tol", "spacing", "k_list"});
  r.optional_number("c", s.c);
  r.optional_number("k", s.k);
  r.integer("dim", s.dim, 1);
  r.positive("r_max", s.r_max);
  r.positive("tol", s.tol);
  r.positive("spacing", s.spacing);
  r.numbers("k_list", s.k_list);
  if (s.c && s.k) r.fail(r.child("k"), "give either c or k, not both");
  return s;
}

VerifySection read_verify(const Reader& top) {
  VerifySection v;
  if (!top.has("verify")) return v;
  const auto r = top.sub("verify", {"checks", "barriers", "comparison_pairs", "comparison_t_end",
                                    "seed", "sandwich_w0", "intersection_pairs", "domination_k",
                                    "domination_r_min"});
  if (r.has("checks")) {
    const auto& list = r.raw("checks");
    if (!list.is_array()) r.fail(r.child("checks"), "expected an array of check names");
    v.checks.clear();
    for (const auto& name : list) {
      if (!name.is_string()) r.fail(r.child("checks"), "expected an array of check names");
      const auto s = name.get<std::string>();
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), s) == known.end()) {
        r.fail(r.child("checks"), "unknown check '" + s + "'");
      }
      if (std::find(v.checks.begin(), v.checks.end(), s) == v.checks.end()) v.checks.push_back(s);
    }
    std::sort(v.checks.begin(), v.checks.end());
  }
  if (r.has("barriers")) {
    const auto b = r.sub("barriers", {"m0", "M0", "m_minus", "m_plus", "t_max", "times"});
    b.number("m0", v.barriers.m0);
    b.number("M0", v.barriers.M0);
    b.number("m_minus", v.barriers.m_minus);
    b.number("m_plus", v.barriers.m_plus);
    b.positive("t_max", v.barriers.t_max);
    b.integer("times", v.barriers.times, 2);
  }
  r.integer("comparison_pairs", v.comparison_pairs, 1);
  r.positive("comparison_t_end", v.comparison_t_end);
  r.integer("seed", v.seed, 0);
  r.string("sandwich_w0", v.sandwich_w0);
  if (v.sandwich_w0 != "r" && v.sandwich_w0 != "r2" && v.sandwich_w0 != "zero") {
    r.fail(r.child("sandwich_w0"), "expected \"r\", \"r2\" or \"zero\"");
  }
  r.integer("intersection_pairs", v.intersection_pairs, 1);
  r.positive("domination_k", v.domination_k);
  r.positive("domination_r_min", v.domination_r_min);
  return v;
}

AsymptoticsThresholds read_thresholds(const Reader& top) {
  AsymptoticsThresholds t;
  if (!top.has("thresholds")) return t;
  const auto r = top.sub("thresholds", {"epsilon_max", "profile_deviation_max", "rate_rel_tol",
                                        "rate_window", "h_ratio_max", "cauchy_defect_max",
                                        "burn_in", "monotone_slack"});
  r.positive("epsilon_max", t.epsilon_max);
  r.positive("profile_deviation_max", t.profile_deviation_max);
  r.positive("rate_rel_tol", t.rate_rel_tol);
  r.positive("rate_window", t.rate_window);
  r.positive("h_ratio_max", t.h_ratio_max);
  r.positive("cauchy_defect_max", t.cauchy_defect_max);
  r.number("burn_in", t.burn_in);
  r.number("monotone_slack", t.monotone_slack);
  return t;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"barriers", "comparison", "gradient_domination",
                                              "intersections", "sandwich"};
  return names;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                      ": malformed JSON (" + e.what() + ")");
  }
  const Locator loc(text);
  const Reader top(doc, {}, loc, {"solver", "soliton", "verify", "asymptotics", "thresholds"});
  RunConfig cfg;
  cfg.solver = read_solver(top);
  cfg.soliton = read_soliton(top);
  cfg.verify = read_verify(top);
  if (top.has("asymptotics")) {
    top.sub("asymptotics", {"trajectory_dir"}).string("trajectory_dir",
                                                      cfg.asymptotics.trajectory_dir);
  }
  cfg.thresholds = read_thresholds(top);

  const auto& b = cfg.verify.barriers;
  const int dim = cfg.solver.dim;
  const BarrierSpec specs[] = {{BarrierSpec::Kind::SubU, b.m0, dim},
                               {BarrierSpec::Kind::SuperU, b.M0, dim},
                               {BarrierSpec::Kind::SubW, b.m_minus, dim},
                               {BarrierSpec::Kind::SuperW, b.m_plus, dim}};
  const char* keys[] = {"m0", "M0", "m_minus", "m_plus"};
  for (int i = 0; i < 4; ++i) {
    try {
      specs[i].validate();
    } catch (const ConfigError& e) {
      top.fail({"verify", "barriers", keys[i]}, e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ":" + e.what());
  }
}

json to_json(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  json initial;
  switch (s.initial.kind) {
    case InitialData::Kind::Constant:
      initial = {{"kind", "constant"}, {"value", s.initial.a}};
      break;
    case InitialData::Kind::Gaussian:
      initial = {{"kind", "gaussian"}, {"a", s.initial.a}, {"b", s.initial.b}};
      break;
    case InitialData::Kind::Quadratic:
      initial = {{"kind", "quadratic"}, {"a", s.initial.a}, {"b", s.initial.b}};
      break;
    case InitialData::Kind::Tabulated: {
      json rows = json::array();
      for (const auto& [r, u] : s.initial.table) rows.push_back({r, u});
      initial = {{"kind", "table"}, {"rows", rows}};
      break;
    }
  }
  json boundary = s.boundary.kind == BoundaryCondition::Kind::Robin
                      ? json{{"kind", "robin"}}
                      : json{{"kind", "neumann"}, {"slope", s.boundary.slope}};
  json solver{{"dim", s.dim},
              {"n_nodes", s.n_nodes},
              {"form", s.form == Form::U ? "u" : "v"},
              {"t_end", s.t_end},
              {"dt_init", s.dt_init},
              {"dt_min", s.dt_min},
              {"dt_max", s.dt_max},
              {"error_tol", s.error_tol},
              {"snapshot_times", s.snapshot_times},
              {"initial", initial},
              {"boundary", boundary},
              {"adaptive", s.adaptive},
              {"parallel", s.exec == Exec::Parallel}};

  json soliton{{"dim", cfg.soliton.dim},
               {"r_max", cfg.soliton.r_max},
               {"tol", cfg.soliton.tol},
               {"spacing", cfg.soliton.spacing},
               {"k_list", cfg.soliton.k_list}};
  if (cfg.soliton.c) soliton["c"] = *cfg.soliton.c;
  if (cfg.soliton.k) soliton["k"] = *cfg.soliton.k;

  const auto& v = cfg.verify;
  json verify{{"checks", v.checks},
              {"barriers",
               {{"m0", v.barriers.m0},
                {"M0", v.barriers.M0},
                {"m_minus", v.barriers.m_minus},
                {"m_plus", v.barriers.m_plus},
                {"t_max", v.barriers.t_max},
                {"times", v.barriers.times}}},
              {"comparison_pairs", v.comparison_pairs},
              {"comparison_t_end", v.comparison_t_end},
              {"seed", v.seed},
              {"sandwich_w0", v.sandwich_w0},
              {"intersection_pairs", v.intersection_pairs},
              {"domination_k", v.domination_k},
              {"domination_r_min", v.domination_r_min}};

  const auto& t = cfg.thresholds;
  json thresholds{{"epsilon_max", t.epsilon_max},
                  {"profile_deviation_max", t.profile_deviation_max},
                  {"rate_rel_tol", t.rate_rel_tol},
                  {"rate_window", t.rate_window},
                  {"h_ratio_max", t.h_ratio_max},
                  {"cauchy_defect_max", t.cauchy_defect_max},
                  {"burn_in", t.burn_in},
                  {"monotone_slack", t.monotone_slack}};

  return {{"solver", solver},
          {"soliton", soliton},
          {"verify", verify},
          {"asymptotics", {{"trajectory_dir", cfg.asymptotics.trajectory_dir}}},
          {"thresholds", thresholds}};
}

}  // namespace mcf
