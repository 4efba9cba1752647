#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcf/asymptotics.hpp"
#include "mcf/evolve.hpp"

namespace mcf {

struct SolitonSection {
  std::optional<double> c;
  std::optional<double> k;
  int dim = 2;
  double r_max = 1.0;
  double tol = 1e-10;
  double spacing = 1e-3;
  std::vector<double> k_list;
};

struct BarrierSection {
  double m0 = 1.0;
  double M0 = 1.0;
  double m_minus = -1.0;
  double m_plus = 2.0;
  double t_max = 1.0;        // SUPER_W is sampled up to min(t_max, T+)
  std::size_t times = 20;
};

struct VerifySection {
  std::vector<std::string> checks{"barriers", "comparison", "gradient_domination",
                                  "intersections", "sandwich"};
  BarrierSection barriers;
  std::size_t comparison_pairs = 20;
  double comparison_t_end = 5.0;
  std::uint64_t seed = 42;
  std::string sandwich_w0 = "r2";  // "r", "r2" or "zero"
  std::size_t intersection_pairs = 10;
  double domination_k = 2.0;
  double domination_r_min = 0.1;
};

struct AsymptoticsSection {
  std::string trajectory_dir;
};

struct RunConfig {
  SolverConfig solver;
  SolitonSection soliton;
  VerifySection verify;
  AsymptoticsSection asymptotics;
  AsymptoticsThresholds thresholds;
};

/// Names accepted in verify.checks.
const std::vector<std::string>& known_checks();

/// Parses and validates a config document. Missing keys keep their defaults; unknown keys,
/// wrong types and invalid values throw ConfigError("line L: ...").
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully expanded config (every key present, snapshot times listed).
nlohmann::json to_json(const RunConfig& config);

}  // namespace mcf
