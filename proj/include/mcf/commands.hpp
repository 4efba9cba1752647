#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcf/config.hpp"
#include "mcf/evolve.hpp"

namespace mcf {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int solver = 3;
inline constexpr int monotonicity = 4;
inline constexpr int verify_failed = 5;
inline constexpr int threshold = 6;
}  // namespace exit_code

/// $MCF_OUTPUT_DIR/<command>, or ./mcf_out/<command> when the variable is unset.
std::filesystem::path default_output_dir(const std::string& command);

/// Writes manifest.json into dir. Every listed file (relative to dir) must exist.
void write_manifest(const std::filesystem::path& dir, const nlohmann::json& manifest);

/// Rebuilds a trajectory from a directory written by cmd_solve.
Trajectory load_trajectory(const std::filesystem::path& dir);

int cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_solve(const std::filesystem::path& config_file, const std::filesystem::path& out_dir,
              std::ostream& log);

struct SolitonOptions {
  std::optional<double> c;
  std::optional<double> k;
  int dim = 2;
  double r_max = 1.0;
  double tol = 1e-10;
};
int cmd_soliton(const SolitonOptions& options, const std::filesystem::path& out_dir,
                std::ostream& log);

int cmd_ck_table(int dim, const std::vector<double>& k_list, const std::filesystem::path& out_dir,
                 std::ostream& log);

int cmd_verify(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_verify(const std::filesystem::path& config_file, const std::filesystem::path& out_dir,
               std::ostream& log);

/// Thresholds come from the config file when one is given, else the defaults.
int cmd_asymptotics(const std::filesystem::path& trajectory_dir,
                    const std::optional<std::filesystem::path>& config_file,
                    const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace mcf
