#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mcf/commands.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Radially symmetric graph mean curvature flow with Robin boundary"};
  app.set_version_flag("--version", std::string(MCF_VERSION));
  app.require_subcommand(1);

  std::string config_path, traj_dir, output;
  std::optional<std::string> asym_config;

  auto* solve = app.add_subcommand("solve", "integrate the flow and write snapshots");
  solve->add_option("config", config_path, "JSON config")->required();
  solve->add_option("-o,--output", output, "output directory");

  mcf::SolitonOptions sol;
  auto* soliton = app.add_subcommand("soliton", "translating solution profile");
  auto* opt_c = soliton->add_option("--c", sol.c, "speed");
  auto* opt_k = soliton->add_option("--k", sol.k, "boundary slope; solves for the speed");
  opt_c->excludes(opt_k);
  soliton->add_option("--dim", sol.dim, "dimension N")->capture_default_str();
  soliton->add_option("--rmax", sol.r_max, "profile end radius")->capture_default_str();
  soliton->add_option("--tol", sol.tol, "integrator tolerance")->capture_default_str();
  soliton->add_option("-o,--output", output, "output directory");

  int ck_dim = 2;
  std::vector<double> k_list;
  auto* ck = app.add_subcommand("ck-table", "tabulate the speed-slope map");
  ck->add_option("--dim", ck_dim, "dimension N")->capture_default_str();
  ck->add_option("--k-list", k_list, "boundary slopes, comma separated")->delimiter(',');
  ck->add_option("-o,--output", output, "output directory");

  auto* verify = app.add_subcommand("verify", "comparison, barrier and zero-number checks");
  verify->add_option("config", config_path, "JSON config")->required();
  verify->add_option("-o,--output", output, "output directory");

  auto* asym = app.add_subcommand("asymptotics", "late-time diagnostics of a solve run");
  asym->add_option("trajectory", traj_dir, "directory written by solve")->required();
  asym->add_option("--config", asym_config, "config with a thresholds section");
  asym->add_option("-o,--output", output, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mcf::exit_code::config;
  }

  auto out_for = [&](const std::string& cmd) {
    return output.empty() ? mcf::default_output_dir(cmd) : fs::path(output);
  };
  try {
    if (*solve) return mcf::cmd_solve(fs::path(config_path), out_for("solve"), std::cerr);
    if (*soliton) return mcf::cmd_soliton(sol, out_for("soliton"), std::cerr);
    if (*ck) return mcf::cmd_ck_table(ck_dim, k_list, out_for("ck-table"), std::cerr);
    if (*verify) return mcf::cmd_verify(fs::path(config_path), out_for("verify"), std::cerr);
    std::optional<fs::path> cfg;
    if (asym_config) cfg = fs::path(*asym_config);
    return mcf::cmd_asymptotics(fs::path(traj_dir), cfg, out_for("asymptotics"), std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
