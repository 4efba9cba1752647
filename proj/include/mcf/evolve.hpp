#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mcf/grid.hpp"
#include "mcf/kernels.hpp"

namespace mcf {

/// Initial profile u_0(r). Presets are smooth; tables are interpolated linearly.
struct InitialData {
  enum class Kind { Constant, Gaussian, Quadratic, Tabulated };

  Kind kind = Kind::Constant;
  double a = 1.0;
  double b = 0.0;
  std::vector<std::pair<double, double>> table;

  /// u_0 = m
  static InitialData constant(double m) { return {Kind::Constant, m, 0.0, {}}; }
  /// u_0 = a exp(-b r^2)
  static InitialData gaussian(double a, double b) { return {Kind::Gaussian, a, b, {}}; }
  /// u_0 = a + b r^2
  static InitialData quadratic(double a, double b) { return {Kind::Quadratic, a, b, {}}; }
  /// (r, u) pairs, sorted by r, covering [0, 1].
  static InitialData tabulated(std::vector<std::pair<double, double>> rows);

  double value(double r) const;
};

struct SolverConfig {
  int dim = 2;
  std::size_t n_nodes = 401;
  Form form = Form::V;
  double t_end = 1.0;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 0.05;
  double error_tol = 1e-6;
  std::vector<double> snapshot_times;
  InitialData initial = InitialData::constant(1.0);
  BoundaryCondition boundary = BoundaryCondition::robin();
  /// false: fixed steps of dt_init (last one clipped to t_end), no step doubling.
  bool adaptive = true;
  Exec exec = Exec::Serial;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;
};

/// A snapshot that left the a priori corridor m0 e^{-1/2} e^{(N-1)t} <= u <= max(M0,1) e^{1/2} e^{Nt}.
struct CorridorViolation {
  double t;
  std::size_t node;
  double log_u;
  double log_bound;
  bool below;
};

struct Trajectory {
  std::vector<FlowState> snapshots;
  TimeSeries center_series;    // ln u(0, t) per accepted step
  TimeSeries boundary_series;  // ln u(1, t) per accepted step
  TimeSeries dt_series;        // accepted step sizes, stamped at the step end
  SolverConfig config;
  std::vector<CorridorViolation> corridor_violations;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  const FlowState& final_state() const { return snapshots.back(); }
  /// Snapshot whose time equals t (to 1e-12); throws std::out_of_range otherwise.
  const FlowState& at(double t) const;
};

FlowState init_state(const SolverConfig& config);

/// One frozen-coefficient implicit step; nullopt when the linear solve breaks down.
std::optional<FlowState> try_step(const FlowState& state, double dt, const SolverConfig& config);

/// As try_step, but a breakdown throws SolverError ("dt too large").
FlowState step(const FlowState& state, double dt, const SolverConfig& config);

/// Sorted, deduplicated snapshot times: 0, t_end and the configured times <= t_end.
std::vector<double> snapshot_schedule(const SolverConfig& config);

/// Called after every accepted step with the states before and after it.
using StepObserver = std::function<void(const FlowState& before, const FlowState& after)>;

/// Integrates to config.t_end. Throws SolverError when dt underflows dt_min.
Trajectory run(const SolverConfig& config, const StepObserver& observer = {});

/// w = u_r / u, with w(0) = 0. In v-form w(1) = 1 exactly (boundary row);
/// in u-form w(1) comes from the one-sided stencil.
ScalarField compute_w(const FlowState& state);

/// Nodewise log-space corridor check of a single state against the seeds m0, M0.
std::vector<CorridorViolation> check_corridor(const FlowState& state, double m0, double M0,
                                              double tol);

}  // namespace mcf
