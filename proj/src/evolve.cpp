#include "mcf/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mcf/calculus.hpp"
#include "mcf/errors.hpp"

namespace mcf {

InitialData InitialData::tabulated(std::vector<std::pair<double, double>> rows) {
  InitialData d;
  d.kind = Kind::Tabulated;
  d.table = std::move(rows);
  return d;
}

double InitialData::value(double r) const {
  switch (kind) {
    case Kind::Constant:
      return a;
    case Kind::Gaussian:
      return a * std::exp(-b * r * r);
    case Kind::Quadratic:
      return a + b * r * r;
    case Kind::Tabulated: {
      if (table.empty()) throw ConfigError("tabulated initial data is empty");
      if (r <= table.front().first) return table.front().second;
      if (r >= table.back().first) return table.back().second;
      const auto it = std::upper_bound(table.begin(), table.end(), r,
                                       [](double x, const auto& row) { return x < row.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double w = (r - lo.first) / (hi.first - lo.first);
      return (1.0 - w) * lo.second + w * hi.second;
    }
  }
  return a;
}

void SolverConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("solver config: " + what); };
  if (dim < 1) fail("dim must be >= 1");
  if (n_nodes < RadialGrid::kMinNodes) fail("n_nodes must be >= 11");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be finite and >= 0");
  if (!(dt_min > 0.0)) fail("dt_min must be > 0");
  if (!(dt_min <= dt_init && dt_init <= dt_max)) fail("need dt_min <= dt_init <= dt_max");
  if (!(error_tol > 0.0)) fail("error_tol must be > 0");
  if (boundary.kind == BoundaryCondition::Kind::Neumann && form == Form::V) {
    fail("fixed-slope boundary is only available in u-form");
  }
  for (double t : snapshot_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) fail("snapshot times must be finite and >= 0");
  }
  if (initial.kind == InitialData::Kind::Tabulated) {
    if (initial.table.size() < 2) fail("tabulated initial data needs >= 2 rows");
    for (std::size_t i = 0; i < initial.table.size(); ++i) {
      const auto& [r, u] = initial.table[i];
      if (!std::isfinite(r) || !std::isfinite(u)) fail("tabulated initial data is not finite");
      if (i > 0 && !(r > initial.table[i - 1].first)) fail("tabulated r must increase");
    }
  }
}

const FlowState& Trajectory::at(double t) const {
  for (const auto& s : snapshots) {
    if (std::abs(s.t() - t) <= 1e-12 * std::max(1.0, std::abs(t))) return s;
  }
  throw std::out_of_range("trajectory has no snapshot at t = " + std::to_string(t));
}

FlowState init_state(const SolverConfig& config) {
  config.validate();
  auto grid = build_grid(config.n_nodes);
  std::vector<double> u(grid->size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = config.initial.value(grid->r(i));
    if (!std::isfinite(u[i])) throw ConfigError("initial data is not finite");
    if (config.boundary.kind == BoundaryCondition::Kind::Robin && !(u[i] > 0.0)) {
      throw ConfigError("initial data must be strictly positive");
    }
  }
  if (config.form == Form::V) {
    for (double& x : u) x = std::log(x);
  }
  return FlowState(ScalarField(std::move(grid), std::move(u)), 0.0, config.form, config.dim);
}

std::optional<FlowState> try_step(const FlowState& state, double dt, const SolverConfig& config) {
  const auto& grid = state.grid();
  Tridiagonal sys(grid.size());
  assemble_implicit_system(state.form(), state.dim(), grid, state.field().values(), dt,
                           config.boundary, sys, config.exec);
  std::vector<double> next(grid.size());
  if (!solve_tridiagonal(sys, next)) return std::nullopt;
  if (state.form() == Form::U &&
      std::any_of(next.begin(), next.end(), [](double x) { return x <= 0.0; })) {
    return std::nullopt;
  }
  return FlowState(ScalarField(state.field().grid_ptr(), std::move(next)), state.t() + dt,
                   state.form(), state.dim());
}

FlowState step(const FlowState& state, double dt, const SolverConfig& config) {
  auto next = try_step(state, dt, config);
  if (!next) {
    std::ostringstream msg;
    msg << "step rejected at t = " << state.t() << ": linear solve broke down for dt = " << dt;
    throw SolverError(msg.str());
  }
  return *std::move(next);
}

namespace {

double step_error(const FlowState& coarse, const FlowState& fine) {
  const auto a = coarse.field().values();
  const auto b = fine.field().values();
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = coarse.form() == Form::U ? std::max(1.0, std::abs(b[i])) : 1.0;
    err = std::max(err, std::abs(a[i] - b[i]) / scale);
  }
  return err;
}

FlowState lerp(const FlowState& s0, const FlowState& s1, double t) {
  const double w = (t - s0.t()) / (s1.t() - s0.t());
  const auto a = s0.field().values();
  const auto b = s1.field().values();
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - w) * a[i] + w * b[i];
  return FlowState(ScalarField(s0.field().grid_ptr(), std::move(out)), t, s0.form(), s0.dim());
}

}  // namespace

std::vector<double> snapshot_schedule(const SolverConfig& config) {
  std::vector<double> times{0.0, config.t_end};
  for (double t : config.snapshot_times) {
    if (t <= config.t_end) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

std::vector<CorridorViolation> check_corridor(const FlowState& state, double m0, double M0,
                                              double tol) {
  const int geom = state.dim() - 1;
  const double t = state.t();
  const double lower = m0 * std::exp(-0.5 + geom * t);
  const double log_upper_bound = std::log(std::max(M0, 1.0)) + 0.5 + state.dim() * t;
  // u >= lower - tol  <=>  ln u >= ln(lower - tol) (vacuous if lower <= tol)
  const double log_lower = lower > tol ? std::log(lower - tol) : -HUGE_VAL;
  const double log_upper = log_upper_bound + std::log1p(tol * std::exp(-log_upper_bound));
  std::vector<CorridorViolation> out;
  for (std::size_t i = 0; i < state.grid().size(); ++i) {
    const double lu = state.log_u(i);
    if (lu < log_lower) out.push_back({t, i, lu, log_lower, true});
    if (lu > log_upper) out.push_back({t, i, lu, log_upper, false});
  }
  return out;
}

Trajectory run(const SolverConfig& config, const StepObserver& observer) {
  Trajectory traj;
  traj.config = config;
  FlowState state = init_state(config);
  const std::size_t last = state.grid().size() - 1;

  double m0 = HUGE_VAL, M0 = 0.0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double u = std::exp(state.log_u(i));
    m0 = std::min(m0, u);
    M0 = std::max(M0, u);
  }
  const bool robin = config.boundary.kind == BoundaryCondition::Kind::Robin;
  auto record = [&](FlowState snap) {
    if (robin) {
      const double tol = 10.0 * config.error_tol * (1.0 + snap.t());
      auto bad = check_corridor(snap, m0, M0, tol);
      traj.corridor_violations.insert(traj.corridor_violations.end(), bad.begin(), bad.end());
    }
    traj.snapshots.push_back(std::move(snap));
  };

  const auto schedule = snapshot_schedule(config);
  std::size_t next_snap = 0;
  record(state);
  ++next_snap;
  traj.center_series.push(0.0, state.log_u(0));
  traj.boundary_series.push(0.0, state.log_u(last));

  double dt = config.dt_init;
  const double t_end = config.t_end;
  while (state.t() < t_end) {
    const double remaining = t_end - state.t();
    const bool clipped = dt >= remaining;
    const double h = clipped ? remaining : dt;

    std::optional<FlowState> next;
    if (!config.adaptive) {
      next = try_step(state, h, config);
      if (!next) throw SolverError("fixed-step run: linear solve broke down at t = " +
                                   std::to_string(state.t()));
    } else {
      auto full = try_step(state, h, config);
      std::optional<FlowState> fine;
      if (full) {
        auto half = try_step(state, 0.5 * h, config);
        if (half) fine = try_step(*half, 0.5 * h, config);
      }
      const double err = (full && fine) ? step_error(*full, *fine) : HUGE_VAL;
      if (err > config.error_tol) {
        ++traj.rejected_steps;
        dt = 0.5 * h;
        if (dt < config.dt_min) {
          std::ostringstream msg;
          msg << "dt underflow at t = " << state.t() << " (dt = " << dt
              << " < dt_min = " << config.dt_min << ", local error " << err << ")";
          throw SolverError(msg.str());
        }
        continue;
      }
      const double grow = err > 0.0 ? std::clamp(0.9 * std::sqrt(config.error_tol / err), 0.5, 1.5)
                                     : 1.5;
      if (!clipped) dt = std::min(config.dt_max, h * grow);
      next = std::move(fine);
      next = FlowState(next->field(), state.t() + h, next->form(), next->dim());
    }
    if (clipped) next = FlowState(next->field(), t_end, next->form(), next->dim());

    ++traj.accepted_steps;
    if (observer) observer(state, *next);
    while (next_snap < schedule.size() && schedule[next_snap] <= next->t()) {
      const double ts = schedule[next_snap++];
      record(ts == next->t() ? *next : lerp(state, *next, ts));
    }
    state = *std::move(next);
    traj.center_series.push(state.t(), state.log_u(0));
    traj.boundary_series.push(state.t(), state.log_u(last));
    traj.dt_series.push(state.t(), h);
  }
  return traj;
}

ScalarField compute_w(const FlowState& state) {
  const std::size_t n = state.grid().size();
  std::vector<double> w(n);
  if (state.form() == Form::V) {
    const auto v = state.field().values();
    const double h = state.grid().dr();
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    w[n - 1] = 1.0;
  } else {
    const auto du = derivative(state.field());
    for (std::size_t i = 1; i < n; ++i) w[i] = du[i] / state.field()[i];
  }
  w[0] = 0.0;
  return ScalarField(state.field().grid_ptr(), std::move(w));
}

}  // namespace mcf
