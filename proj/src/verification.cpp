#include "mcf/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mcf/calculus.hpp"
#include "mcf/errors.hpp"

namespace mcf {

// ---------------------------------------------------------------------------
// Barriers

void BarrierSpec::validate() const {
  if (dim < 1) throw ConfigError("barrier: dimension must be >= 1");
  switch (kind) {
    case Kind::SubU:
      if (!(param > 0.0)) throw ConfigError("barrier SUB_U: m0 must be > 0");
      break;
    case Kind::SuperU:
      if (!(param >= 1.0)) {
        throw ConfigError(
            "barrier SUPER_U: M0 = " + std::to_string(param) +
            " < 1; the upper solution needs u >= 1, inflate the seed to max(M0, 1)");
      }
      break;
    case Kind::SubW:
      if (!(param < 0.0)) throw ConfigError("barrier SUB_W: m- must be < 0");
      break;
    case Kind::SuperW:
      if (!(param > 1.0)) throw ConfigError("barrier SUPER_W: m+ must be > 1");
      break;
  }
}

double BarrierSpec::t_plus() const {
  if (dim == 1) return std::numeric_limits<double>::infinity();
  return std::log(param) / (dim - 1);
}

const char* to_string(BarrierSpec::Kind kind) {
  switch (kind) {
    case BarrierSpec::Kind::SubU: return "SUB_U";
    case BarrierSpec::Kind::SuperU: return "SUPER_U";
    case BarrierSpec::Kind::SubW: return "SUB_W";
    case BarrierSpec::Kind::SuperW: return "SUPER_W";
  }
  return "?";
}

BarrierJet barrier_jet(const BarrierSpec& spec, double r, double t) {
  const int geom = spec.dim - 1;
  switch (spec.kind) {
    case BarrierSpec::Kind::SubU: {
      const double u = spec.param * std::exp(0.5 * (r * r - 1.0) + geom * t);
      return {u, r * u, (1.0 + r * r) * u, geom * u};
    }
    case BarrierSpec::Kind::SuperU: {
      const double u = spec.param * std::exp(0.5 * r * r + spec.dim * t);
      return {u, r * u, (1.0 + r * r) * u, spec.dim * u};
    }
    case BarrierSpec::Kind::SubW:
    case BarrierSpec::Kind::SuperW: {
      const double l = spec.param * std::exp(-geom * t);
      return {l, 0.0, 0.0, -geom * l};
    }
  }
  return {};
}

double barrier_point_residual(const BarrierSpec& spec, double r, double t) {
  const BarrierJet j = barrier_jet(spec, r, t);
  const int geom = spec.dim - 1;
  if (spec.kind == BarrierSpec::Kind::SubU || spec.kind == BarrierSpec::Kind::SuperU) {
    // u_t = u_rr / (1 + u_r^2) + (N-1) u_r / r, with u_r / r -> u_rr at the origin
    const double transport = r == 0.0 ? geom * j.d_rr : geom * j.d_r / r;
    return j.d_rr / (1.0 + j.d_r * j.d_r) + transport - j.d_t;
  }
  // w_t = A w_rr + B(r, t, w, w_r) with the coefficient field u = e^{(N-1)t + r^2/2}
  const double w = j.value, p = j.d_r;
  const double u = std::exp(geom * t + 0.5 * r * r);
  const double q = 1.0 + u * u * w * w;
  const double A = 1.0 / q;
  const double B = 2.0 * w * p / q - 2.0 * u * u * w * (p + w * w) * (p + w * w) / (q * q) +
                   geom * (r * p - w) / (r * r);
  return A * j.d_rr + B - j.d_t;
}

namespace {

struct Extremes {
  double min_res = HUGE_VAL, max_res = -HUGE_VAL, worst = 0.0;
};

}  // namespace

BarrierReport barrier_residual(const BarrierSpec& spec, const RadialGrid& grid,
                               const std::vector<double>& times, Exec exec) {
  spec.validate();
  const bool w_barrier =
      spec.kind == BarrierSpec::Kind::SubW || spec.kind == BarrierSpec::Kind::SuperW;
  if (spec.kind == BarrierSpec::Kind::SuperW) {
    for (double t : times) {
      if (t > spec.t_plus()) {
        throw DomainError("barrier SUPER_W: t = " + std::to_string(t) + " exceeds T+ = " +
                          std::to_string(spec.t_plus()));
      }
    }
  }
  const double sign = spec.is_lower() ? 1.0 : -1.0;  // residual * sign must be >= 0
  const std::size_t first = w_barrier ? 1 : 0;
  const auto n_nodes = static_cast<long>(grid.size());
  const auto n_times = static_cast<long>(times.size());
  const long total = n_nodes * n_times;

  auto sample = [&](long idx, Extremes& e) {
    const auto i = static_cast<std::size_t>(idx % n_nodes);
    if (i < first) return;
    const double t = times[static_cast<std::size_t>(idx / n_nodes)];
    const double res = barrier_point_residual(spec, grid.r(i), t);
    const double scale = std::max(1.0, std::abs(barrier_jet(spec, grid.r(i), t).d_t));
    e.min_res = std::min(e.min_res, res);
    e.max_res = std::max(e.max_res, res);
    e.worst = std::max(e.worst, -sign * res / scale);
  };

  Extremes all;
  if (exec == Exec::Serial) {
    for (long idx = 0; idx < total; ++idx) sample(idx, all);
  } else {
#pragma omp parallel
    {
      Extremes local;
#pragma omp for schedule(static) nowait
      for (long idx = 0; idx < total; ++idx) sample(idx, local);
#pragma omp critical
      {
        all.min_res = std::min(all.min_res, local.min_res);
        all.max_res = std::max(all.max_res, local.max_res);
        all.worst = std::max(all.worst, local.worst);
      }
    }
  }

  // Boundary defects: Robin u_r(1) - u(1) for u-barriers; for w-barriers the offsets from
  // the boundary values w(0) = 0 and w(1) = 1 (<= 0 for lower, >= 0 for upper).
  double bmin = HUGE_VAL, bmax = -HUGE_VAL, bworst = 0.0;
  for (double t : times) {
    if (!w_barrier) {
      const auto j = barrier_jet(spec, 1.0, t);
      const double d = j.d_r - j.value;
      bmin = std::min(bmin, d);
      bmax = std::max(bmax, d);
      bworst = std::max(bworst, std::abs(d) / std::max(1.0, std::abs(j.value)));
    } else {
      const double l = barrier_jet(spec, 0.0, t).value;
      for (double d : {l - 0.0, l - 1.0}) {
        bmin = std::min(bmin, d);
        bmax = std::max(bmax, d);
        bworst = std::max(bworst, sign * d);
      }
    }
  }

  BarrierReport rep;
  rep.spec = spec;
  rep.samples = static_cast<std::size_t>(total);
  rep.min_residual = all.min_res;
  rep.max_residual = all.max_res;
  rep.min_boundary_defect = bmin;
  rep.max_boundary_defect = bmax;
  rep.worst_signed_violation = std::max(all.worst, bworst);
  rep.certified = all.worst <= 1e-12 && bworst <= 1e-12;
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison

namespace {

double u_at(const FlowState& s, std::size_t i) {
  return s.form() == Form::U ? s.field()[i] : std::exp(s.field()[i]);
}

}  // namespace

ComparisonReport comparison_test(const InitialData& low, const InitialData& high,
                                 const SolverConfig& config, double tol) {
  const auto grid = build_grid(config.n_nodes);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (low.value(grid->r(i)) > high.value(grid->r(i))) {
      throw ConfigError("comparison_test: initial data not ordered at r = " +
                        std::to_string(grid->r(i)));
    }
  }
  SolverConfig ca = config, cb = config;
  ca.initial = low;
  cb.initial = high;
  const Trajectory a = run(ca);
  const Trajectory b = run(cb);

  ComparisonReport rep;
  rep.worst_gap = -HUGE_VAL;
  rep.snapshots = std::min(a.snapshots.size(), b.snapshots.size());
  for (std::size_t k = 0; k < rep.snapshots; ++k) {
    const auto& sa = a.snapshots[k];
    const auto& sb = b.snapshots[k];
    for (std::size_t i = 0; i < sa.grid().size(); ++i) {
      rep.worst_gap = std::max(rep.worst_gap, u_at(sa, i) - u_at(sb, i));
    }
  }
  rep.passed = a.snapshots.size() == b.snapshots.size() && rep.worst_gap <= tol;
  return rep;
}

ComparisonReport compare_with_barrier(const Trajectory& traj, const BarrierSpec& lower,
                                      double tol) {
  lower.validate();
  if (lower.kind != BarrierSpec::Kind::SubU) {
    throw ConfigError("compare_with_barrier: needs a SUB_U barrier");
  }
  ComparisonReport rep;
  rep.worst_gap = -HUGE_VAL;
  rep.snapshots = traj.snapshots.size();
  for (const auto& s : traj.snapshots) {
    for (std::size_t i = 0; i < s.grid().size(); ++i) {
      const double b = barrier_jet(lower, s.grid().r(i), s.t()).value;
      rep.worst_gap = std::max(rep.worst_gap, b - u_at(s, i));
    }
  }
  rep.passed = rep.worst_gap <= tol;
  return rep;
}

std::vector<ComparisonReport> comparison_sweep(
    const std::vector<std::pair<InitialData, InitialData>>& pairs, const SolverConfig& config,
    double tol, Exec exec) {
  std::vector<ComparisonReport> out(pairs.size());
  const auto n = static_cast<long>(pairs.size());
  if (exec == Exec::Serial) {
    for (long k = 0; k < n; ++k) out[k] = comparison_test(pairs[k].first, pairs[k].second, config, tol);
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) out[k] = comparison_test(pairs[k].first, pairs[k].second, config, tol);
  return out;
}

std::vector<std::pair<InitialData, InitialData>> random_ordered_pairs(std::size_t count,
                                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<std::pair<InitialData, InitialData>> pairs;
  for (std::size_t k = 0; k < count; ++k) {
    switch (k % 3) {
      case 0: {  // quadratic below quadratic
        const double a = in(0.5, 2.0), b = in(0.0, 1.0);
        pairs.emplace_back(InitialData::quadratic(a, b),
                           InitialData::quadratic(a + in(0.01, 1.0), b + in(0.0, 1.0)));
        break;
      }
      case 1: {  // scaled gaussian bumps
        const double a = in(0.5, 2.0), b = in(0.0, 2.0);
        pairs.emplace_back(InitialData::gaussian(a, b), InitialData::gaussian(a * in(1.01, 2.0), b));
        break;
      }
      default: {  // gaussian below a constant above its peak
        const double a = in(0.5, 2.0), b = in(0.0, 2.0);
        pairs.emplace_back(InitialData::gaussian(a, b), InitialData::constant(a + in(0.01, 1.0)));
        break;
      }
    }
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Sandwich

InitialData initial_data_from_w(const ScalarField& w0) {
  const auto& g = w0.grid();
  std::vector<std::pair<double, double>> rows;
  rows.reserve(g.size());
  double primitive = 0.0;
  rows.emplace_back(0.0, 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    primitive += 0.5 * g.dr() * (w0[i - 1] + w0[i]);
    rows.emplace_back(g.r(i), std::exp(primitive));
  }
  return InitialData::tabulated(std::move(rows));
}

namespace {

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct WRow {
  double lower, diag, upper, rhs, reaction;
};

// Frozen-coefficient row at interior node i: A w_rr + (N-1)/r w_r(upwind) + (G - (N-1)/r^2) w.
WRow w_row(std::span<const double> w, std::span<const double> v, const RadialGrid& g, int dim,
           double dt, std::size_t i) {
  const double dr = g.dr();
  const double r = g.r(i);
  const double geom = dim - 1;
  const double p = (w[i + 1] - w[i - 1]) / (2.0 * dr);
  const double log_a = w[i] == 0.0 ? 0.0 : -softplus(2.0 * (v[i] + std::log(std::abs(w[i]))));
  const double a = std::exp(log_a);
  const double s = p + w[i] * w[i];
  const double g_react = 2.0 * p * a - 2.0 * std::exp(2.0 * (v[i] + log_a)) * s * s;
  const double reaction = g_react - geom / (r * r);
  const double d = dt * a / (dr * dr);
  const double t = dt * geom / (r * dr);
  return {-d, 1.0 + 2.0 * d + t - dt * reaction, -(d + t), w[i], reaction};
}

}  // namespace

ScalarField step_w_equation(const ScalarField& w, const FlowState& coefficient, double dt,
                            Exec exec) {
  if (coefficient.form() != Form::V) throw ConfigError("step_w_equation: coefficient must be v-form");
  if (!w.same_grid(coefficient.field())) throw MismatchError("step_w_equation: grid mismatch");
  if (!(dt > 0.0)) throw ConfigError("step_w_equation: dt must be > 0");
  const auto& g = w.grid();
  const std::size_t n = g.size();
  const int dim = coefficient.dim();
  const auto v = coefficient.field().values();

  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) worst = std::max(worst, w_row(w.values(), v, g, dim, dt, i).reaction);
  const auto substeps = static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * dt * worst)));
  const double h = dt / static_cast<double>(substeps);

  std::vector<double> cur(w.values().begin(), w.values().end());
  Tridiagonal sys;
  sys.lower.assign(n, 0.0);
  sys.diag.assign(n, 1.0);
  sys.upper.assign(n, 0.0);
  sys.rhs.assign(n, 0.0);
  std::vector<double> next(n);
  for (std::size_t k = 0; k < substeps; ++k) {
    auto fill = [&](std::size_t i) {
      const auto row = w_row(cur, v, g, dim, h, i);
      sys.lower[i] = row.lower;
      sys.diag[i] = row.diag;
      sys.upper[i] = row.upper;
      sys.rhs[i] = row.rhs;
    };
    if (exec == Exec::Serial) {
      for (std::size_t i = 1; i + 1 < n; ++i) fill(i);
    } else {
#pragma omp parallel for schedule(static)
      for (std::size_t i = 1; i < n - 1; ++i) fill(i);
    }
    sys.rhs[0] = 0.0;
    sys.rhs[n - 1] = 1.0;
    if (!solve_tridiagonal(sys, next)) throw SolverError("step_w_equation: linear solve broke down");
    cur.swap(next);
  }
  return ScalarField(w.grid_ptr(), std::move(cur));
}

SandwichReport sandwich_test(const ScalarField& w0, const SolverConfig& config, double slack,
                             double converge_tol) {
  if (std::abs(w0.front()) > 1e-12 || std::abs(w0.back() - 1.0) > 1e-12) {
    throw ConfigError("sandwich_test: w0 must satisfy w0(0) = 0 and w0(1) = 1");
  }
  if (w0.size() != config.n_nodes) throw ConfigError("sandwich_test: w0 grid != solver grid");
  const auto grid = w0.grid_ptr();

  SolverConfig cfg = config;
  cfg.form = Form::V;
  cfg.boundary = BoundaryCondition::robin();
  cfg.initial = initial_data_from_w(w0);

  SandwichReport rep;
  ScalarField lo = ScalarField::sample(grid, [](double r) { return r >= 1.0 ? 1.0 : 0.0; });
  ScalarField mid = w0;
  ScalarField hi = ScalarField::sample(grid, [](double r) { return r > 0.0 ? 1.0 : 0.0; });
  const std::size_t n = lo.size();
  std::vector<double> snap_lo(lo.values().begin(), lo.values().end());
  std::vector<double> snap_hi(hi.values().begin(), hi.values().end());
  // Snapshot values are linear in time between accepted steps, as for the trajectory.
  auto check_snapshot = [&](const ScalarField& l0, const ScalarField& l1, const ScalarField& m0,
                            const ScalarField& m1, const ScalarField& h0, const ScalarField& h1,
                            double s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double l = l0[i] + s * (l1[i] - l0[i]);
      const double m = m0[i] + s * (m1[i] - m0[i]);
      const double h = h0[i] + s * (h1[i] - h0[i]);
      rep.worst_order_violation = std::max({rep.worst_order_violation, l - m, m - h});
      rep.worst_monotone_violation =
          std::max({rep.worst_monotone_violation, snap_lo[i] - l, h - snap_hi[i]});
      snap_lo[i] = l;
      snap_hi[i] = h;
    }
  };
  check_snapshot(lo, lo, mid, mid, hi, hi, 0.0);
  const auto schedule = snapshot_schedule(cfg);
  std::size_t next_snap = 1;
  const auto traj = run(cfg, [&](const FlowState& before, const FlowState& after) {
    const double dt = after.t() - before.t();
    auto lo_next = step_w_equation(lo, before, dt, cfg.exec);
    auto mid_next = step_w_equation(mid, before, dt, cfg.exec);
    auto hi_next = step_w_equation(hi, before, dt, cfg.exec);
    while (next_snap < schedule.size() && schedule[next_snap] <= after.t()) {
      const double s = (schedule[next_snap++] - before.t()) / dt;
      check_snapshot(lo, lo_next, mid, mid_next, hi, hi_next, s);
    }
    lo = std::move(lo_next);
    mid = std::move(mid_next);
    hi = std::move(hi_next);
  });

  const auto id = identity_field(grid);
  rep.final_t = traj.final_state().t();
  rep.final_distance_lower = sup_distance(lo, id);
  rep.final_distance_middle = sup_distance(mid, id);
  rep.final_distance_upper = sup_distance(hi, id);
  rep.consistency = sup_distance(mid, compute_w(traj.final_state()));
  rep.ordered = rep.worst_order_violation <= slack;
  rep.monotone = rep.worst_monotone_violation <= slack;
  rep.converged = std::max({rep.final_distance_lower, rep.final_distance_middle,
                            rep.final_distance_upper}) <= converge_tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Zero number

Translator make_translator(double k, int dim) {
  const auto entry = c_of_k(k, dim);
  return {k, entry.c, dim, phi_profile(entry.c, dim, 1.0)};
}

IntersectionRecord intersection_count(const FlowState& state, const Translator& tr, double shift,
                                      double rel_tol) {
  const auto& g = state.grid();
  const std::size_t n = g.size();
  double vmax = -HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i) vmax = std::max(vmax, state.log_u(i));
  const bool in_u = vmax < 700.0;

  std::vector<double> d(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = tr.value(g.r(i), state.t()) + shift;
    if (in_u) {
      const double u = std::exp(state.log_u(i));
      d[i] = u - target;
      scale = std::max({scale, u, std::abs(target)});
    } else {
      // compare ln u with ln(target); a non-positive target lies below any u
      d[i] = target > 0.0 ? state.log_u(i) - std::log(target) : 1.0;
      scale = std::max(scale, state.log_u(i));
    }
  }
  const double zero = rel_tol * scale;

  std::size_t count = 0;
  int last_sign = 0;
  for (double x : d) {
    if (std::abs(x) <= zero) continue;
    const int s = x > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++count;
    last_sign = s;
  }
  const double end = d.back();
  const int boundary_sign = std::abs(end) <= zero ? 0 : (end > 0.0 ? 1 : -1);
  return {state.t(), count, rel_tol, tr.k, tr.c, shift, boundary_sign};
}

std::vector<IntersectionRecord> intersection_history(const Trajectory& traj, const Translator& tr,
                                                     double shift) {
  std::vector<IntersectionRecord> out;
  out.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) out.push_back(intersection_count(s, tr, shift));
  return out;
}

bool nonincreasing(const std::vector<IntersectionRecord>& history) {
  for (std::size_t k = 1; k < history.size(); ++k) {
    if (history[k].count > history[k - 1].count) return false;
  }
  return true;
}

std::vector<std::pair<double, double>> random_translator_pairs(std::size_t count,
                                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> k(0.5, 4.0);
  std::uniform_real_distribution<double> shift(-2.0, 2.0);
  std::vector<std::pair<double, double>> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    const double kj = k(rng);
    out.emplace_back(kj, shift(rng));
  }
  return out;
}

bool nonincreasing_away_from_boundary(const std::vector<IntersectionRecord>& history) {
  for (std::size_t k = 1; k < history.size(); ++k) {
    const bool flipped = history[k].boundary_sign != history[k - 1].boundary_sign;
    if (history[k].count > history[k - 1].count + (flipped ? 1 : 0)) return false;
  }
  return true;
}

DominationReport gradient_domination(const Trajectory& traj, const Translator& tr, double r_min,
                                     double min_horizon) {
  DominationReport rep;
  const auto& s = traj.final_state();
  rep.t_final = s.t();
  const auto w = compute_w(s);
  rep.min_margin = HUGE_VAL;
  for (std::size_t i = 0; i < s.grid().size(); ++i) {
    const double r = s.grid().r(i);
    if (r < r_min - 1e-12) continue;
    const double u_r = std::exp(s.log_u(i)) * w[i];
    rep.min_margin = std::min(rep.min_margin, u_r - tr.profile.phi_prime(r));
  }
  if (rep.t_final < min_horizon || !(rep.min_margin > 0.0)) {
    rep.status = CheckStatus::Inconclusive;
  } else {
    rep.status = CheckStatus::Pass;
  }
  return rep;
}

}  // namespace mcf
