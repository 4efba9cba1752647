#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcf/asymptotics.hpp"
#include "mcf/evolve.hpp"
#include "mcf/grid.hpp"
#include "mcf/soliton.hpp"

namespace mcf {

// ---------------------------------------------------------------------------
// Barriers
// ---------------------------------------------------------------------------

/// Closed-form sub/supersolutions:
///   SubU   m0 e^{(r^2-1)/2 + (N-1)t}       lower solution of the u-problem
///   SuperU M0 e^{r^2/2 + N t}, M0 >= 1     upper solution of the u-problem
///   SubW   m- e^{-(N-1)t},  m- < 0         lower solution of the w-problem
///   SuperW m+ e^{-(N-1)t},  m+ > 1         upper solution of the w-problem for t <= T+
struct BarrierSpec {
  enum class Kind { SubU, SuperU, SubW, SuperW };
  Kind kind = Kind::SubU;
  double param = 1.0;
  int dim = 2;

  /// Throws ConfigError on an invalid parameter (SuperU with M0 < 1 in particular).
  void validate() const;
  /// ln m+ / (N-1); +infinity for N = 1. Only meaningful for SuperW.
  double t_plus() const;
  bool is_lower() const { return kind == Kind::SubU || kind == Kind::SubW; }
};

const char* to_string(BarrierSpec::Kind kind);

struct BarrierReport {
  BarrierSpec spec;
  std::size_t samples = 0;
  double min_residual = 0.0;  // residual = operator - time derivative
  double max_residual = 0.0;
  double min_boundary_defect = 0.0;
  double max_boundary_defect = 0.0;
  double worst_signed_violation = 0.0;  // largest residual on the wrong side, relative
  bool certified = false;
};

/// Barrier value with its exact derivatives.
struct BarrierJet {
  double value, d_r, d_rr, d_t;
};
BarrierJet barrier_jet(const BarrierSpec& spec, double r, double t);

/// Residual (RHS - time derivative) of the barrier at one (r, t) sample, from closed-form
/// derivatives. For w-barriers the u entering the coefficients is e^{(N-1)t + r^2/2}; the
/// sign does not depend on that choice. Interior residual at r = 0 is skipped for w-barriers.
double barrier_point_residual(const BarrierSpec& spec, double r, double t);

/// Evaluates residuals on every (node, time) pair. Throws ConfigError for invalid specs and
/// DomainError if SuperW is sampled past T+. Certifies the sign with relative slack 1e-12.
BarrierReport barrier_residual(const BarrierSpec& spec, const RadialGrid& grid,
                               const std::vector<double>& times, Exec exec = Exec::Serial);

// ---------------------------------------------------------------------------
// Discrete comparison principle
// ---------------------------------------------------------------------------

struct ComparisonReport {
  bool passed = false;
  double worst_gap = 0.0;  // max over snapshots and nodes of u_low - u_high
  std::size_t snapshots = 0;
};

/// Evolves both initial data with the same config and checks u_low <= u_high + tol throughout.
/// Throws ConfigError when the inputs are not ordered on the grid.
ComparisonReport comparison_test(const InitialData& low, const InitialData& high,
                                 const SolverConfig& config, double tol = 1e-10);

/// Same check between a trajectory and a lower barrier evaluated at its snapshot times.
ComparisonReport compare_with_barrier(const Trajectory& traj, const BarrierSpec& lower,
                                      double tol = 1e-10);

/// Runs a batch of comparison tests, one per pair; parallel over pairs.
std::vector<ComparisonReport> comparison_sweep(
    const std::vector<std::pair<InitialData, InitialData>>& pairs, const SolverConfig& config,
    double tol = 1e-10, Exec exec = Exec::Serial);

/// Random smooth ordered pairs (quadratic / gaussian presets) from a fixed seed.
std::vector<std::pair<InitialData, InitialData>> random_ordered_pairs(std::size_t count,
                                                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// w-sandwich
// ---------------------------------------------------------------------------

struct SandwichReport {
  bool ordered = false;          // w- <= w <= w+ at every snapshot (slack)
  bool monotone = false;         // w- nondecreasing, w+ nonincreasing in t
  bool converged = false;        // all three within converge_tol of r at the final snapshot
  double worst_order_violation = 0.0;
  double worst_monotone_violation = 0.0;
  double final_distance_lower = 0.0;
  double final_distance_middle = 0.0;
  double final_distance_upper = 0.0;
  double final_t = 0.0;
  double consistency = 0.0;  // sup |w_mid - u_r/u| of the driving flow at the final time

  bool passed() const { return ordered && monotone && converged; }
};

/// u_0 = exp(trapezoidal primitive of w_0), normalised by u_0(0) = 1, as node table.
InitialData initial_data_from_w(const ScalarField& w0);

/// One implicit step of w_t = [(w_r + w^2)/(1 + u^2 w^2) + (N-1) w/r]_r with w(0) = 0,
/// w(1) = 1 and u = exp(v) taken from `coefficient` (v-form). Transport is upwinded so
/// every step matrix is an M-matrix; dt is split internally when needed.
ScalarField step_w_equation(const ScalarField& w, const FlowState& coefficient, double dt,
                            Exec exec = Exec::Serial);

/// Evolves the v-form flow started from u_0 = exp(int w0) and, driven by its u(r,t),
/// three solutions of the w-equation from 0, w0 and 1. Ordering is checked after every
/// accepted step, monotonicity between consecutive steps. Requires w0(0) = 0, w0(1) = 1.
SandwichReport sandwich_test(const ScalarField& w0, const SolverConfig& config,
                             double slack = 1e-8, double converge_tol = 0.05);

// ---------------------------------------------------------------------------
// Zero number
// ---------------------------------------------------------------------------

/// phi(r; k) + c(k) t on [0, 1].
struct Translator {
  double k = 0.0;
  double c = 0.0;
  int dim = 2;
  SolitonProfile profile;

  double value(double r, double t) const { return profile.phi(r) + c * t; }
};

Translator make_translator(double k, int dim);

struct IntersectionRecord {
  double t = 0.0;
  std::size_t count = 0;
  double tolerance = 1e-9;  // relative zero threshold
  double k = 0.0;
  double c = 0.0;
  double shift = 0.0;
  int boundary_sign = 0;  // sign of d at r = 1 (0 when within tolerance)
};

/// Sign changes of u - (phi + c t + shift) across the nodes. Entries below rel_tol times the
/// largest compared value count as zero; zero runs collapse.
IntersectionRecord intersection_count(const FlowState& state, const Translator& tr, double shift,
                                      double rel_tol = 1e-9);

/// Counts at every snapshot of a trajectory.
std::vector<IntersectionRecord> intersection_history(const Trajectory& traj, const Translator& tr,
                                                     double shift);

bool nonincreasing(const std::vector<IntersectionRecord>& history);

/// (k, shift) pairs with k uniform in [0.5, 4] and shift uniform in [-2, 2].
std::vector<std::pair<double, double>> random_translator_pairs(std::size_t count,
                                                               std::uint64_t seed);

/// Nonincreasing except that one crossing may enter between two records whose
/// boundary signs differ (the translator is not a solution of the Robin problem).
bool nonincreasing_away_from_boundary(const std::vector<IntersectionRecord>& history);

struct DominationReport {
  CheckStatus status = CheckStatus::Inconclusive;
  double t_final = 0.0;
  double min_margin = 0.0;  // min over r >= r_min of u_r - phi'(r; k)
};

/// u_r(r, t_f) > phi'(r; k) for r >= r_min at the last snapshot. Asymptotic statement:
/// horizons below min_horizon, or a margin that is not yet positive, are inconclusive.
DominationReport gradient_domination(const Trajectory& traj, const Translator& tr,
                                     double r_min = 0.1, double min_horizon = 5.0);

}  // namespace mcf
