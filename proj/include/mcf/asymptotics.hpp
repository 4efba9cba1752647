#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mcf/evolve.hpp"
#include "mcf/grid.hpp"

namespace mcf {

enum class CheckStatus { Pass, Fail, Warn, Inconclusive };

const char* to_string(CheckStatus s);

struct CheckOutcome {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  CheckStatus status = CheckStatus::Pass;
};

struct AsymptoticsThresholds {
  double epsilon_max = 0.05;
  double profile_deviation_max = 0.02;
  double rate_rel_tol = 0.02;    // |mean rate - (N-1)| <= rate_rel_tol * (N-1)
  double rate_window = 5.0;      // mean rate and H ratio over [t_f - window, t_f]
  double h_ratio_max = 0.01;     // |H(t_f)/H(t_f - window) - 1|
  double cauchy_defect_max = 0.01;
  double burn_in = 5.0;
  double monotone_slack = 1e-3;
};

struct AsymptoticsReport {
  int dim = 2;
  TimeSeries epsilon_series;
  TimeSeries H_series;
  TimeSeries rate_series;
  TimeSeries profile_deviation_series;
  double C0_estimate = 0.0;
  double C0_cauchy_defect = 0.0;
  double mean_rate = 0.0;
  double h_window_ratio = 0.0;
  std::vector<CheckOutcome> checks;

  /// No check failed (warnings allowed).
  bool passed() const;
};

/// sup_r |w - r| per snapshot. Rejects u-form trajectories.
TimeSeries epsilon_series(const Trajectory& traj);
/// exp(v(0,t) - (N-1)t) per snapshot.
TimeSeries H_series(const Trajectory& traj);
/// (C0 estimate = H(t_f), defect = |H(t_f)/H(t_f/2) - 1|). Needs >= 4 samples spanning a factor 2 in t.
std::pair<double, double> fit_C0(const TimeSeries& H);
/// Centered difference quotients of v(0,t) along the snapshot schedule.
TimeSeries growth_rate(const Trajectory& traj);
/// (v(0,b) - v(0,a)) / (b - a) from snapshot values, linear in t between snapshots.
double mean_rate(const Trajectory& traj, double a, double b);
/// max_r |v(r,t) - v(0,t) - r^2/2| per snapshot.
TimeSeries profile_deviation(const Trajectory& traj);

AsymptoticsReport report(const Trajectory& traj, const AsymptoticsThresholds& thresholds = {});

}  // namespace mcf
