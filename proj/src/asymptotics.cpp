#include "mcf/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/calculus.hpp"
#include "mcf/errors.hpp"

namespace mcf {

namespace {

void require_v_form(const Trajectory& traj, const char* who) {
  if (traj.snapshots.empty()) throw ConfigError(std::string(who) + ": empty trajectory");
  for (const auto& s : traj.snapshots) {
    if (s.form() != Form::V) {
      throw ConfigError(std::string(who) + ": needs a v-form trajectory (w(1) is exact only there)");
    }
  }
}

TimeSeries center_from_snapshots(const Trajectory& traj) {
  TimeSeries s;
  for (const auto& snap : traj.snapshots) s.push(snap.t(), snap.log_u(0));
  return s;
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Warn: return "WARN";
    case CheckStatus::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

bool AsymptoticsReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckOutcome& c) { return c.status == CheckStatus::Fail; });
}

TimeSeries epsilon_series(const Trajectory& traj) {
  require_v_form(traj, "epsilon_series");
  TimeSeries out;
  const auto id = identity_field(traj.snapshots.front().field().grid_ptr());
  for (const auto& s : traj.snapshots) out.push(s.t(), sup_distance(compute_w(s), id));
  return out;
}

TimeSeries H_series(const Trajectory& traj) {
  require_v_form(traj, "H_series");
  TimeSeries out;
  for (const auto& s : traj.snapshots) {
    out.push(s.t(), std::exp(s.field()[0] - (s.dim() - 1) * s.t()));
  }
  return out;
}

std::pair<double, double> fit_C0(const TimeSeries& H) {
  if (H.size() < 4) throw ConfigError("fit_C0: need at least 4 samples");
  const double t0 = H.t(0), tf = H.t(H.size() - 1);
  if (!(tf >= 2.0 * t0) || !(tf > 0.0)) {
    throw ConfigError("fit_C0: samples must span a factor of 2 in t");
  }
  const double estimate = H.value(H.size() - 1);
  const double defect = std::abs(estimate / H.at(0.5 * tf) - 1.0);
  return {estimate, defect};
}

TimeSeries growth_rate(const Trajectory& traj) {
  if (traj.snapshots.size() < 2) throw ConfigError("growth_rate: need at least 2 snapshots");
  const auto c = center_from_snapshots(traj);
  const std::size_t n = c.size();
  TimeSeries out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = k + 1 == n ? n - 1 : k + 1;
    out.push(c.t(k), (c.value(b) - c.value(a)) / (c.t(b) - c.t(a)));
  }
  return out;
}

double mean_rate(const Trajectory& traj, double a, double b) {
  if (!(b > a)) throw std::invalid_argument("mean_rate: empty window");
  const auto c = center_from_snapshots(traj);
  return (c.at(b) - c.at(a)) / (b - a);
}

TimeSeries profile_deviation(const Trajectory& traj) {
  require_v_form(traj, "profile_deviation");
  TimeSeries out;
  for (const auto& s : traj.snapshots) {
    const auto& g = s.grid();
    const double v0 = s.field()[0];
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.r(i);
      worst = std::max(worst, std::abs(s.field()[i] - v0 - 0.5 * r * r));
    }
    out.push(s.t(), worst);
  }
  return out;
}

AsymptoticsReport report(const Trajectory& traj, const AsymptoticsThresholds& th) {
  require_v_form(traj, "report");
  AsymptoticsReport rep;
  rep.dim = traj.snapshots.front().dim();
  rep.epsilon_series = epsilon_series(traj);
  rep.H_series = H_series(traj);
  rep.rate_series = growth_rate(traj);
  rep.profile_deviation_series = profile_deviation(traj);
  std::tie(rep.C0_estimate, rep.C0_cauchy_defect) = fit_C0(rep.H_series);

  const double tf = traj.snapshots.back().t();
  const double ta = std::max(0.0, tf - th.rate_window);
  const double expected = rep.dim - 1;
  rep.mean_rate = mean_rate(traj, ta, tf);
  rep.h_window_ratio = rep.H_series.at(tf) / rep.H_series.at(ta);

  auto add = [&](std::string name, double value, double threshold, bool ok,
                 CheckStatus bad = CheckStatus::Fail) {
    rep.checks.push_back({std::move(name), value, threshold, ok ? CheckStatus::Pass : bad});
  };
  const double eps_f = rep.epsilon_series.value(rep.epsilon_series.size() - 1);
  add("epsilon", eps_f, th.epsilon_max, eps_f <= th.epsilon_max);

  double worst_rise = 0.0;
  for (std::size_t k = 1; k < rep.epsilon_series.size(); ++k) {
    if (rep.epsilon_series.t(k - 1) < th.burn_in) continue;
    worst_rise = std::max(worst_rise, rep.epsilon_series.value(k) - rep.epsilon_series.value(k - 1));
  }
  add("epsilon_monotone", worst_rise, th.monotone_slack, worst_rise <= th.monotone_slack,
      CheckStatus::Warn);

  const double dev_f = rep.profile_deviation_series.value(rep.profile_deviation_series.size() - 1);
  add("profile_deviation", dev_f, th.profile_deviation_max, dev_f <= th.profile_deviation_max);

  const double rate_err = std::abs(rep.mean_rate - expected);
  const double rate_tol = th.rate_rel_tol * std::max(expected, 1.0);
  add("rate", rate_err, rate_tol, rate_err <= rate_tol);

  const double h_dev = std::abs(rep.h_window_ratio - 1.0);
  add("H_ratio", h_dev, th.h_ratio_max, h_dev <= th.h_ratio_max);
  add("C0_cauchy", rep.C0_cauchy_defect, th.cauchy_defect_max,
      rep.C0_cauchy_defect <= th.cauchy_defect_max);
  return rep;
}

}  // namespace mcf
