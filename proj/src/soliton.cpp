#include "mcf/soliton.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "mcf/errors.hpp"

namespace mcf {

namespace odeint = boost::numeric::odeint;

namespace {

using OdeState = std::array<double, 2>;  // (phi, phi')

constexpr double kBlowUp = 1e12;

struct BlowUp {};

struct TranslatorOde {
  double c;
  int dim;
  void operator()(const OdeState& y, OdeState& dy, double r) const {
    dy[0] = y[1];
    dy[1] = translator_rhs(c, dim, r, y[1]);
  }
};

/// Two-term series phi' = (c/N) r + c^3/(N^3 (N+2)) r^3 about the origin.
OdeState series_start(double c, int dim, double r) {
  const double n = dim;
  const double a = c / n;
  const double b = c * c * c / (n * n * n * (n + 2.0));
  return {0.5 * a * r * r + 0.25 * b * r * r * r * r, a * r + b * r * r * r};
}

double hermite(double x0, double h, double f0, double f1, double d0, double d1, double x) {
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * f1 +
         (s3 - s2) * h * d1;
}

std::size_t bracket_index(const SolitonProfile& p, double r) {
  if (r < 0.0 || r > p.r_max() * (1.0 + 1e-14)) {
    throw DomainError("soliton profile queried outside [0, r_max]: r = " + std::to_string(r));
  }
  const auto last = p.r_samples.size() - 1;
  const auto j = static_cast<std::size_t>(r / p.spacing);
  return std::min(j, last - 1);
}

}  // namespace

double translator_rhs(double c, int dim, double r, double phi_prime) {
  const double growth = 1.0 + phi_prime * phi_prime;
  if (r == 0.0) return c / dim * growth;
  return (c - (dim - 1) * phi_prime / r) * growth;
}

double SolitonProfile::phi(double r) const {
  const auto j = bracket_index(*this, r);
  return hermite(r_samples[j], spacing, phi_samples[j], phi_samples[j + 1], phi_prime_samples[j],
                 phi_prime_samples[j + 1], r);
}

double SolitonProfile::phi_prime(double r) const {
  const auto j = bracket_index(*this, r);
  const double d0 = translator_rhs(c, dim, r_samples[j], phi_prime_samples[j]);
  const double d1 = translator_rhs(c, dim, r_samples[j + 1], phi_prime_samples[j + 1]);
  return hermite(r_samples[j], spacing, phi_prime_samples[j], phi_prime_samples[j + 1], d0, d1, r);
}

SolitonProfile phi_profile(double c, int dim, double r_max, double tol, double spacing) {
  if (!(c >= 0.0)) throw ConfigError("phi_profile: speed must be > 0");
  if (dim < 1) throw ConfigError("phi_profile: dimension must be >= 1");
  if (!(r_max >= 1.0)) throw ConfigError("phi_profile: r_max must be >= 1");
  if (!(tol > 0.0) || !(spacing > 0.0)) throw ConfigError("phi_profile: bad tolerance/spacing");

  SolitonProfile p;
  p.c = c;
  p.dim = dim;
  p.integrator_tol = tol;
  const auto intervals = static_cast<std::size_t>(std::ceil(r_max / spacing - 1e-9));
  p.spacing = r_max / static_cast<double>(intervals);
  const std::size_t n_samples = intervals + 1;
  p.r_samples.resize(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) p.r_samples[j] = static_cast<double>(j) * p.spacing;
  p.r_samples.back() = r_max;
  p.phi_samples.assign(n_samples, 0.0);
  p.phi_prime_samples.assign(n_samples, 0.0);
  if (c == 0.0) return p;  // phi_0 = 0

  // Samples below the handoff radius come from the series itself.
  std::size_t first = 1;
  while (first < n_samples && p.r_samples[first] <= p.r_start) {
    const auto y = series_start(c, dim, p.r_samples[first]);
    p.phi_samples[first] = y[0];
    p.phi_prime_samples[first] = y[1];
    ++first;
  }
  if (first == n_samples) return p;

  OdeState y = series_start(c, dim, p.r_start);
  std::vector<double> times;
  times.reserve(n_samples - first + 1);
  times.push_back(p.r_start);
  for (std::size_t j = first; j < n_samples; ++j) times.push_back(p.r_samples[j]);

  std::size_t j = first;
  double prev_slope = p.phi_prime_samples[first - 1];
  auto observe = [&](const OdeState& s, double r) {
    if (r == p.r_start) return;
    if (!std::isfinite(s[1]) || std::abs(s[1]) > kBlowUp) throw BlowUp{};
    if (!(s[1] > prev_slope)) {
      throw SolverError("phi_profile: phi' not increasing at r = " + std::to_string(r) +
                        "; tighten the integrator tolerance");
    }
    prev_slope = s[1];
    p.phi_samples[j] = s[0];
    p.phi_prime_samples[j] = s[1];
    ++j;
  };
  try {
    odeint::integrate_times(odeint::make_controlled<odeint::runge_kutta_dopri5<OdeState>>(tol, tol),
                            TranslatorOde{c, dim}, y, times.begin(), times.end(), p.r_start * 0.1,
                            observe);
  } catch (const BlowUp&) {
    throw SolverError("phi_profile: translator with c = " + std::to_string(c) +
                      " blows up before r_max");
  }

  if (dim >= 2) {
    const double bound = c / (dim - 1);
    for (std::size_t i = 1; i < n_samples; ++i) {
      if (!(p.phi_prime_samples[i] < bound * p.r_samples[i])) {
        throw SolverError("phi_profile: barrier phi' < c r/(N-1) violated at r = " +
                          std::to_string(p.r_samples[i]));
      }
    }
  }
  return p;
}

double boundary_slope(double c, int dim, double tol) {
  if (c == 0.0) return 0.0;
  const double r_start = 1e-4;
  OdeState y = series_start(c, dim, r_start);
  auto guard = [](const OdeState& s, double) {
    if (!std::isfinite(s[1]) || std::abs(s[1]) > kBlowUp) throw BlowUp{};
  };
  try {
    odeint::integrate_adaptive(odeint::make_controlled<odeint::runge_kutta_dopri5<OdeState>>(tol, tol),
                               TranslatorOde{c, dim}, y, r_start, 1.0, r_start * 0.1, guard);
  } catch (const BlowUp&) {
    return std::numeric_limits<double>::infinity();
  } catch (const odeint::step_adjustment_error&) {
    return std::numeric_limits<double>::infinity();
  }
  return std::isfinite(y[1]) ? y[1] : std::numeric_limits<double>::infinity();
}

SpeedSlopeEntry c_of_k(double k, int dim, double tol) {
  if (!(k > 0.0)) throw ConfigError("c_of_k: slope k must be > 0");
  if (dim < 1) throw ConfigError("c_of_k: dimension must be >= 1");
  const double ode_tol = std::min(1e-12, tol * 1e-3);

  double lo = (dim - 1) * k;
  double hi = std::max(dim * k, 1.0);
  int doublings = 0;
  while (boundary_slope(hi, dim, ode_tol) < k) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) throw SolverError("c_of_k: bracket expansion did not terminate");
  }

  SpeedSlopeEntry e{k, hi, dim, HUGE_VAL};
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double slope = boundary_slope(mid, dim, ode_tol);
    const double residual = std::abs(slope - k);
    if (residual < e.residual) e = {k, mid, dim, residual};
    if (residual <= tol) break;
    (slope < k ? lo : hi) = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return e;
}

double grim_reaper(double c, double r) {
  const double x = c * r;
  if (!(std::abs(x) < 0.5 * std::numbers::pi)) {
    throw DomainError("grim_reaper: |c r| must be < pi/2");
  }
  if (c == 0.0) return 0.0;
  return -std::log(std::cos(x)) / c;
}

SolitonProfile grim_reaper_profile(double c, double r_max, double spacing) {
  SolitonProfile p;
  p.c = c;
  p.dim = 1;
  p.r_start = 0.0;
  p.integrator_tol = 0.0;
  const auto intervals = static_cast<std::size_t>(std::ceil(r_max / spacing - 1e-9));
  p.spacing = r_max / static_cast<double>(intervals);
  const std::size_t n_samples = intervals + 1;
  for (std::size_t j = 0; j < n_samples; ++j) {
    const double r = j + 1 == n_samples ? r_max : static_cast<double>(j) * p.spacing;
    p.r_samples.push_back(r);
    p.phi_samples.push_back(grim_reaper(c, r));
    p.phi_prime_samples.push_back(std::tan(c * r));
  }
  return p;
}

double paraboloid_ratio(const SolitonProfile& profile) {
  if (profile.dim < 2) throw ConfigError("paraboloid_ratio: no paraboloid asymptotics for N = 1");
  const double r = profile.r_max();
  return profile.phi_samples.back() / (profile.c * r * r / (2.0 * (profile.dim - 1)));
}

double soliton_residual(const SolitonProfile& profile) {
  const auto& f = profile.phi_prime_samples;
  const std::size_t n = f.size();
  if (n < 5) throw ConfigError("soliton_residual: need at least 5 samples");
  const double h = profile.spacing;
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d2;
    if (j >= 2 && j + 2 < n) {
      d2 = (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) / (12.0 * h);
    } else if (j < 2) {
      d2 = (-25.0 * f[j] + 48.0 * f[j + 1] - 36.0 * f[j + 2] + 16.0 * f[j + 3] - 3.0 * f[j + 4]) /
           (12.0 * h);
    } else {
      d2 = (25.0 * f[j] - 48.0 * f[j - 1] + 36.0 * f[j - 2] - 16.0 * f[j - 3] + 3.0 * f[j - 4]) /
           (12.0 * h);
    }
    const double rhs = translator_rhs(profile.c, profile.dim, profile.r_samples[j], f[j]);
    worst = std::max(worst, std::abs(d2 - rhs));
  }
  return worst;
}

}  // namespace mcf
