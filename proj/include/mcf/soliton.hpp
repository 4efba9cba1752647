#pragma once

#include <vector>

namespace mcf {

/// Translator profile phi_c sampled on a uniform r-grid starting at 0.
struct SolitonProfile {
  double c = 0.0;
  int dim = 2;
  double r_start = 1e-4;     // series-to-integrator handoff radius
  double integrator_tol = 1e-10;
  double spacing = 1e-3;     // r_samples[j] = j * spacing
  std::vector<double> r_samples;
  std::vector<double> phi_samples;
  std::vector<double> phi_prime_samples;

  double r_max() const { return r_samples.back(); }
  /// Cubic Hermite interpolation between samples; r in [0, r_max].
  double phi(double r) const;
  double phi_prime(double r) const;
};

/// phi'' = (c - (N-1) phi'/r)(1 + phi'^2), with the r -> 0 limit c/N (1 + phi'^2) at phi' = 0.
double translator_rhs(double c, int dim, double r, double phi_prime);

/// Integrates the translator ODE on [0, r_max]. c = 0 yields phi = 0.
/// Throws ConfigError for c < 0 or r_max < 1, SolverError if phi' stops increasing
/// or blows up before r_max.
SolitonProfile phi_profile(double c, int dim, double r_max, double tol = 1e-10,
                           double spacing = 1e-3);

/// phi'_c(1), or +infinity when the profile blows up inside [0, 1] (N = 1, c >= pi/2).
double boundary_slope(double c, int dim, double tol = 1e-12);

struct SpeedSlopeEntry {
  double k = 0.0;
  double c = 0.0;
  int dim = 2;
  double residual = 0.0;  // |phi'_c(1) - k|
};

/// Unique speed whose translator has boundary slope k, by bisection on c.
SpeedSlopeEntry c_of_k(double k, int dim, double tol = 1e-8);

/// N = 1 translator -(1/c) ln cos(c r). Throws DomainError when |c r| >= pi/2.
double grim_reaper(double c, double r);

/// Samples of the closed-form N = 1 translator on [0, r_max].
SolitonProfile grim_reaper_profile(double c, double r_max, double spacing = 1e-3);

/// phi(r_max) / (c r_max^2 / (2(N-1))). Throws ConfigError for N = 1.
double paraboloid_ratio(const SolitonProfile& profile);

/// max_j |phi''_num - (c - (N-1) phi'/r)(1 + phi'^2)|, phi''_num from fourth-order
/// differences of the phi' samples.
double soliton_residual(const SolitonProfile& profile);

}  // namespace mcf
