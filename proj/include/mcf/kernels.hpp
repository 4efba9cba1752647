#pragma once

// Node-local loops of the solver. Every kernel has a serial reference path and an
// OpenMP path sharing the same per-node body; tests require bitwise agreement.

#include <span>
#include <vector>

#include "mcf/grid.hpp"

namespace mcf {

enum class Exec { Serial, Parallel };

/// Boundary condition at r = 1: Robin u_r = u (v_r = 1 in v-form) or fixed slope u_r = k.
struct BoundaryCondition {
  enum class Kind { Robin, Neumann };
  Kind kind = Kind::Robin;
  double slope = 0.0;

  static BoundaryCondition robin() { return {}; }
  static BoundaryCondition neumann(double k) { return {Kind::Neumann, k}; }
};

/// Spatial operator variant. FirstOrderLimit drops the curvature term (v_t = (N-1) v_r / r).
enum class Operator { Full, FirstOrderLimit };

struct Tridiagonal {
  std::vector<double> lower, diag, upper, rhs;
  explicit Tridiagonal(std::size_t n = 0) : lower(n), diag(n), upper(n), rhs(n) {}
  std::size_t size() const { return diag.size(); }
};

/// Thomas algorithm. Returns false on a vanishing pivot or a non-finite result.
bool solve_tridiagonal(const Tridiagonal& sys, std::span<double> x);

/// 1 / (1 + e^{2v} p^2) without overflow.
double curvature_coefficient_v(double v, double p);

/// Evaluates the discrete spatial operator at nodes 0 .. n-2. The origin uses the
/// ghost-node limit N * f_rr; node n-1 is left untouched (it carries the boundary row).
void evaluate_operator(Form form, int dim, const RadialGrid& grid, std::span<const double> f,
                       Operator op, std::span<double> out, Exec exec = Exec::Serial);

/// Frozen-coefficient backward Euler system (I - dt L[f]) f_new = f for one step.
void assemble_implicit_system(Form form, int dim, const RadialGrid& grid,
                              std::span<const double> f, double dt, BoundaryCondition bc,
                              Tridiagonal& sys, Exec exec = Exec::Serial);

/// max_i |a_i - b_i|
double max_abs_diff(std::span<const double> a, std::span<const double> b,
                    Exec exec = Exec::Serial);

}  // namespace mcf
