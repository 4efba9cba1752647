#include "mcf/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/errors.hpp"

namespace mcf {

ScalarField derivative(const ScalarField& f) {
  const auto& grid = f.grid();
  const std::size_t n = f.size();
  const double h = grid.dr();
  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return ScalarField(f.grid_ptr(), std::move(d));
}

double sup_distance(const ScalarField& f, const ScalarField& g) {
  if (!f.same_grid(g)) throw MismatchError("sup_distance: fields live on different grids");
  return max_abs_diff(f.values(), g.values());
}

ScalarField identity_field(GridPtr grid) {
  return ScalarField::sample(std::move(grid), [](double r) { return r; });
}

ScalarField pde_residual(const FlowState& earlier, const FlowState& later, BoundaryCondition bc,
                         Operator op) {
  if (earlier.form() != later.form()) throw MismatchError("pde_residual: mixed forms");
  if (!earlier.field().same_grid(later.field())) {
    throw MismatchError("pde_residual: states on different grids");
  }
  if (earlier.dim() != later.dim()) throw MismatchError("pde_residual: mixed dimensions");
  const double delta = later.t() - earlier.t();
  if (!(delta > 0.0)) throw std::invalid_argument("pde_residual: later state must follow earlier");

  const auto& grid = later.grid();
  const auto f = later.field().values();
  const auto f0 = earlier.field().values();
  const std::size_t n = f.size();
  std::vector<double> res(n);
  evaluate_operator(later.form(), later.dim(), grid, f, op, res);
  for (std::size_t i = 0; i + 1 < n; ++i) res[i] = (f[i] - f0[i]) / delta - res[i];

  const double slope = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * grid.dr());
  double target = 1.0;
  if (later.form() == Form::U) {
    target = bc.kind == BoundaryCondition::Kind::Robin ? f[n - 1] : bc.slope;
  }
  res[n - 1] = slope - target;
  return ScalarField(later.field().grid_ptr(), std::move(res));
}

}  // namespace mcf
