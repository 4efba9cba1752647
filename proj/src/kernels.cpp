#include "mcf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mcf/errors.hpp"

namespace mcf {

namespace {

struct Row {
  double lower, diag, upper, rhs;
};

inline double central(std::span<const double> f, std::size_t i, double dr) {
  return (f[i + 1] - f[i - 1]) / (2.0 * dr);
}

inline double second(std::span<const double> f, std::size_t i, double dr) {
  return (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (dr * dr);
}

double operator_at(Form form, int dim, const RadialGrid& grid, std::span<const double> f,
                   Operator op, std::size_t i) {
  const double dr = grid.dr();
  const double geom = dim - 1;
  if (i == 0) {
    // f_r(0) = 0 with ghost f_{-1} = f_1, so (N-1) f_r / r -> (N-1) f_rr.
    const double frr = 2.0 * (f[1] - f[0]) / (dr * dr);
    return op == Operator::FirstOrderLimit ? geom * frr : dim * frr;
  }
  const double r = grid.r(i);
  const double p = central(f, i, dr);
  const double transport = geom * p / r;
  if (op == Operator::FirstOrderLimit) return transport;
  const double frr = second(f, i, dr);
  if (form == Form::U) return frr / (1.0 + p * p) + transport;
  return (frr + p * p) * curvature_coefficient_v(f[i], p) + transport;
}

Row row_at(Form form, int dim, const RadialGrid& grid, std::span<const double> f, double dt,
           BoundaryCondition bc, std::size_t i) {
  const double dr = grid.dr();
  const double dr2 = dr * dr;
  const double geom = dim - 1;
  const std::size_t last = f.size() - 1;

  if (i == 0) {
    const double k = 2.0 * dim * dt / dr2;
    return {0.0, 1.0 + k, -k, f[0]};
  }
  if (i == last) {
    // Ghost node f_n = f_{n-2} + 2 dr g closes the row at second order.
    if (form == Form::V) {
      const double a = curvature_coefficient_v(f[i], 1.0);
      const double k = 2.0 * dt * a / dr2;
      return {-k, 1.0 + k, 0.0, f[i] + dt * (a * (2.0 / dr + 1.0) + geom)};
    }
    if (bc.kind == BoundaryCondition::Kind::Robin) {
      const double a = 1.0 / (1.0 + f[i] * f[i]);
      const double k = 2.0 * dt * a / dr2;
      return {-k, 1.0 + k - 2.0 * dt * a / dr - dt * geom, 0.0, f[i]};
    }
    const double g = bc.slope;
    const double a = 1.0 / (1.0 + g * g);
    const double k = 2.0 * dt * a / dr2;
    return {-k, 1.0 + k, 0.0, f[i] + dt * (2.0 * a * g / dr + geom * g)};
  }

  const double r = grid.r(i);
  const double p = central(f, i, dr);
  double diffusion = 0.0;
  double drift = geom / r;
  if (form == Form::U) {
    diffusion = 1.0 / (1.0 + p * p);
  } else {
    diffusion = curvature_coefficient_v(f[i], p);
    drift += diffusion * p;  // a v_r^2 linearised as a (v_r)_old (v_r)_new
  }
  const double d = dt * diffusion / dr2;
  const double b = dt * drift / (2.0 * dr);
  return {-(d - b), 1.0 + 2.0 * d, -(d + b), f[i]};
}

void check_sizes(const RadialGrid& grid, std::size_t n) {
  if (grid.size() != n) throw MismatchError("kernel: field size does not match grid");
}

}  // namespace

double curvature_coefficient_v(double v, double p) {
  if (p == 0.0) return 1.0;
  const double x = 2.0 * (v + std::log(std::abs(p)));
  if (x > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(x));
}

bool solve_tridiagonal(const Tridiagonal& sys, std::span<double> x) {
  const std::size_t n = sys.size();
  if (x.size() != n || n == 0) throw std::invalid_argument("solve_tridiagonal: size mismatch");
  std::vector<double> c(n), d(n);
  double pivot = sys.diag[0];
  if (!(std::abs(pivot) > 1e-300)) return false;
  c[0] = sys.upper[0] / pivot;
  d[0] = sys.rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = sys.diag[i] - sys.lower[i] * c[i - 1];
    if (!(std::abs(pivot) > 1e-300) || !std::isfinite(pivot)) return false;
    c[i] = sys.upper[i] / pivot;
    d[i] = (sys.rhs[i] - sys.lower[i] * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  for (double xi : x) {
    if (!std::isfinite(xi)) return false;
  }
  return true;
}

void evaluate_operator(Form form, int dim, const RadialGrid& grid, std::span<const double> f,
                       Operator op, std::span<double> out, Exec exec) {
  check_sizes(grid, f.size());
  check_sizes(grid, out.size());
  const auto n = static_cast<long>(f.size()) - 1;
  if (exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) out[i] = operator_at(form, dim, grid, f, op, i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = operator_at(form, dim, grid, f, op, i);
}

void assemble_implicit_system(Form form, int dim, const RadialGrid& grid,
                              std::span<const double> f, double dt, BoundaryCondition bc,
                              Tridiagonal& sys, Exec exec) {
  check_sizes(grid, f.size());
  if (sys.size() != f.size()) sys = Tridiagonal(f.size());
  const auto n = static_cast<long>(f.size());
  auto store = [&](long i) {
    const Row row = row_at(form, dim, grid, f, dt, bc, static_cast<std::size_t>(i));
    sys.lower[i] = row.lower;
    sys.diag[i] = row.diag;
    sys.upper[i] = row.upper;
    sys.rhs[i] = row.rhs;
  };
  if (exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) store(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) store(i);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b, Exec exec) {
  if (a.size() != b.size()) throw MismatchError("max_abs_diff: length mismatch");
  const auto n = static_cast<long>(a.size());
  double m = 0.0;
  if (exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }
#pragma omp parallel for reduction(max : m) schedule(static)
  for (long i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace mcf
