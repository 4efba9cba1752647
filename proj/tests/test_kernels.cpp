#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mcf/kernels.hpp"
#include "oracles.hpp"

using namespace mcf;

TEST(Tridiagonal, MatchesDenseElimination) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {3u, 10u, 64u}) {
    Tridiagonal sys(n);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      sys.lower[i] = i > 0 ? u(rng) : 0.0;
      sys.upper[i] = i + 1 < n ? u(rng) : 0.0;
      sys.diag[i] = 2.5 + u(rng);
      sys.rhs[i] = u(rng);
      dense[i][i] = sys.diag[i];
      if (i > 0) dense[i][i - 1] = sys.lower[i];
      if (i + 1 < n) dense[i][i + 1] = sys.upper[i];
    }
    std::vector<double> x(n);
    ASSERT_TRUE(solve_tridiagonal(sys, x));
    const auto ref = oracle::dense_solve(dense, sys.rhs);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(x[i], ref[i], 1e-13);
  }
}

TEST(Tridiagonal, VanishingPivotFails) {
  Tridiagonal sys(3);
  sys.diag = {1.0, 1.0, 1.0};
  sys.upper = {1.0, 0.0, 0.0};
  sys.lower = {0.0, 1.0, 0.0};
  sys.rhs = {1.0, 1.0, 1.0};
  std::vector<double> x(3);
  EXPECT_FALSE(solve_tridiagonal(sys, x));
}

TEST(CurvatureCoefficient, MatchesDirectFormulaAndLimits) {
  for (double v : {-3.0, 0.0, 0.5, 4.0}) {
    for (double p : {-2.0, 0.1, 1.0, 3.0}) {
      EXPECT_NEAR(curvature_coefficient_v(v, p), 1.0 / (1.0 + std::exp(2 * v) * p * p), 1e-15);
    }
  }
  EXPECT_EQ(curvature_coefficient_v(1e3, 0.0), 1.0);
  EXPECT_EQ(curvature_coefficient_v(800.0, 1.0), 0.0);
  EXPECT_GT(curvature_coefficient_v(-800.0, 1.0), 0.0);
}

TEST(Operator, ExactOnQuadraticUForm) {
  const auto g = build_grid(21);
  const auto f = ScalarField::sample(g, [](double r) { return 1.0 + r * r; });
  for (int dim : {1, 2, 3}) {
    std::vector<double> out(g->size(), -99.0);
    evaluate_operator(Form::U, dim, *g, f.values(), Operator::Full, out);
    EXPECT_NEAR(out[0], 2.0 * dim, 1e-11);
    for (std::size_t i = 1; i + 1 < g->size(); ++i) {
      const double r = g->r(i);
      EXPECT_NEAR(out[i], 2.0 / (1.0 + 4 * r * r) + 2.0 * (dim - 1), 1e-10);
    }
    EXPECT_EQ(out.back(), -99.0);
  }
}

TEST(Operator, FirstOrderLimitDropsCurvature) {
  const auto g = build_grid(21);
  const auto f = ScalarField::sample(g, [](double r) { return 0.5 * r * r; });
  std::vector<double> out(g->size());
  evaluate_operator(Form::V, 3, *g, f.values(), Operator::FirstOrderLimit, out);
  for (std::size_t i = 0; i + 1 < g->size(); ++i) EXPECT_NEAR(out[i], 2.0, 1e-11);
}

TEST(ImplicitSystem, ConsistentWithOperatorForSmallSteps) {
  const auto g = build_grid(41);
  const auto f = ScalarField::sample(g, [](double r) { return 0.2 + 0.4 * r * r + 0.1 * std::cos(3 * r); });
  for (Form form : {Form::U, Form::V}) {
    std::vector<double> op(g->size());
    evaluate_operator(form, 2, *g, f.values(), Operator::Full, op);
    for (double dt : {1e-6, 1e-7}) {
      Tridiagonal sys;
      assemble_implicit_system(form, 2, *g, f.values(), dt, BoundaryCondition::robin(), sys);
      std::vector<double> x(g->size());
      ASSERT_TRUE(solve_tridiagonal(sys, x));
      for (std::size_t i = 0; i + 1 < g->size(); ++i) {
        EXPECT_NEAR((x[i] - f[i]) / dt, op[i], 2e-2) << to_string(form) << " node " << i;
      }
    }
  }
}

TEST(ImplicitSystem, ZeroStepIsIdentity) {
  const auto g = build_grid(21);
  const auto f = ScalarField::sample(g, [](double r) { return 1.0 + r; });
  Tridiagonal sys;
  assemble_implicit_system(Form::U, 2, *g, f.values(), 0.0, BoundaryCondition::neumann(1.0), sys);
  std::vector<double> x(g->size());
  ASSERT_TRUE(solve_tridiagonal(sys, x));
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_DOUBLE_EQ(x[i], f[i]);
}

class SerialParallel : public ::testing::TestWithParam<Form> {};

TEST_P(SerialParallel, KernelsAgreeBitwise) {
  const Form form = GetParam();
  const auto g = build_grid(1001);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> f(g->size());
  for (auto& x : f) x = u(rng);

  std::vector<double> a(g->size()), b(g->size());
  evaluate_operator(form, 3, *g, f, Operator::Full, a, Exec::Serial);
  evaluate_operator(form, 3, *g, f, Operator::Full, b, Exec::Parallel);
  EXPECT_EQ(a, b);

  Tridiagonal s1, s2;
  assemble_implicit_system(form, 3, *g, f, 1e-3, BoundaryCondition::robin(), s1, Exec::Serial);
  assemble_implicit_system(form, 3, *g, f, 1e-3, BoundaryCondition::robin(), s2, Exec::Parallel);
  EXPECT_EQ(s1.lower, s2.lower);
  EXPECT_EQ(s1.diag, s2.diag);
  EXPECT_EQ(s1.upper, s2.upper);
  EXPECT_EQ(s1.rhs, s2.rhs);

  EXPECT_EQ(max_abs_diff(a, f, Exec::Serial), max_abs_diff(a, f, Exec::Parallel));
}

INSTANTIATE_TEST_SUITE_P(Forms, SerialParallel, ::testing::Values(Form::U, Form::V));
