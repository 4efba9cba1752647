#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mcf/errors.hpp"
#include "mcf/soliton.hpp"
#include "oracles.hpp"

using namespace mcf;

TEST(PhiProfile, SeriesValueNearOrigin) {
  const auto p = phi_profile(1.0, 2, 1.0, 1e-10);
  EXPECT_NEAR(p.phi_prime(0.1), oracle::kPhiPrimeAt01, 1e-9);
  EXPECT_NEAR(p.phi_prime(0.1), 0.05 + 0.001 / 32.0, 1e-6);
}

TEST(PhiProfile, MatchesHighPrecisionReference) {
  const auto p = phi_profile(1.0, 2, 1.0, 1e-12);
  EXPECT_NEAR(p.phi(1.0), oracle::kPhiAt1, 1e-9);
  EXPECT_NEAR(p.phi_prime(1.0), oracle::kPhiPrimeAt1, 1e-9);
  EXPECT_EQ(p.phi(0.0), 0.0);
  EXPECT_EQ(p.phi_prime(0.0), 0.0);
}

TEST(PhiProfile, OneDimensionalIsTangent) {
  const auto p = phi_profile(1.0, 1, 1.2, 1e-10);
  double err = 0.0;
  for (std::size_t j = 0; j < p.r_samples.size(); ++j) {
    err = std::max(err, std::abs(p.phi_prime_samples[j] - std::tan(p.r_samples[j])));
  }
  EXPECT_LE(err, 1e-8);
  EXPECT_NEAR(p.phi(1.0), oracle::kGrimReaperAt1, 1e-8);
}

TEST(PhiProfile, ZeroSpeedIsFlat) {
  const auto p = phi_profile(0.0, 2, 1.0);
  for (double x : p.phi_samples) EXPECT_EQ(x, 0.0);
  for (double x : p.phi_prime_samples) EXPECT_EQ(x, 0.0);
}

TEST(PhiProfile, BadParameters) {
  EXPECT_THROW(phi_profile(-1.0, 2, 1.0), ConfigError);
  EXPECT_THROW(phi_profile(1.0, 2, 0.5), ConfigError);
  EXPECT_THROW(phi_profile(2.0, 1, 1.0), SolverError);  // tan(2 r) blows up at r = pi/4
}

TEST(PhiProfile, ShapeInvariants) {
  for (int dim : {2, 3, 5}) {
    for (double c : {0.3, 1.0, 4.0}) {
      const auto p = phi_profile(c, dim, 3.0);
      for (std::size_t j = 1; j < p.r_samples.size(); ++j) {
        const double r = p.r_samples[j], q = p.phi_prime_samples[j];
        EXPECT_GT(q, p.phi_prime_samples[j - 1]);
        EXPECT_GT(translator_rhs(c, dim, r, q), 0.0);
        EXPECT_LT(q, c * r / (dim - 1));
      }
    }
  }
}

TEST(PhiProfile, SlopeIncreasesWithSpeed) {
  for (int dim : {2, 3}) {
    double prev = 0.0;
    for (double c = 0.25; c <= 6.0; c += 0.25) {
      const double s = boundary_slope(c, dim);
      EXPECT_GT(s, prev);
      prev = s;
    }
  }
  EXPECT_TRUE(std::isinf(boundary_slope(1.6, 1)));
}

TEST(SpeedSlope, OneDimensionalArctan) {
  const auto e = c_of_k(1.0, 1);
  EXPECT_NEAR(e.c, oracle::kQuarterPi, 1e-8);
  for (double k : {0.1, 0.5, 2.0, 10.0}) EXPECT_NEAR(c_of_k(k, 1).c, std::atan(k), 1e-8) << k;
}

TEST(SpeedSlope, LowerBoundResidualAndMonotone) {
  for (int dim : {2, 3}) {
    double prev = 0.0;
    for (double k : {0.5, 1.0, 2.0, 4.0}) {
      const auto e = c_of_k(k, dim);
      EXPECT_LE(e.residual, 1e-8);
      EXPECT_NEAR(boundary_slope(e.c, dim), k, 1e-8);
      EXPECT_GE(e.c, (dim - 1) * k);
      EXPECT_GT(e.c, prev);
      EXPECT_EQ(e.dim, dim);
      prev = e.c;
    }
  }
}

TEST(SpeedSlope, NonPositiveSlopeRejected) {
  EXPECT_THROW(c_of_k(0.0, 2), ConfigError);
  EXPECT_THROW(c_of_k(-1.0, 2), ConfigError);
}

TEST(GrimReaper, ClosedForm) {
  EXPECT_EQ(grim_reaper(1.0, 0.0), 0.0);
  EXPECT_NEAR(grim_reaper(1.0, 1.0), oracle::kGrimReaperAt1, 1e-15);
  EXPECT_THROW(grim_reaper(std::numbers::pi / 2, 1.0), DomainError);
  // c = pi/2 diverges like -(2/pi) ln cos(pi r / 2) as r -> 1
  EXPECT_GT(grim_reaper(std::numbers::pi / 2, 0.999999), 8.0);
}

TEST(GrimReaper, ResidualOfClosedFormIsTiny) {
  EXPECT_LE(soliton_residual(grim_reaper_profile(1.0, 1.2)), 1e-8);
}

TEST(Residual, IntegratedProfileAndCorruption) {
  auto p = phi_profile(1.0, 2, 1.0, 1e-10);
  EXPECT_LE(soliton_residual(p), 1e-6);
  for (auto& q : p.phi_prime_samples) q += 1e-3 * std::sin(40.0 * q);
  p.phi_prime_samples[p.phi_prime_samples.size() / 2] += 1e-3;
  EXPECT_GT(soliton_residual(p), 1e-4);
}

TEST(Paraboloid, RatioApproachesOne) {
  const double r10 = paraboloid_ratio(phi_profile(1.0, 2, 10.0));
  const double r20 = paraboloid_ratio(phi_profile(1.0, 2, 20.0));
  const double r50 = paraboloid_ratio(phi_profile(1.0, 2, 50.0));
  EXPECT_GE(r50, 0.95);
  EXPECT_LE(r50, 1.05);
  EXPECT_LT(std::abs(r20 - 1.0), std::abs(r10 - 1.0));
  EXPECT_LT(std::abs(r50 - 1.0), std::abs(r20 - 1.0));
  const double r3 = paraboloid_ratio(phi_profile(2.0, 3, 50.0));
  EXPECT_GE(r3, 0.95);
  EXPECT_LE(r3, 1.05);
  EXPECT_THROW(paraboloid_ratio(grim_reaper_profile(1.0, 1.2)), ConfigError);
}
