#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "latticewalk/asymptotics.hpp"
#include "latticewalk/cumulant.hpp"
#include "latticewalk/errors.hpp"
#include "latticewalk/exact_kernel.hpp"
#include "latticewalk/lattice_adapters.hpp"
#include "latticewalk/saddle.hpp"

using namespace latticewalk;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(TriangularModel, GoldenConstants) {
  auto m = triangular_model();
  EXPECT_EQ(m.period(), 1);
  EXPECT_EQ(m.support_size(), 6u);
  auto b0 = hessian_log_kappa(m, Vec::Zero(2));
  EXPECT_NEAR(b0.det, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(b0.matrix(0, 1), -1.0 / 3.0, 1e-15);
  double total = 0;
  for (double p : m.probabilities()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(TriangularModel, PlaneCoordinates) {
  auto p = TriangularPoint{1, 1}.plane();
  EXPECT_NEAR(p[0], 0.0, 1e-15);
  EXPECT_NEAR(p[1], std::sqrt(3.0), 1e-15);
  EXPECT_EQ((TriangularPoint{3, -2}.image()), (Point{3, -2}));
}

TEST(HexQModel, GoldenConstants) {
  auto q = hexagonal_q_model();
  EXPECT_EQ(q.period(), 1);
  EXPECT_NEAR(hessian_log_kappa(q, Vec::Zero(2)).det, 4.0 / 27.0, 1e-12);
  const auto& sup = q.support();
  for (std::size_t i = 0; i < sup.size(); ++i)
    if (sup[i] == Point{0, 0}) EXPECT_NEAR(q.probabilities()[i], 1.0 / 3.0, 1e-16);
}

TEST(HexPoint, TauAndNeighbours) {
  EXPECT_EQ(HexPoint::tau_of(0, 0), 0);
  EXPECT_EQ(HexPoint::tau_of(1, 0), 1);
  EXPECT_EQ(HexPoint::tau_of(0, 1), 2);
  EXPECT_EQ(HexPoint::tau_of(-1, 0), 2);
  EXPECT_THROW(HexPoint::make(1, 0), Error);
  for (std::int64_t j = -6; j <= 6; ++j)
    for (std::int64_t jp = -6; jp <= 6; ++jp) {
      if (HexPoint::tau_of(j, jp) == 1) continue;
      const auto x = HexPoint::make(j, jp);
      for (const auto& y : x.neighbours()) {
        EXPECT_NE(y.tau, x.tau);
        EXPECT_NE(y.tau, 1);
        // Neighbour relation is symmetric and neighbours sit at unit distance.
        int back = 0;
        for (const auto& z : y.neighbours()) back += z == x;
        EXPECT_EQ(back, 1);
        const auto a = TriangularPoint{x.j, x.jp}.plane(), b = TriangularPoint{y.j, y.jp}.plane();
        EXPECT_NEAR(std::hypot(a[0] - b[0], a[1] - b[1]), 1.0, 1e-12);
      }
    }
  // Two steps on H move by a lattice vector in the tau = 0 class.
  for (const auto& y : HexPoint{}.neighbours())
    for (const auto& z : y.neighbours()) EXPECT_EQ(z.tau, 0);
}

TEST(HexPoint, QImage) {
  EXPECT_EQ((HexPoint{0, 0, 0}.q_image()), (Point{0, 0}));
  EXPECT_EQ((HexPoint{1, 1, 0}.q_image()), (Point{1, 0}));
  EXPECT_EQ((HexPoint{-1, 2, 0}.q_image()), (Point{0, 1}));
  EXPECT_THROW(HexPoint::make(0, 1).q_image(), Error);
}

TEST(HexPointValue, Examples) {
  EXPECT_NEAR(hex_point(2, HexPoint{}), 1.0 / 3.0, 1e-16);
  for (const auto& y : HexPoint{}.neighbours()) EXPECT_NEAR(hex_point(1, y), 1.0 / 3.0, 1e-16);
  EXPECT_EQ(hex_point(3, HexPoint{}), 0.0);
  EXPECT_EQ(hex_point(2, HexPoint::make(0, 1)), 0.0);
  EXPECT_EQ(hex_point(4, HexPoint::make(30, 0)), 0.0);
}

TEST(HexPointValue, MatchesGraphDp) {
  for (int n = 1; n <= 30; ++n) {
    auto viaq = hex_table(n);
    auto dp = hex_graph_dp(n);
    ASSERT_EQ(viaq.size(), dp.size());
    double worst = 0;
    for (std::size_t i = 0; i < dp.size(); ++i) worst = std::max(worst, std::abs(viaq[i] - dp[i]));
    EXPECT_LE(worst, 1e-12) << n;
  }
}

TEST(HexPointValue, MassIsOne) {
  for (int n = 1; n <= 100; ++n) {
    auto t = hex_table(n);
    double total = 0;
    for (std::size_t i = 0; i < t.size(); ++i) total += t[i];
    EXPECT_NEAR(total, 1.0, 1e-12 * n) << n;
  }
}

TEST(HexAsymptotic, OriginEvenN) {
  // Origin at even n: (2 pi n)^{-1} 3 sqrt3 with phi_q(0) = 0.
  for (int n : {2, 10, 100}) EXPECT_NEAR(hex_asymptotic(n, HexPoint{}), 3 * std::sqrt(3.0) / (2 * kPi * n), 1e-15);
  EXPECT_EQ(hex_asymptotic(11, HexPoint{}), 0.0);
  EXPECT_EQ(hex_asymptotic(10, HexPoint::make(0, 1)), 0.0);
  EXPECT_THROW(hex_asymptotic(1, HexPoint::make(0, 1)), Error);
}

TEST(HexAsymptotic, AccurateAgainstExact) {
  const auto x = HexPoint::make(30, 31);
  ASSERT_EQ(x.tau, 2);
  const double exact = hex_point(201, x);
  const double th7 = hex_asymptotic(201, x, 1e-2, HexFormula::theorem7);
  EXPECT_LT(std::abs(th7 / exact - 1), 0.01);
  // The constant-prefactor form carries an O(|delta|) error: 6.8% at n=201,
  // shrinking as the velocity of the fixed point goes to zero.
  double prev = INFINITY;
  for (int n : {201, 401, 801}) {
    const double err = std::abs(hex_asymptotic(n, x) / hex_point(n, x) - 1);
    EXPECT_LT(err, prev) << n;
    prev = err;
  }
  EXPECT_LT(std::abs(hex_asymptotic(201, x) / exact - 1), 0.08);
  EXPECT_LT(prev, 0.005);

  const auto y = HexPoint::make(30, 0);
  EXPECT_LT(std::abs(hex_asymptotic(200, y) / hex_point(200, y) - 1), 0.05);
  EXPECT_LT(std::abs(hex_asymptotic(200, HexPoint{}) / hex_point(200, HexPoint{}) - 1), 0.01);

  auto d = hex_delta(201, x);
  EXPECT_NEAR(d[0], 91.0 / 603.0, 1e-16);
  EXPECT_NEAR(d[1], 1.0 / 603.0, 1e-16);
}

TEST(HexAsymptotic, ExponentComparability) {
  // For odd n the three neighbour images differ from n delta by O(1); the
  // exponents n phi_q at the shifted velocities stay within a bounded gap.
  auto q = hexagonal_q_model();
  for (int n : {51, 101, 201}) {
    const std::int64_t m = (n - 1) / 2;
    for (std::int64_t j = -n / 4; j <= n / 4; j += 7)
      for (std::int64_t jp = -n / 4; jp <= n / 4; jp += 5) {
        if (HexPoint::tau_of(j, jp) != 2) continue;
        const auto x = HexPoint::make(j, jp);
        const Vec delta = 2.0 * hex_delta(n, x);
        const double base = m * phi(q, delta);
        for (const auto& y : x.neighbours()) {
          const double shifted = m * phi(q, velocity(y.q_image(), m));
          EXPECT_LE(std::abs(base - shifted), 4.0 * (1.0 + delta.lpNorm<1>())) << n << " " << j << " " << jp;
        }
      }
  }
}

TEST(TriangularAsymptotic, AccurateNearOrigin) {
  auto tri = triangular_model();
  auto t = convolve_kernel(tri, 100);
  for (std::int64_t a = -10; a <= 10; a += 2)
    for (std::int64_t b = -10; b <= 10; b += 2) {
      const TriangularPoint x{a, b};
      if (tri.hull().dist_boundary(velocity(x.image(), 100)) < 0.25) continue;
      const double exact = t.at(x.image());
      EXPECT_LT(std::abs(triangular_asymptotic(100, x) / exact - 1), 0.03) << a << " " << b;
    }
  EXPECT_NEAR(triangular_asymptotic(100, {0, 0}), std::sqrt(3.0) / (2 * kPi * 100), 1e-15);
}
