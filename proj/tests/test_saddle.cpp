#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "latticewalk/builtins.hpp"
#include "latticewalk/cumulant.hpp"
#include "latticewalk/errors.hpp"
#include "latticewalk/lattice_adapters.hpp"
#include "latticewalk/saddle.hpp"

using namespace latticewalk;

namespace {

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Closed form for the simple walk on Z: phi(t) = ((1+t)log(1+t) + (1-t)log(1-t)) / 2.
double phi_simple1d(double t) {
  return 0.5 * ((1 + t) * std::log1p(t) + (1 - t) * std::log1p(-t));
}

}  // namespace

TEST(SolveSaddle, SimpleWalkHalf) {
  auto m = load_model("simple-d1");
  auto sp = solve_saddle(m, vec1(0.5));
  EXPECT_NEAR(sp.s[0], 0.5 * std::log(3.0), 1e-12);
  EXPECT_NEAR(sp.phi, 0.130812035941137, 1e-12);
  EXPECT_NEAR(sp.phi, phi_simple1d(0.5), 1e-14);
  EXPECT_LE(sp.objective_gap, 1e-12);
  EXPECT_NEAR(sp.b_s.matrix(0, 0), 0.75, 1e-12);
}

TEST(SolveSaddle, SimpleWalkNearBoundary) {
  auto m = load_model("simple-d1");
  auto sp = solve_saddle(m, vec1(0.99));
  EXPECT_NEAR(sp.s[0], 0.5 * std::log(199.0), 1e-10);
  EXPECT_NEAR(sp.phi, 0.661668114612779, 1e-10);
  EXPECT_NEAR(std::exp(sp.log_kappa), std::cosh(0.5 * std::log(199.0)), 1e-10);
}

TEST(SolveSaddle, ZeroMeanTargetGivesZero) {
  for (const auto& name : builtin_names()) {
    auto m = load_model(name);
    auto sp = solve_saddle(m, m.mean());
    EXPECT_LT(sp.s.norm(), 1e-12) << name;
    EXPECT_NEAR(sp.phi, 0.0, 1e-15) << name;
  }
}

TEST(SolveSaddle, ClosedFormAcrossInterval) {
  auto m = load_model("simple-d1");
  for (double t = -0.95; t <= 0.951; t += 0.05) {
    EXPECT_NEAR(phi(m, vec1(t)), phi_simple1d(t), 1e-12) << t;
  }
}

TEST(SolveSaddle, ProductStructureOnSimpleD2) {
  // phi on Z^2 is not a sum of 1-d rate functions, but at (t, 0) the
  // maximizer has s_2 = 0 and kappa reduces to (cosh s + 1)/2.
  auto m = load_model("simple-d2");
  auto sp = solve_saddle(m, vec2(0.3, 0));
  EXPECT_NEAR(sp.s[1], 0.0, 1e-14);
  const double s = sp.s[0];
  EXPECT_NEAR(std::sinh(s) / (std::cosh(s) + 1), 0.3, 1e-12);
  EXPECT_NEAR(sp.phi, 0.3 * s - std::log((std::cosh(s) + 1) / 2), 1e-13);
}

TEST(SolveSaddle, RefusesBoundaryAndOutside) {
  auto m = load_model("simple-d1");
  EXPECT_THROW(solve_saddle(m, vec1(1.0)), NotInInterior);
  EXPECT_THROW(solve_saddle(m, vec1(1.2)), NotInInterior);
  EXPECT_THROW(solve_saddle(m, vec1(1.0 - 1e-7)), NotInInterior);
  SaddleOptions opt;
  opt.allow_near_boundary = true;
  auto sp = solve_saddle(m, vec1(1.0 - 1e-7), opt);
  EXPECT_NEAR(sp.phi, phi_simple1d(1.0 - 1e-7), 1e-9);
  EXPECT_THROW(solve_saddle(m, vec1(1.0), opt), NotInInterior);
}

TEST(SolveSaddle, MaxIterationsCarriesGap) {
  auto m = load_model("simple-d2");
  SaddleOptions opt;
  opt.max_iterations = 1;
  try {
    solve_saddle(m, vec2(0.9, 0.05), opt);
    FAIL() << "expected MaxIterations";
  } catch (const MaxIterations& e) {
    EXPECT_GT(e.gap(), 1e-12);
    EXPECT_EQ(e.iterations(), 1);
  }
}

TEST(PhiTaylor, QuadraticNearMean) {
  auto m = load_model("simple-d2");
  // 1/2 * 2 * |delta|^2 = |delta|^2.
  EXPECT_NEAR(phi_taylor_reference(m, vec2(0.1, 0.1)), 0.02, 1e-15);
  EXPECT_NEAR(phi_taylor_reference(triangular_model(), vec2(0.1, 0)), 0.01, 1e-15);
  for (double h : {0.1, 0.05, 0.02, 0.01}) {
    const Vec d = vec2(h, h);
    const double ratio = phi(m, d) / phi_taylor_reference(m, d);
    EXPECT_NEAR(ratio, 1.0, 3 * h * h + 1e-9) << h;
  }
}

TEST(RateFunction, WarmStartMatchesColdSolve) {
  auto m = triangular_model();
  RateFunction rf(m);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int t = 0; t < 200; ++t) {
    const Vec d = vec2(u(rng), u(rng));
    if (m.hull().dist_boundary(d) < 1e-3) continue;
    const double warm = rf(d, true);
    EXPECT_NEAR(warm, phi(m, d), 1e-12);
  }
}

TEST(SaddleProperties, GradientIsSaddle) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> w(0, 1);
  for (const auto& name : builtin_names()) {
    auto m = load_model(name);
    const int d = m.dim();
    for (int t = 0; t < 50; ++t) {
      // Convex combination of support points pulled toward the mean.
      Vec delta = Vec::Zero(d);
      double tot = 0;
      for (const auto& v : m.support()) {
        const double a = w(rng);
        delta += a * to_vec(v);
        tot += a;
      }
      delta = 0.8 * delta / tot + 0.2 * m.mean();
      if (m.hull().dist_boundary(delta) < 1e-3) continue;
      auto sp = solve_saddle(m, delta);
      // grad phi(delta) = s by central differences.
      const double h = 1e-5;
      for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = h;
        const double fd = (phi(m, delta + e) - phi(m, delta - e)) / (2 * h);
        EXPECT_NEAR(fd, sp.s[i], 1e-5 * std::max(1.0, std::abs(sp.s[i]))) << name;
      }
      // Hess phi(delta) = B_s^{-1}.
      const Mat inv = sp.b_s.matrix.inverse();
      const double hh = 1e-4;
      for (int i = 0; i < d; ++i) {
        Vec e = Vec::Zero(d);
        e[i] = hh;
        const double fd = (phi(m, delta + e) - 2 * sp.phi + phi(m, delta - e)) / (hh * hh);
        EXPECT_NEAR(fd, inv(i, i), 1e-3 * std::abs(inv(i, i))) << name;
      }
      // Legendre duality: phi(delta) + log kappa(s) = <s, delta>.
      EXPECT_NEAR(sp.phi + log_kappa(m, sp.s), sp.s.dot(delta), 1e-12 * std::max(1.0, sp.s.norm()));
      EXPECT_GE(sp.phi, 0.0);
    }
  }
}

TEST(SaddleProperties, ConvexAlongSegments) {
  auto m = triangular_model();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 100; ++t) {
    const Vec a = vec2(u(rng), u(rng)), b = vec2(u(rng), u(rng));
    if (m.hull().dist_boundary(a) < 1e-3 || m.hull().dist_boundary(b) < 1e-3) continue;
    for (double lam : {0.25, 0.5, 0.75}) {
      const Vec c = lam * a + (1 - lam) * b;
      EXPECT_LE(phi(m, c), lam * phi(m, a) + (1 - lam) * phi(m, b) + 1e-12);
    }
  }
}

TEST(SaddleProperties, SmallestEigenvalueDecaysOnRays) {
  // ||B_s^{-1}|| grows toward the boundary along a ray from the mean.
  auto m = load_model("simple-d2");
  const Vec dir = vec2(0.8, 0.15);
  double prev = 0.0;
  for (double t : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    const double inv_norm = solve_saddle(m, t * dir / (dir.lpNorm<1>())).b_s.inv_norm;
    EXPECT_GT(inv_norm, prev);
    prev = inv_norm;
  }
}
