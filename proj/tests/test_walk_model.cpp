#include <gtest/gtest.h>

#include "latticewalk/builtins.hpp"
#include "latticewalk/cumulant.hpp"
#include "latticewalk/errors.hpp"
#include "latticewalk/exact_kernel.hpp"
#include "latticewalk/lattice_adapters.hpp"
#include "latticewalk/walk_model.hpp"

using namespace latticewalk;

// =============================================================================
// validate
// =============================================================================

TEST(Validate, SimpleWalkOnZ) {
  auto m = WalkModel::validate(simple_walk_spec(1));
  EXPECT_EQ(m.period(), 2);
  EXPECT_DOUBLE_EQ(m.mean()[0], 0.0);
  EXPECT_EQ(m.range(), 1);
  EXPECT_TRUE(m.is_simple_walk());
}

TEST(Validate, LazyWalkIsAperiodic) {
  auto m = WalkModel::validate(lazy_walk_spec());
  EXPECT_EQ(m.period(), 1);
  EXPECT_FALSE(m.is_simple_walk());
}

TEST(Validate, RejectsSupportInALine) {
  auto spec = parse_walkspec("dim 2\nstep 1 0 1/2\nstep -1 0 1/2\n");
  EXPECT_THROW(WalkModel::validate(spec), DegenerateSupport);
}

TEST(Validate, RejectsBadWeights) {
  EXPECT_THROW(WalkModel::validate(parse_walkspec("dim 1\nstep 1 1/2\nstep -1 1/4\n")), WeightSumError);
}

TEST(Validate, RejectsNonIrreducible) {
  // Generates 2Z only.
  EXPECT_THROW(WalkModel::validate(parse_walkspec("dim 1\nstep 2 1/2\nstep -2 1/2\n")), NotIrreducible);
  // Drifts to the right forever.
  EXPECT_THROW(WalkModel::validate(parse_walkspec("dim 1\nstep 1 1/2\nstep 2 1/2\n")), NotIrreducible);
}

TEST(Validate, NonCenteredWalkHasMeanInsideHull) {
  auto m = WalkModel::validate(parse_walkspec("dim 1\nstep 1 2/3\nstep -1 1/3\n"));
  EXPECT_NEAR(m.mean()[0], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(m.period(), 2);
  EXPECT_GT(m.hull().dist_boundary(m.mean()), 0.0);
}

// =============================================================================
// period
// =============================================================================

TEST(Period, SimpleWalksHavePeriodTwo) {
  for (int d = 1; d <= 3; ++d) EXPECT_EQ(period(WalkModel::validate(simple_walk_spec(d))), 2) << "d=" << d;
}

TEST(Period, TriangularAndHexQAreAperiodic) {
  EXPECT_EQ(period(triangular_model()), 1);
  EXPECT_EQ(period(hexagonal_q_model()), 1);
}

TEST(Period, ThreeStepCycle) {
  // Returns need a multiple of 5 steps: 2 * 3 = 3 * 2.
  auto m = WalkModel::validate(parse_walkspec("dim 1\nstep 3 1/2\nstep -2 1/2\n"));
  EXPECT_EQ(m.period(), 5);
  EXPECT_EQ(unitary_set(m).cardinality, 5);
}

TEST(Period, BudgetExhaustion) {
  WalkOptions opt;
  opt.step_budget = 3;
  auto spec = parse_walkspec("dim 1\nstep 3 1/2\nstep -2 1/2\n");
  EXPECT_THROW(WalkModel::validate(spec, opt), SearchBudgetExceeded);
}

// =============================================================================
// class_index
// =============================================================================

TEST(ClassIndex, Examples) {
  auto s1 = WalkModel::validate(simple_walk_spec(1));
  auto c = class_index(s1, Point{3});
  EXPECT_EQ(c.m_x, 3);
  EXPECT_EQ(c.j, 1);

  auto s2 = WalkModel::validate(simple_walk_spec(2));
  c = class_index(s2, Point{1, 1});
  EXPECT_EQ(c.m_x, 2);
  EXPECT_EQ(c.j, 0);

  auto lazy = WalkModel::validate(lazy_walk_spec());
  c = class_index(lazy, Point{0});
  EXPECT_EQ(c.m_x, 1);
  EXPECT_EQ(c.j, 0);
}

TEST(ClassIndex, BudgetExceeded) {
  WalkOptions opt;
  opt.step_budget = 8;
  auto m = WalkModel::validate(simple_walk_spec(1), opt);
  EXPECT_THROW(class_index(m, Point{9}), SearchBudgetExceeded);
}

TEST(ClassIndex, AgreesWithLatticeClass) {
  for (const auto& name : builtin_names()) {
    auto m = load_model(name);
    const int d = m.dim();
    const int r = d == 3 ? 3 : 5;
    Point x(d, -r);
    for (;;) {
      EXPECT_EQ(class_index(m, x).j, m.class_of(x)) << name << " x=" << format_point(x);
      int j = d - 1;
      while (j >= 0 && ++x[j] > r) x[j--] = -r;
      if (j < 0) break;
    }
  }
}

// =============================================================================
// irreducibility
// =============================================================================

TEST(Irreducibility, Examples) {
  EXPECT_EQ(irreducibility(simple_walk_spec(2)), Irreducibility::irreducible);
  EXPECT_EQ(irreducibility(parse_walkspec("dim 1\nstep 2 1/2\nstep -2 1/2\n")), Irreducibility::reducible);
  EXPECT_EQ(irreducibility(triangular_spec()), Irreducibility::irreducible);
}

TEST(Irreducibility, InconclusiveWhenBudgetTooSmall) {
  // -1 = 3 - 2 - 2 needs three steps.
  auto spec = parse_walkspec("dim 1\nstep 3 1/2\nstep -2 1/2\n");
  WalkOptions opt;
  opt.step_budget = 2;
  EXPECT_EQ(irreducibility(spec, opt), Irreducibility::inconclusive);
  EXPECT_EQ(irreducibility(spec), Irreducibility::irreducible);
}

// =============================================================================
// Invariants
// =============================================================================

TEST(WalkModelInvariants, KernelSupportStaysInClass) {
  for (const auto& name : builtin_names()) {
    auto m = load_model(name);
    const int n_max = m.dim() == 3 ? 20 : 50;
    KernelStepper stepper(m);
    for (int n = 1; n <= n_max; ++n) {
      const auto& t = stepper.step();
      for (std::size_t f = 0; f < t.values.size(); ++f)
        if (t.values[f] > 0.0) ASSERT_EQ(m.class_of(t.values.point(f)), n % m.period()) << name << " n=" << n;
    }
  }
}

TEST(WalkModelInvariants, SupportBoxMatchesKernelSupport) {
  auto m = triangular_model();
  auto support = n_step_support(m, 7);
  auto table = convolve_kernel(m, 7);
  ASSERT_EQ(support.size(), table.values.size());
  for (std::size_t f = 0; f < support.size(); ++f) EXPECT_EQ(support[f] != 0, table.values[f] > 0.0);
}
