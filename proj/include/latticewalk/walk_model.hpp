#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "latticewalk/convex_geometry.hpp"
#include "latticewalk/dense_box.hpp"
#include "latticewalk/int_lattice.hpp"
#include "latticewalk/types.hpp"
#include "latticewalk/walk_spec.hpp"

namespace latticewalk {

struct WalkOptions {
  /// The period is declared final once the running gcd of return times has
  /// been unchanged for period_window_factor * d * range consecutive steps.
  int period_window_factor = 4;
  /// Largest n for which n-step supports are expanded.
  int step_budget = 256;
  /// Cap on the boolean support box, in bytes.
  std::size_t mem_budget_bytes = std::size_t{256} << 20;
};

/// Smallest m with p(m; x) > 0 and its residue class j = m mod r.
struct ClassIndex {
  Point x;
  std::int64_t m_x = 0;
  int j = 0;
};

enum class Irreducibility { irreducible, reducible, inconclusive };

const char* to_string(Irreducibility value);

/// Validated finite-range walk with its derived structure. Immutable.
class WalkModel {
 public:
  /// Throws WeightSumError, ParseError, DegenerateSupport, NotIrreducible or
  /// SearchBudgetExceeded.
  static WalkModel validate(WalkSpec spec, const WalkOptions& options = {});

  const WalkSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  std::size_t support_size() const { return support_.size(); }
  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return prob_; }
  const std::vector<double>& log_probabilities() const { return log_prob_; }
  /// Step vectors as a (support_size x d) real matrix, row per step.
  const Eigen::MatrixXd& step_matrix() const { return steps_; }

  int period() const { return period_; }
  const Vec& mean() const { return mean_; }
  const Polytope& hull() const { return hull_; }
  /// max over V of ||v||_1.
  std::int64_t range() const { return range_; }
  /// Per-axis min and max step coordinates.
  const Point& axis_min() const { return axis_min_; }
  const Point& axis_max() const { return axis_max_; }
  const WalkOptions& options() const { return options_; }

  /// Lattice generated by the differences v - v' of support vectors.
  const SubLattice& difference_lattice() const { return diff_lattice_; }
  /// Class j in [0, r) with x in X_j, from the difference lattice.
  int class_of(const Point& x) const;
  /// True iff n is congruent to m_x mod r, i.e. p(n; x) can be positive.
  bool on_class(std::int64_t n, const Point& x) const;

  /// True when this is the simple walk: p(+-e_j) = 1/(2d).
  bool is_simple_walk() const;

 private:
  WalkSpec spec_;
  WalkOptions options_;
  std::vector<Point> support_;
  std::vector<double> prob_, log_prob_;
  Eigen::MatrixXd steps_;
  int period_ = 0;
  Vec mean_;
  Polytope hull_;
  std::int64_t range_ = 0;
  Point axis_min_, axis_max_;
  SubLattice diff_lattice_{1, {}};
};

/// Boolean n-step support: the box holds 1 where some n-step path ends.
DenseBox<std::uint8_t> n_step_support(const WalkModel& model, int n);

/// gcd of return times by support iteration (see WalkOptions).
int period(const WalkModel& model);

/// m_x by breadth-first expansion of supports; SearchBudgetExceeded past
/// options().step_budget.
ClassIndex class_index(const WalkModel& model, const Point& x);

/// Exact lattice test plus reachability of every +-e_j within the budget.
/// Support hulls that miss 0 in their interior are reported reducible.
Irreducibility irreducibility(const WalkSpec& spec, const WalkOptions& options = {});

}  // namespace latticewalk
