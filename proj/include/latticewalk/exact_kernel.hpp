#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

#include "latticewalk/dense_box.hpp"
#include "latticewalk/types.hpp"
#include "latticewalk/walk_model.hpp"

namespace latticewalk {

struct KernelOptions {
  /// Cap on a single table or DFT grid, in bytes.
  std::size_t mem_budget_bytes = std::size_t{1} << 30;
};

/// Exact p(n; .) on the box n * [axis_min, axis_max].
struct KernelTable {
  int n = 0;
  DenseBox<double> values;

  const Point& offset() const { return values.lo(); }
  double at(const Point& x) const { return values.get(x, 0.0); }
  double mass() const;
};

/// p(n; .) by n - 1 sparse convolutions with the step distribution, each cell
/// summed with Kahan compensation in a fixed order. Throws
/// MemoryBudgetExceeded naming n.
KernelTable convolve_kernel(const WalkModel& model, int n, const KernelOptions& options = {});

/// Advances p(n; .) one step at a time; the tables match convolve_kernel.
class KernelStepper {
 public:
  explicit KernelStepper(const WalkModel& model, KernelOptions options = {});
  /// Computes p(n + 1; .) and returns it. The first call yields n = 1.
  const KernelTable& step();
  const KernelTable& current() const { return table_; }

 private:
  const WalkModel* model_;
  KernelOptions options_;
  KernelTable table_;
};

/// Size per axis of the inversion grid: 2 * n * range + 3.
std::int64_t dft_grid_size(const WalkModel& model, int n);

/// p(n; x) = (2 pi)^{-d} int kappa(i theta)^n e^{-i<theta, x>} d theta as a
/// DFT sum over the grid; exact up to rounding. Throws GridBudgetExceeded.
double fourier_point(const WalkModel& model, int n, const Point& x, const KernelOptions& options = {});

/// Whole table by separable inverse DFT of kappa(i theta)^n on the grid.
KernelTable fourier_kernel(const WalkModel& model, int n, const KernelOptions& options = {});

struct UpperBoundReport {
  int n_max = 0;
  double max_ratio = 0.0;
  int worst_n = 0;
  Point worst_x;
  std::size_t checked = 0;
};

/// Checks p(n; x) <= e^{-n phi(x/n)} (1 + 1e-9) for every positive entry with
/// dist(x/n, boundary) >= 1e-6 and n <= n_max; throws InvariantViolation with
/// the witness otherwise.
UpperBoundReport upper_bound_check(const WalkModel& model, int n_max, const KernelOptions& options = {});

/// CSV with header x1..xd,p and probabilities in %.17g.
void write_kernel_csv(std::ostream& out, const KernelTable& table);

}  // namespace latticewalk
