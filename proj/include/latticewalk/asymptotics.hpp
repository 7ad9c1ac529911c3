#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latticewalk/saddle.hpp"
#include "latticewalk/types.hpp"
#include "latticewalk/walk_model.hpp"

namespace latticewalk {

enum class Formula { theorem7, corollary1, gaussian_remark1, upper_bound };

const char* to_string(Formula f);

struct AsymptoticValue {
  double value = 0.0;
  Formula formula = Formula::theorem7;
  /// False when n is not congruent to m_x mod r; value is then exactly 0.
  bool class_ok = false;
  std::optional<SaddlePoint> saddle;
};

/// r (2 pi n)^{-d/2} (det B_s)^{-1/2} e^{-n phi(x/n)} on the class of x.
AsymptoticValue theorem7_point(const WalkModel& model, std::int64_t n, const Point& x,
                               const SaddleOptions& options = {});

/// Same with B_0 in place of B_s; requires dist(x/n, boundary) >= eps.
AsymptoticValue corollary1_point(const WalkModel& model, std::int64_t n, const Point& x, double eps,
                                 const SaddleOptions& options = {});

/// 2 (2 pi)^{-d/2} (d/n)^{d/2} e^{-d |x|^2 / 2n}; simple walk only (WrongModel).
AsymptoticValue gaussian_remark1_point(const WalkModel& model, std::int64_t n, const Point& x);

/// The global bound e^{-n phi(x/n)}, 0 off class.
AsymptoticValue upper_bound_point(const WalkModel& model, std::int64_t n, const Point& x,
                                  const SaddleOptions& options = {});

/// Class-correct x closest to n * delta: round, then the smallest l1
/// correction into the class of n; ties go to the smaller Euclidean error,
/// then to the lexicographically smaller point.
Point nearest_admissible(const WalkModel& model, std::int64_t n, const Vec& delta);

struct ComparisonRow {
  std::int64_t n = 0;
  Point x;
  Vec target;  // requested grid velocity
  Vec delta;   // x / n
  double dist = 0.0;
  double exact = 0.0;
  double asym = 0.0;
  double rel_err = 0.0;
};

/// Least-squares slope of log |rel_err| against log n at one grid velocity.
struct DecayFit {
  Vec target;
  double slope = 0.0;
  double intercept = 0.0;
  int points = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  std::vector<DecayFit> fits;
};

struct CompareOptions {
  /// Grid points closer than this to the boundary are rejected.
  double eps_boundary = 1e-2;
  SaddleOptions saddle;
  std::size_t mem_budget_bytes = std::size_t{1} << 30;
};

/// Exact (convolution) against theorem7 over delta_grid x n_list; rows are
/// ordered by grid position, then by n.
ComparisonReport compare(const WalkModel& model, const std::vector<std::int64_t>& n_list,
                         const std::vector<Vec>& delta_grid, const CompareOptions& options = {});

/// CSV: n,x1..xd,delta1..deltad,dist,exact,asym,rel_err; `#` metadata lines
/// first and `#fit` lines last.
void write_report_csv(std::ostream& out, const ComparisonReport& report, int dim,
                      const std::vector<std::string>& metadata = {});

}  // namespace latticewalk
