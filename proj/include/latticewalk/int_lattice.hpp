#pragma once

#include <cstdint>
#include <vector>

#include "latticewalk/types.hpp"

namespace latticewalk {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Smith normal form left * A * right = diag(invariants) of a d x m integer
/// matrix. `left` is unimodular d x d; invariants[i] divides invariants[i+1]
/// and trailing zeros mark rank deficiency.
struct SmithForm {
  IntMatrix left;
  std::vector<std::int64_t> invariants;
  int rank = 0;
};

SmithForm smith_normal_form(IntMatrix a);

/// Subgroup of Z^d generated by a finite set of vectors.
class SubLattice {
 public:
  SubLattice(int dim, const std::vector<Point>& generators);

  int dim() const { return dim_; }
  int rank() const { return smith_.rank; }
  bool full_rank() const { return smith_.rank == dim_; }
  /// [Z^d : L], or 0 when L is not full rank.
  std::int64_t index() const;
  bool contains(const Point& x) const;
  const std::vector<std::int64_t>& invariants() const { return smith_.invariants; }

  /// Representatives of the dual quotient L* / Z^d, each coordinate reduced
  /// to [-1/2, 1/2) and returned as numerator over common_denominator().
  std::vector<Point> dual_representatives() const;
  std::int64_t common_denominator() const;

 private:
  int dim_;
  SmithForm smith_;
};

}  // namespace latticewalk
