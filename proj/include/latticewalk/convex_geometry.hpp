#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latticewalk/types.hpp"

namespace latticewalk {

/// Supporting hyperplane <normal, x> = offset of a facet, normal outward and
/// of unit length. The primitive integer normal and its offset are kept so
/// that membership of lattice points can be decided exactly.
struct Facet {
  Vec normal;
  double offset = 0.0;
  Point int_normal;
  std::int64_t int_offset = 0;
};

enum class Location { inside, boundary, outside };

const char* to_string(Location loc);

/// Convex hull of a finite full-dimensional subset of Z^d, d <= kMaxDim, as
/// the intersection of its facet half-spaces.
class Polytope {
 public:
  /// Enumerates facets over all d-subsets of `points`. Throws
  /// DegenerateSupport if the affine span is lower dimensional.
  static Polytope hull(std::span<const Point> points, int dim);

  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  /// Extreme points of the input set.
  const std::vector<Point>& vertices() const { return vertices_; }

  /// min over facets of offset - <normal, delta>. Positive inside (equal to
  /// the Euclidean distance to the boundary), negative outside.
  double dist_boundary(const Vec& delta) const;

  Location contains(const Vec& delta, double tol = 1e-12) const;
  /// Exact location of x / n for a lattice point x and n >= 1.
  Location contains_exact(const Point& x, std::int64_t n) const;

 private:
  int dim_ = 0;
  std::vector<Facet> facets_;
  std::vector<Point> vertices_;
};

}  // namespace latticewalk
