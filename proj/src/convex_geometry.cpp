#include "latticewalk/convex_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "latticewalk/errors.hpp"
#include "latticewalk/int_lattice.hpp"

namespace latticewalk {

namespace {

// Integer determinant by cofactor expansion; matrices here are at most 4x4.
std::int64_t det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  std::int64_t total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    std::int64_t term = m[0][c] * det(minor);
    total += (c % 2 == 0) ? term : -term;
  }
  return total;
}

// Normal of the hyperplane through `base` and the rows of `diffs` (d-1 rows of
// length d), via signed maximal minors. Zero when the points are dependent.
Point generalized_cross(const IntMatrix& diffs, int dim) {
  Point n(static_cast<std::size_t>(dim), 0);
  for (int i = 0; i < dim; ++i) {
    IntMatrix minor;
    for (const auto& row : diffs) {
      std::vector<std::int64_t> r;
      for (int k = 0; k < dim; ++k)
        if (k != i) r.push_back(row[k]);
      minor.push_back(std::move(r));
    }
    std::int64_t m = det(minor);
    n[i] = (i % 2 == 0) ? m : -m;
  }
  return n;
}

std::int64_t dot(const Point& a, const Point& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

const char* to_string(Location loc) {
  switch (loc) {
    case Location::inside: return "inside";
    case Location::boundary: return "boundary";
    case Location::outside: return "outside";
  }
  return "?";
}

Polytope Polytope::hull(std::span<const Point> points, int dim) {
  if (dim < 1 || dim > kMaxDim) throw DegenerateSupport("unsupported dimension for hull");
  if (points.empty()) throw DegenerateSupport("empty point set");

  std::vector<Point> diffs;
  for (const auto& p : points) {
    Point d(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - points[0][i];
    diffs.push_back(std::move(d));
  }
  if (SubLattice(dim, diffs).rank() < dim)
    throw DegenerateSupport("support lies in an affine hyperplane; its hull has empty interior");

  Polytope poly;
  poly.dim_ = dim;
  std::set<std::pair<Point, std::int64_t>> seen;
  const std::size_t m = points.size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(dim));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    IntMatrix rows;
    for (int k = 1; k < dim; ++k) {
      std::vector<std::int64_t> r(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) r[i] = points[idx[k]][i] - points[idx[0]][i];
      rows.push_back(std::move(r));
    }
    Point n = generalized_cross(rows, dim);
    std::int64_t g = 0;
    for (auto c : n) g = std::gcd(g, c);
    if (g != 0) {
      for (auto& c : n) c /= g;
      const std::int64_t c0 = dot(n, points[idx[0]]);
      bool below = true, above = true;
      for (const auto& p : points) {
        std::int64_t v = dot(n, p);
        below = below && v <= c0;
        above = above && v >= c0;
      }
      if (below || above) {
        std::int64_t off = c0;
        if (!below) {
          for (auto& c : n) c = -c;
          off = -c0;
        }
        if (seen.insert({n, off}).second) {
          Facet f;
          f.int_normal = n;
          f.int_offset = off;
          Vec v = to_vec(n);
          const double len = v.norm();
          f.normal = v / len;
          f.offset = static_cast<double>(off) / len;
          poly.facets_.push_back(std::move(f));
        }
      }
    }
    // Next d-subset in lexicographic order.
    int k = dim - 1;
    while (k >= 0 && idx[k] == m - static_cast<std::size_t>(dim - k)) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(poly.facets_.begin(), poly.facets_.end(),
            [](const Facet& a, const Facet& b) { return a.int_normal < b.int_normal; });

  for (const auto& p : points) {
    Eigen::MatrixXd active(0, dim);
    for (const auto& f : poly.facets_) {
      if (dot(f.int_normal, p) != f.int_offset) continue;
      active.conservativeResize(active.rows() + 1, dim);
      active.row(active.rows() - 1) = f.normal.transpose();
    }
    if (active.rows() >= dim) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(active);
      if (lu.rank() == dim) poly.vertices_.push_back(p);
    }
  }
  std::sort(poly.vertices_.begin(), poly.vertices_.end());
  return poly;
}

double Polytope::dist_boundary(const Vec& delta) const {
  double best = INFINITY;
  for (const auto& f : facets_) best = std::min(best, f.offset - f.normal.dot(delta));
  return best;
}

Location Polytope::contains(const Vec& delta, double tol) const {
  const double d = dist_boundary(delta);
  if (d > tol) return Location::inside;
  if (d >= -tol) return Location::boundary;
  return Location::outside;
}

Location Polytope::contains_exact(const Point& x, std::int64_t n) const {
  bool on = false;
  for (const auto& f : facets_) {
    const std::int64_t lhs = dot(f.int_normal, x);
    const std::int64_t rhs = f.int_offset * n;
    if (lhs > rhs) return Location::outside;
    if (lhs == rhs) on = true;
  }
  return on ? Location::boundary : Location::inside;
}

}  // namespace latticewalk
