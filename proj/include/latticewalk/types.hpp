#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace latticewalk {

/// Largest supported lattice dimension. Hull enumeration is brute force over
/// d-subsets of the support, so this stays small.
inline constexpr int kMaxDim = 4;

/// A point of Z^d.
using Point = std::vector<std::int64_t>;

/// Real vectors and matrices of size at most kMaxDim; stack allocated.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

inline Vec to_vec(const Point& x) {
  Vec v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = static_cast<double>(x[i]);
  return v;
}

/// x / n as a real vector.
inline Vec velocity(const Point& x, std::int64_t n) {
  return to_vec(x) / static_cast<double>(n);
}

inline std::int64_t l1_norm(const Point& x) {
  std::int64_t s = 0;
  for (auto c : x) s += c < 0 ? -c : c;
  return s;
}

std::string format_point(const Point& x, char sep = ',');
std::string format_vec(const Vec& v, char sep = ',');

}  // namespace latticewalk
