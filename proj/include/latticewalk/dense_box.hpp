#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "latticewalk/types.hpp"

namespace latticewalk {

/// Dense row-major array over the integer box [lo, lo + extent) of Z^d; the
/// last axis is contiguous.
template <typename T>
class DenseBox {
 public:
  DenseBox() = default;
  DenseBox(Point lo, std::vector<std::int64_t> extent, T fill = T{})
      : lo_(std::move(lo)), extent_(std::move(extent)) {
    std::size_t n = 1;
    for (auto e : extent_) n *= static_cast<std::size_t>(e);
    data_.assign(n, fill);
  }

  int dim() const { return static_cast<int>(lo_.size()); }
  const Point& lo() const { return lo_; }
  const std::vector<std::int64_t>& extent() const { return extent_; }
  std::size_t size() const { return data_.size(); }
  std::int64_t row_length() const { return extent_.empty() ? 1 : extent_.back(); }
  std::size_t rows() const { return extent_.empty() ? 0 : data_.size() / static_cast<std::size_t>(extent_.back()); }

  bool in_box(const Point& x) const {
    for (std::size_t i = 0; i < lo_.size(); ++i)
      if (x[i] < lo_[i] || x[i] >= lo_[i] + extent_[i]) return false;
    return true;
  }

  std::size_t flat(const Point& x) const {
    std::size_t f = 0;
    for (std::size_t i = 0; i < lo_.size(); ++i)
      f = f * static_cast<std::size_t>(extent_[i]) + static_cast<std::size_t>(x[i] - lo_[i]);
    return f;
  }

  Point point(std::size_t flat_index) const {
    Point x(lo_.size());
    for (std::size_t i = lo_.size(); i-- > 0;) {
      const auto e = static_cast<std::size_t>(extent_[i]);
      x[i] = lo_[i] + static_cast<std::int64_t>(flat_index % e);
      flat_index /= e;
    }
    return x;
  }

  /// Value at x, or `outside` when x is not in the box.
  T get(const Point& x, T outside = T{}) const { return in_box(x) ? data_[flat(x)] : outside; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  Point lo_;
  std::vector<std::int64_t> extent_;
  std::vector<T> data_;
};

}  // namespace latticewalk
