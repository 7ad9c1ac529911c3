#include "latticewalk/int_lattice.hpp"

#include <cstdlib>
#include <numeric>
#include <utility>

#include "latticewalk/errors.hpp"

namespace latticewalk {

namespace {

std::int64_t mul_add(std::int64_t a, std::int64_t q, std::int64_t b) {
  __int128 v = static_cast<__int128>(a) - static_cast<__int128>(q) * b;
  if (v > INT64_MAX || v < INT64_MIN) throw Error("integer overflow in Smith normal form");
  return static_cast<std::int64_t>(v);
}

struct Reducer {
  IntMatrix a;
  IntMatrix left;
  std::size_t rows, cols;

  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(left[i], left[j]);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (auto& row : a) std::swap(row[i], row[j]);
  }
  // row_i -= q * row_j
  void row_op(std::size_t i, std::size_t j, std::int64_t q) {
    for (std::size_t k = 0; k < cols; ++k) a[i][k] = mul_add(a[i][k], q, a[j][k]);
    for (std::size_t k = 0; k < rows; ++k) left[i][k] = mul_add(left[i][k], q, left[j][k]);
  }
  // col_i -= q * col_j
  void col_op(std::size_t i, std::size_t j, std::int64_t q) {
    for (std::size_t k = 0; k < rows; ++k) a[k][i] = mul_add(a[k][i], q, a[k][j]);
  }
  void negate_row(std::size_t i) {
    for (auto& v : a[i]) v = -v;
    for (auto& v : left[i]) v = -v;
  }

  // Moves the smallest nonzero |entry| of the trailing block to (t, t).
  bool pivot(std::size_t t) {
    std::size_t bi = rows, bj = cols;
    std::int64_t best = 0;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
          best = std::llabs(a[i][j]);
          bi = i;
          bj = j;
        }
    if (best == 0) return false;
    swap_rows(t, bi);
    swap_cols(t, bj);
    return true;
  }

  void reduce(std::size_t t) {
    for (;;) {
      if (!pivot(t)) return;
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        row_op(i, t, a[i][t] / a[t][t]);
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        col_op(j, t, a[t][j] / a[t][t]);
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility chain: fold any entry the pivot does not divide into row t.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            row_op(t, i, -1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) negate_row(t);
  }
};

}  // namespace

SmithForm smith_normal_form(IntMatrix a) {
  Reducer r{std::move(a), {}, 0, 0};
  r.rows = r.a.size();
  r.cols = r.rows ? r.a[0].size() : 0;
  r.left.assign(r.rows, std::vector<std::int64_t>(r.rows, 0));
  for (std::size_t i = 0; i < r.rows; ++i) r.left[i][i] = 1;
  SmithForm out;
  std::size_t steps = std::min(r.rows, r.cols);
  for (std::size_t t = 0; t < steps; ++t) r.reduce(t);
  out.invariants.assign(r.rows, 0);
  for (std::size_t t = 0; t < steps; ++t) {
    out.invariants[t] = r.a[t][t];
    if (r.a[t][t] != 0) ++out.rank;
  }
  out.left = std::move(r.left);
  return out;
}

SubLattice::SubLattice(int dim, const std::vector<Point>& generators) : dim_(dim) {
  IntMatrix a(static_cast<std::size_t>(dim), std::vector<std::int64_t>(generators.size(), 0));
  for (std::size_t j = 0; j < generators.size(); ++j)
    for (int i = 0; i < dim; ++i) a[i][j] = generators[j][i];
  if (generators.empty()) a.assign(static_cast<std::size_t>(dim), std::vector<std::int64_t>(1, 0));
  smith_ = smith_normal_form(std::move(a));
}

std::int64_t SubLattice::index() const {
  if (!full_rank()) return 0;
  std::int64_t idx = 1;
  for (auto s : smith_.invariants) idx *= s;
  return idx;
}

bool SubLattice::contains(const Point& x) const {
  for (int i = 0; i < dim_; ++i) {
    __int128 z = 0;
    for (int k = 0; k < dim_; ++k) z += static_cast<__int128>(smith_.left[i][k]) * x[k];
    std::int64_t s = smith_.invariants[i];
    if (s == 0) {
      if (z != 0) return false;
    } else if (z % s != 0) {
      return false;
    }
  }
  return true;
}

std::int64_t SubLattice::common_denominator() const {
  std::int64_t l = 1;
  for (auto s : smith_.invariants)
    if (s != 0) l = std::lcm(l, s);
  return l;
}

std::vector<Point> SubLattice::dual_representatives() const {
  if (!full_rank()) throw DegenerateSupport("dual quotient of a rank-deficient lattice is infinite");
  const std::int64_t den = common_denominator();
  std::vector<Point> out;
  Point k(static_cast<std::size_t>(dim_), 0);
  for (;;) {
    // y = left^T (k / s), scaled by den.
    Point y(static_cast<std::size_t>(dim_), 0);
    for (int j = 0; j < dim_; ++j) {
      __int128 acc = 0;
      for (int i = 0; i < dim_; ++i)
        acc += static_cast<__int128>(smith_.left[i][j]) * k[i] * (den / smith_.invariants[i]);
      __int128 r = acc % den;
      if (r < 0) r += den;
      if (2 * r >= den) r -= den;
      y[j] = static_cast<std::int64_t>(r);
    }
    out.push_back(std::move(y));
    int i = 0;
    while (i < dim_ && ++k[i] == smith_.invariants[i]) k[i++] = 0;
    if (i == dim_) break;
  }
  return out;
}

}  // namespace latticewalk
