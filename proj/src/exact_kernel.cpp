#include "latticewalk/exact_kernel.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <vector>

#include "latticewalk/errors.hpp"
#include "latticewalk/parallel.hpp"
#include "latticewalk/saddle.hpp"

namespace latticewalk {

namespace {

using cplx = std::complex<double>;

KernelTable step_table(const WalkModel& model) {
  const int d = model.dim();
  std::vector<std::int64_t> ext(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) ext[i] = model.axis_max()[i] - model.axis_min()[i] + 1;
  KernelTable t{1, DenseBox<double>(model.axis_min(), ext, 0.0)};
  for (std::size_t i = 0; i < model.support_size(); ++i)
    t.values[t.values.flat(model.support()[i])] = model.probabilities()[i];
  return t;
}

// p(n + 1; .) from p(n; .). Gather per output row: every cell sums its |V|
// contributions in support order with Kahan compensation.
KernelTable convolve_once(const WalkModel& model, const KernelTable& prev, const KernelOptions& options) {
  const int d = model.dim();
  const auto& pbox = prev.values;
  Point lo(static_cast<std::size_t>(d));
  std::vector<std::int64_t> ext(static_cast<std::size_t>(d));
  double cells = 1.0;
  for (int i = 0; i < d; ++i) {
    lo[i] = pbox.lo()[i] + model.axis_min()[i];
    ext[i] = pbox.extent()[i] + model.axis_max()[i] - model.axis_min()[i];
    cells *= static_cast<double>(ext[i]);
  }
  if (cells * 8.0 * 2.0 > static_cast<double>(options.mem_budget_bytes))
    throw MemoryBudgetExceeded("kernel table for n=" + std::to_string(prev.n + 1) + " needs " +
                               std::to_string(static_cast<long long>(cells * 16.0 / (1 << 20))) +
                               " MiB, over the memory budget");
  KernelTable out{prev.n + 1, DenseBox<double>(lo, ext, 0.0)};
  auto& obox = out.values;

  const std::size_t k = model.support_size();
  // Shift of each step relative to the smallest step coordinate, per axis.
  std::vector<Point> shift(k, Point(static_cast<std::size_t>(d)));
  for (std::size_t s = 0; s < k; ++s)
    for (int i = 0; i < d; ++i) shift[s][i] = model.support()[s][i] - model.axis_min()[i];

  const std::int64_t olen = obox.row_length();
  const std::int64_t plen = pbox.row_length();
  const std::size_t nrows = obox.rows();
  const auto& probs = model.probabilities();

  parallel_for(nrows, [&](std::size_t rb, std::size_t re) {
    std::vector<double> sum(static_cast<std::size_t>(olen)), comp(static_cast<std::size_t>(olen));
    Point orow(static_cast<std::size_t>(d > 1 ? d - 1 : 0));
    for (std::size_t r = rb; r < re; ++r) {
      // Decode the leading coordinates (box-relative) of output row r.
      std::size_t rem = r;
      for (int i = d - 2; i >= 0; --i) {
        orow[i] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(ext[i]));
        rem /= static_cast<std::size_t>(ext[i]);
      }
      std::fill(sum.begin(), sum.end(), 0.0);
      std::fill(comp.begin(), comp.end(), 0.0);
      for (std::size_t s = 0; s < k; ++s) {
        std::size_t prow = 0;
        bool valid = true;
        for (int i = 0; i < d - 1; ++i) {
          const std::int64_t pi = orow[i] - shift[s][i];
          if (pi < 0 || pi >= pbox.extent()[i]) {
            valid = false;
            break;
          }
          prow = prow * static_cast<std::size_t>(pbox.extent()[i]) + static_cast<std::size_t>(pi);
        }
        if (!valid) continue;
        const double* src = pbox.data().data() + prow * static_cast<std::size_t>(plen);
        const std::int64_t sh = shift[s][d - 1];
        const double p = probs[s];
        for (std::int64_t j = 0; j < plen; ++j) {
          const std::size_t o = static_cast<std::size_t>(j + sh);
          const double y = p * src[j] - comp[o];
          const double t = sum[o] + y;
          comp[o] = (t - sum[o]) - y;
          sum[o] = t;
        }
      }
      std::copy(sum.begin(), sum.end(), obox.data().begin() + static_cast<std::ptrdiff_t>(r * static_cast<std::size_t>(olen)));
    }
  });
  return out;
}

cplx ipow(cplx base, int n) {
  cplx result{1.0, 0.0};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// e^{2 pi i m / N} for m in [0, N).
std::vector<cplx> roots_of_unity(std::int64_t N) {
  std::vector<cplx> w(static_cast<std::size_t>(N));
  for (std::int64_t m = 0; m < N; ++m)
    w[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(N));
  return w;
}

std::int64_t mod(std::int64_t a, std::int64_t N) {
  std::int64_t r = a % N;
  return r < 0 ? r + N : r;
}

// kappa(i theta_k)^n for grid index k; `exps` holds each step's index sum.
class GridSymbol {
 public:
  GridSymbol(const WalkModel& model, std::int64_t N, int n) : model_(model), N_(N), n_(n), w_(roots_of_unity(N)) {}

  cplx operator()(const Point& k) const {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < model_.support_size(); ++i) {
      std::int64_t e = 0;
      for (int j = 0; j < model_.dim(); ++j) e += k[j] * model_.support()[i][j];
      s += model_.probabilities()[i] * w_[static_cast<std::size_t>(mod(e, N_))];
    }
    return ipow(s, n_);
  }

  const std::vector<cplx>& roots() const { return w_; }

 private:
  const WalkModel& model_;
  std::int64_t N_;
  int n_;
  std::vector<cplx> w_;
};

void check_grid(const WalkModel& model, std::int64_t N, const KernelOptions& options) {
  double pts = 1.0;
  for (int i = 0; i < model.dim(); ++i) pts *= static_cast<double>(N);
  if (pts * 16.0 > static_cast<double>(options.mem_budget_bytes))
    throw GridBudgetExceeded("DFT grid of " + std::to_string(N) + "^" + std::to_string(model.dim()) +
                             " points exceeds the budget");
}

}  // namespace

double KernelTable::mass() const {
  double sum = 0.0, comp = 0.0;
  for (double v : values.data()) {
    const double y = v - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

KernelTable convolve_kernel(const WalkModel& model, int n, const KernelOptions& options) {
  if (n < 1) throw Error("convolve_kernel needs n >= 1");
  KernelStepper stepper(model, options);
  while (stepper.current().n < n) stepper.step();
  return stepper.current();
}

KernelStepper::KernelStepper(const WalkModel& model, KernelOptions options)
    : model_(&model), options_(options) {}

const KernelTable& KernelStepper::step() {
  table_ = table_.n == 0 ? step_table(*model_) : convolve_once(*model_, table_, options_);
  return table_;
}

std::int64_t dft_grid_size(const WalkModel& model, int n) { return 2 * n * model.range() + 3; }

double fourier_point(const WalkModel& model, int n, const Point& x, const KernelOptions& options) {
  if (n < 1) throw Error("fourier_point needs n >= 1");
  const std::int64_t N = dft_grid_size(model, n);
  check_grid(model, N, options);
  const int d = model.dim();
  GridSymbol symbol(model, N, n);
  const auto& w = symbol.roots();
  Point k(static_cast<std::size_t>(d), 0);
  double acc = 0.0, comp = 0.0;
  for (;;) {
    std::int64_t e = 0;
    for (int j = 0; j < d; ++j) e -= k[j] * x[j];
    const double term = (symbol(k) * w[static_cast<std::size_t>(mod(e, N))]).real();
    const double y = term - comp;
    const double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    int j = d - 1;
    while (j >= 0 && ++k[j] == N) k[j--] = 0;
    if (j < 0) break;
  }
  return acc / std::pow(static_cast<double>(N), d);
}

KernelTable fourier_kernel(const WalkModel& model, int n, const KernelOptions& options) {
  if (n < 1) throw Error("fourier_kernel needs n >= 1");
  const std::int64_t N = dft_grid_size(model, n);
  check_grid(model, N, options);
  const int d = model.dim();
  GridSymbol symbol(model, N, n);
  const auto& w = symbol.roots();

  std::vector<std::size_t> shape(static_cast<std::size_t>(d), static_cast<std::size_t>(N));
  std::size_t total = 1;
  for (auto s : shape) total *= s;
  std::vector<cplx> data(total);
  parallel_for(total, [&](std::size_t b, std::size_t e) {
    Point k(static_cast<std::size_t>(d));
    for (std::size_t f = b; f < e; ++f) {
      std::size_t rem = f;
      for (int j = d - 1; j >= 0; --j) {
        k[j] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(N));
        rem /= static_cast<std::size_t>(N);
      }
      data[f] = symbol(k);
    }
  });

  Point lo(static_cast<std::size_t>(d));
  std::vector<std::int64_t> ext(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    lo[i] = n * model.axis_min()[i];
    ext[i] = n * (model.axis_max()[i] - model.axis_min()[i]) + 1;
  }

  // Inverse transform one axis at a time: k_a in [0, N) -> x_a in [lo_a, lo_a + ext_a).
  for (int a = 0; a < d; ++a) {
    std::size_t pre = 1, post = 1;
    for (int i = 0; i < a; ++i) pre *= shape[i];
    for (int i = a + 1; i < d; ++i) post *= shape[i];
    const std::size_t nk = shape[a], nx = static_cast<std::size_t>(ext[a]);
    std::vector<cplx> next(pre * nx * post);
    parallel_for(pre * nx, [&](std::size_t b, std::size_t e) {
      for (std::size_t px = b; px < e; ++px) {
        const std::size_t p = px / nx, xi = px % nx;
        const std::int64_t x = lo[a] + static_cast<std::int64_t>(xi);
        cplx* dst = next.data() + (p * nx + xi) * post;
        for (std::size_t kk = 0; kk < nk; ++kk) {
          const cplx tw = w[static_cast<std::size_t>(mod(-static_cast<std::int64_t>(kk) * x, N))];
          const cplx* src = data.data() + (p * nk + kk) * post;
          for (std::size_t q = 0; q < post; ++q) dst[q] += src[q] * tw;
        }
      }
    });
    data = std::move(next);
    shape[a] = nx;
  }

  KernelTable t{n, DenseBox<double>(lo, ext, 0.0)};
  const double scale = std::pow(static_cast<double>(N), -d);
  for (std::size_t f = 0; f < t.values.size(); ++f) t.values[f] = data[f].real() * scale;
  return t;
}

UpperBoundReport upper_bound_check(const WalkModel& model, int n_max, const KernelOptions& options) {
  UpperBoundReport rep;
  rep.n_max = n_max;
  const double limit = 1.0 + 1e-9;
  KernelStepper stepper(model, options);
  for (int n = 1; n <= n_max; ++n) {
    const auto& table = stepper.step();
    const auto& box = table.values;
    const std::size_t nrows = box.rows();
    const auto len = static_cast<std::size_t>(box.row_length());
    struct RowResult {
      double ratio = 0.0;
      std::size_t flat = 0;
      std::size_t checked = 0;
    };
    std::vector<RowResult> rows(nrows);
    parallel_for(nrows, [&](std::size_t rb, std::size_t re) {
      RateFunction rate(model, SaddleOptions{});
      for (std::size_t r = rb; r < re; ++r) {
        bool warm = false;
        for (std::size_t c = 0; c < len; ++c) {
          const std::size_t f = r * len + c;
          const double p = box[f];
          if (!(p > 0.0)) continue;
          const Vec delta = velocity(box.point(f), n);
          if (model.hull().dist_boundary(delta) < 1e-6) continue;
          const double ph = rate(delta, warm);
          warm = true;
          const double ratio = std::exp(std::log(p) + n * ph);
          ++rows[r].checked;
          if (ratio > rows[r].ratio) rows[r] = RowResult{ratio, f, rows[r].checked};
        }
      }
    });
    for (const auto& rr : rows) {
      rep.checked += rr.checked;
      if (rr.ratio > rep.max_ratio) {
        rep.max_ratio = rr.ratio;
        rep.worst_n = n;
        rep.worst_x = box.point(rr.flat);
      }
    }
    if (rep.max_ratio > limit) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", rep.max_ratio);
      throw InvariantViolation("upper bound p(n;x) <= exp(-n phi(x/n)) fails at n=" + std::to_string(rep.worst_n) +
                               ", x=(" + format_point(rep.worst_x) + "): ratio " + buf);
    }
  }
  return rep;
}

void write_kernel_csv(std::ostream& out, const KernelTable& table) {
  const int d = table.values.dim();
  for (int i = 0; i < d; ++i) out << 'x' << (i + 1) << ',';
  out << "p\n";
  char buf[64];
  for (std::size_t f = 0; f < table.values.size(); ++f) {
    const double p = table.values[f];
    if (p == 0.0) continue;
    out << format_point(table.values.point(f)) << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p);
    out << buf << '\n';
  }
}

}  // namespace latticewalk
