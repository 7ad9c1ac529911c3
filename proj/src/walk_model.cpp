#include "latticewalk/walk_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latticewalk/errors.hpp"

namespace latticewalk {

namespace {

// Iterates the n-step supports support(n+1) = support(n) + V.
class SupportStepper {
 public:
  SupportStepper(std::vector<Point> steps, int dim, std::size_t mem_budget)
      : steps_(std::move(steps)), dim_(dim), mem_budget_(mem_budget),
        lo_(static_cast<std::size_t>(dim), 0), hi_(static_cast<std::size_t>(dim), 0) {
    for (int i = 0; i < dim; ++i) {
      lo_[i] = hi_[i] = steps_[0][i];
      for (const auto& v : steps_) {
        lo_[i] = std::min(lo_[i], v[i]);
        hi_[i] = std::max(hi_[i], v[i]);
      }
    }
    // support(0) = {0}
    box_ = DenseBox<std::uint8_t>(Point(static_cast<std::size_t>(dim), 0),
                                  std::vector<std::int64_t>(static_cast<std::size_t>(dim), 1), 1);
  }

  int n() const { return n_; }
  const DenseBox<std::uint8_t>& box() const { return box_; }

  void step() {
    const std::int64_t next = n_ + 1;
    Point lo(static_cast<std::size_t>(dim_));
    std::vector<std::int64_t> ext(static_cast<std::size_t>(dim_));
    double bytes = 1.0;
    for (int i = 0; i < dim_; ++i) {
      lo[i] = next * lo_[i];
      ext[i] = next * (hi_[i] - lo_[i]) + 1;
      bytes *= static_cast<double>(ext[i]);
    }
    if (bytes > static_cast<double>(mem_budget_))
      throw SearchBudgetExceeded("support box for n=" + std::to_string(next) + " exceeds the memory budget");
    DenseBox<std::uint8_t> out(lo, ext, 0);
    Point x;
    Point y(static_cast<std::size_t>(dim_));
    for (std::size_t f = 0; f < box_.size(); ++f) {
      if (!box_[f]) continue;
      x = box_.point(f);
      for (const auto& v : steps_) {
        for (int i = 0; i < dim_; ++i) y[i] = x[i] + v[i];
        out[out.flat(y)] = 1;
      }
    }
    box_ = std::move(out);
    n_ = static_cast<int>(next);
  }

  bool contains(const Point& x) const { return box_.get(x, 0) != 0; }

 private:
  std::vector<Point> steps_;
  int dim_;
  std::size_t mem_budget_;
  Point lo_, hi_;
  DenseBox<std::uint8_t> box_;
  int n_ = 0;
};

std::vector<Point> support_points(const WalkSpec& spec) {
  std::vector<Point> pts;
  for (const auto& s : spec.steps) pts.push_back(s.v);
  return pts;
}

std::vector<Point> differences(const std::vector<Point>& pts) {
  std::vector<Point> diffs;
  for (const auto& p : pts) {
    Point d(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - pts[0][i];
    diffs.push_back(std::move(d));
  }
  return diffs;
}

}  // namespace

const char* to_string(Irreducibility value) {
  switch (value) {
    case Irreducibility::irreducible: return "irreducible";
    case Irreducibility::reducible: return "reducible";
    case Irreducibility::inconclusive: return "inconclusive";
  }
  return "?";
}

Irreducibility irreducibility(const WalkSpec& spec, const WalkOptions& options) {
  check_weights(spec);
  const auto pts = support_points(spec);
  const int d = spec.dim;
  SubLattice generated(d, pts);
  if (generated.index() != 1) return Irreducibility::reducible;
  // A supporting hyperplane through 0 leaves a half-space unreachable.
  try {
    Polytope hull = Polytope::hull(pts, d);
    if (hull.contains_exact(Point(static_cast<std::size_t>(d), 0), 1) != Location::inside)
      return Irreducibility::reducible;
  } catch (const DegenerateSupport&) {
    return Irreducibility::reducible;
  }
  std::vector<Point> targets;
  for (int j = 0; j < d; ++j)
    for (int sign : {1, -1}) {
      Point e(static_cast<std::size_t>(d), 0);
      e[j] = sign;
      targets.push_back(e);
    }
  SupportStepper stepper(pts, d, options.mem_budget_bytes);
  try {
    while (!targets.empty() && stepper.n() < options.step_budget) {
      stepper.step();
      std::erase_if(targets, [&](const Point& t) { return stepper.contains(t); });
    }
  } catch (const SearchBudgetExceeded&) {
    return Irreducibility::inconclusive;
  }
  return targets.empty() ? Irreducibility::irreducible : Irreducibility::inconclusive;
}

WalkModel WalkModel::validate(WalkSpec spec, const WalkOptions& options) {
  check_weights(spec);
  WalkModel m;
  m.options_ = options;
  const int d = spec.dim;
  m.support_ = support_points(spec);
  m.hull_ = Polytope::hull(m.support_, d);

  switch (irreducibility(spec, options)) {
    case Irreducibility::irreducible: break;
    case Irreducibility::reducible:
      throw NotIrreducible("walk is not irreducible: some lattice points are never reached");
    case Irreducibility::inconclusive:
      throw SearchBudgetExceeded("irreducibility inconclusive: +-e_j not reached within " +
                                 std::to_string(options.step_budget) + " steps");
  }

  const std::size_t k = m.support_.size();
  m.steps_.resize(static_cast<Eigen::Index>(k), d);
  m.mean_ = Vec::Zero(d);
  m.axis_min_ = m.axis_max_ = m.support_[0];
  for (std::size_t i = 0; i < k; ++i) {
    const double p = spec.steps[i].weight.value;
    m.prob_.push_back(p);
    m.log_prob_.push_back(std::log(p));
    m.range_ = std::max(m.range_, l1_norm(m.support_[i]));
    for (int j = 0; j < d; ++j) {
      m.steps_(static_cast<Eigen::Index>(i), j) = static_cast<double>(m.support_[i][j]);
      m.axis_min_[j] = std::min(m.axis_min_[j], m.support_[i][j]);
      m.axis_max_[j] = std::max(m.axis_max_[j], m.support_[i][j]);
    }
    m.mean_ += p * to_vec(m.support_[i]);
  }
  m.diff_lattice_ = SubLattice(d, differences(m.support_));
  m.spec_ = std::move(spec);
  m.period_ = latticewalk::period(m);
  if (m.period_ != m.diff_lattice_.index())
    throw InvariantViolation("period " + std::to_string(m.period_) + " from support iteration differs from index " +
                             std::to_string(m.diff_lattice_.index()) + " of the difference lattice");
  return m;
}

int WalkModel::class_of(const Point& x) const {
  Point y = x;
  for (int j = 0; j < period_; ++j) {
    if (diff_lattice_.contains(y)) return j;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= support_[0][i];
  }
  throw InvariantViolation("point " + format_point(x) + " lies in no class");
}

bool WalkModel::on_class(std::int64_t n, const Point& x) const {
  Point y = x;
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= n * support_[0][i];
  return diff_lattice_.contains(y);
}

bool WalkModel::is_simple_walk() const {
  const int d = dim();
  if (support_.size() != static_cast<std::size_t>(2 * d)) return false;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (l1_norm(support_[i]) != 1) return false;
    if (std::abs(prob_[i] - 1.0 / (2.0 * d)) > 1e-15) return false;
  }
  return true;
}

DenseBox<std::uint8_t> n_step_support(const WalkModel& model, int n) {
  SupportStepper stepper(model.support(), model.dim(), model.options().mem_budget_bytes);
  while (stepper.n() < n) stepper.step();
  return stepper.box();
}

int period(const WalkModel& model) {
  const auto& opt = model.options();
  const std::int64_t window =
      static_cast<std::int64_t>(opt.period_window_factor) * model.dim() * model.range();
  SupportStepper stepper(model.support(), model.dim(), opt.mem_budget_bytes);
  const Point origin(static_cast<std::size_t>(model.dim()), 0);
  std::int64_t g = 0, stable = 0;
  while (stepper.n() < opt.step_budget) {
    stepper.step();
    if (g != 0) ++stable;
    if (stepper.contains(origin)) {
      const std::int64_t ng = std::gcd(g, static_cast<std::int64_t>(stepper.n()));
      if (ng != g) stable = 0;
      g = ng;
    }
    if (g != 0 && stable >= window) return static_cast<int>(g);
  }
  throw SearchBudgetExceeded("period did not stabilize within " + std::to_string(opt.step_budget) + " steps");
}

ClassIndex class_index(const WalkModel& model, const Point& x) {
  if (static_cast<int>(x.size()) != model.dim()) throw Error("point has wrong dimension");
  SupportStepper stepper(model.support(), model.dim(), model.options().mem_budget_bytes);
  while (stepper.n() < model.options().step_budget) {
    stepper.step();
    if (stepper.contains(x)) return ClassIndex{x, stepper.n(), stepper.n() % model.period()};
  }
  throw SearchBudgetExceeded("m_x for x=" + format_point(x) + " not found within " +
                             std::to_string(model.options().step_budget) + " steps");
}

}  // namespace latticewalk
