#include "latticewalk/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>

#include "latticewalk/errors.hpp"

namespace latticewalk {

namespace {

// One pass over the support: log kappa, tilted mean and tilted covariance.
struct Moments {
  double log_kappa = 0.0;
  Vec mean;
  Mat cov;
};

class Evaluator {
 public:
  explicit Evaluator(const WalkModel& model)
      : log_p_(model.log_probabilities()), d_(model.dim()), k_(log_p_.size()), w_(k_) {
    const auto& steps = model.step_matrix();
    steps_.resize(k_ * static_cast<std::size_t>(d_));
    for (std::size_t i = 0; i < k_; ++i)
      for (int j = 0; j < d_; ++j) steps_[i * d_ + j] = steps(static_cast<Eigen::Index>(i), j);
  }

  double log_kappa(const Vec& u) {
    const double mx = fill(u);
    double total = 0.0;
    for (double x : w_) total += std::exp(x - mx);
    return mx + std::log(total);
  }

  Moments moments(const Vec& u) {
    const double mx = fill(u);
    double total = 0.0;
    for (auto& x : w_) {
      x = std::exp(x - mx);
      total += x;
    }
    Moments m;
    m.log_kappa = mx + std::log(total);
    m.mean = Vec::Zero(d_);
    for (std::size_t i = 0; i < k_; ++i) {
      w_[i] /= total;
      for (int j = 0; j < d_; ++j) m.mean[j] += w_[i] * steps_[i * d_ + j];
    }
    // Centred second moments keep small eigenvalues accurate near the boundary.
    m.cov = Mat::Zero(d_, d_);
    double c[kMaxDim];
    for (std::size_t i = 0; i < k_; ++i) {
      for (int j = 0; j < d_; ++j) c[j] = steps_[i * d_ + j] - m.mean[j];
      for (int a = 0; a < d_; ++a)
        for (int b = 0; b <= a; ++b) m.cov(a, b) += w_[i] * c[a] * c[b];
    }
    for (int a = 0; a < d_; ++a)
      for (int b = 0; b < a; ++b) m.cov(b, a) = m.cov(a, b);
    return m;
  }

 private:
  double fill(const Vec& u) {
    double mx = -INFINITY;
    for (std::size_t i = 0; i < k_; ++i) {
      double x = log_p_[i];
      for (int j = 0; j < d_; ++j) x += steps_[i * d_ + j] * u[j];
      w_[i] = x;
      mx = std::max(mx, x);
    }
    return mx;
  }

  const std::vector<double>& log_p_;
  int d_;
  std::size_t k_;
  std::vector<double> steps_;
  std::vector<double> w_;
};

}  // namespace

namespace {

void check_target(const WalkModel& model, const Vec& delta, const SaddleOptions& options) {
  if (delta.size() != model.dim()) throw Error("delta has wrong dimension");
  const double dist = model.hull().dist_boundary(delta);
  if (!(dist > 1e-12))
    throw NotInInterior("delta=(" + format_vec(delta) + ") is not in the interior of the hull; no finite maximizer");
  if (dist < options.boundary_guard && !options.allow_near_boundary)
    throw NotInInterior("delta=(" + format_vec(delta) + ") is within " + std::to_string(options.boundary_guard) +
                        " of the hull boundary; set allow_near_boundary to override");
}

struct NewtonResult {
  Vec s;
  Moments m;
  double gap = 0.0;
  int iterations = 0;
};

NewtonResult newton(Evaluator& eval, const Vec& delta, Vec s, const SaddleOptions& options) {
  Moments m = eval.moments(s);
  Vec grad = delta - m.mean;  // gradient of the concave objective
  double f = s.dot(delta) - m.log_kappa;
  double gap = grad.norm();
  int it = 0;

  // After the gap drops below tol, one extra Newton step polishes s to
  // rounding level; it is kept only if the gap shrinks.
  int polish = 1;
  while (gap > options.tol || polish > 0) {
    if (gap <= options.tol) --polish;
    if (it >= options.max_iterations) break;
    ++it;
    const Vec step = m.cov.llt().solve(grad);
    if (!step.allFinite()) break;
    const double slope = grad.dot(step);
    // Once the predicted increase is below the rounding level of f, Armijo
    // carries no information and steps are judged by the gradient alone.
    const double noise = 1e-15 * (1.0 + std::abs(f) + std::abs(s.dot(delta)));
    const bool flat = slope <= 100.0 * noise;
    Vec trial = s + step;
    Moments mt = eval.moments(trial);
    double gap_trial = (delta - mt.mean).norm();
    const double f_full = trial.dot(delta) - mt.log_kappa;
    if (flat || gap <= options.tol) {
      if (!(gap_trial < gap)) break;
    } else if (!(f_full >= f + 1e-4 * slope)) {
      double t = 1.0, f_trial = f_full;
      while (!(f_trial >= f + 1e-4 * t * slope) && t > 1e-12) {
        t *= 0.5;
        trial = s + t * step;
        f_trial = trial.dot(delta) - eval.log_kappa(trial);
      }
      if (f_trial >= f + 1e-4 * t * slope) {
        mt = eval.moments(trial);
        gap_trial = (delta - mt.mean).norm();
      } else {
        // Backtracking failed from rounding alone; fall back to the full step
        // if it reduces the gradient.
        trial = s + step;
        mt = eval.moments(trial);
        gap_trial = (delta - mt.mean).norm();
        if (!(gap_trial < gap)) break;
      }
    }
    s = trial;
    m = std::move(mt);
    grad = delta - m.mean;
    f = s.dot(delta) - m.log_kappa;
    gap = gap_trial;
  }
  if (gap > options.tol)
    throw MaxIterations("saddle solver stopped at gap " + format_vec(Vec::Constant(1, gap)) + " after " + std::to_string(it) +
                            " iterations for delta=(" + format_vec(delta) + "), last s=(" + format_vec(s) + ")",
                        gap, it);
  return NewtonResult{std::move(s), std::move(m), gap, it};
}

}  // namespace

SaddlePoint solve_saddle(const WalkModel& model, const Vec& delta, const SaddleOptions& options) {
  check_target(model, delta, options);
  Evaluator eval(model);
  auto r = newton(eval, delta, options.initial_guess ? *options.initial_guess : Vec::Zero(model.dim()), options);
  SaddlePoint out;
  out.delta = delta;
  out.s = r.s;
  out.log_kappa = r.m.log_kappa;
  out.phi = std::max(0.0, r.s.dot(delta) - r.m.log_kappa);
  out.b_s = QuadraticForm::from_matrix(r.m.cov);
  out.objective_gap = r.gap;
  out.iterations = r.iterations;
  return out;
}

struct RateFunction::Impl {
  explicit Impl(const WalkModel& model) : eval(model) {}
  Evaluator eval;
  Vec delta;
  Mat cov;
};

RateFunction::RateFunction(const WalkModel& model, SaddleOptions options)
    : model_(&model), options_(std::move(options)), impl_(std::make_unique<Impl>(model)),
      s_(Vec::Zero(model.dim())) {}

RateFunction::~RateFunction() = default;

double RateFunction::operator()(const Vec& delta, bool warm) {
  check_target(*model_, delta, options_);
  Vec start = options_.initial_guess ? *options_.initial_guess : Vec::Zero(model_->dim());
  if (warm) {
    // First-order predictor: ds = B_s^{-1} d(delta).
    start = s_ + impl_->cov.llt().solve(delta - impl_->delta);
    if (!start.allFinite()) start = s_;
  }
  NewtonResult r;
  try {
    r = newton(impl_->eval, delta, start, options_);
  } catch (const MaxIterations&) {
    if (!warm) throw;
    r = newton(impl_->eval, delta, Vec::Zero(model_->dim()), options_);
  }
  s_ = r.s;
  impl_->delta = delta;
  impl_->cov = r.m.cov;
  return std::max(0.0, r.s.dot(delta) - r.m.log_kappa);
}

double phi(const WalkModel& model, const Vec& delta, const SaddleOptions& options) {
  return solve_saddle(model, delta, options).phi;
}

double phi_taylor_reference(const WalkModel& model, const Vec& delta) {
  const auto b0 = hessian_log_kappa(model, Vec::Zero(model.dim()));
  return 0.5 * b0.inverse_apply(delta - model.mean());
}

}  // namespace latticewalk
