#include "latticewalk/cumulant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "latticewalk/errors.hpp"

namespace latticewalk {

QuadraticForm QuadraticForm::from_matrix(const Mat& m) {
  QuadraticForm q;
  q.matrix = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> eig(q.matrix, Eigen::EigenvaluesOnly);
  q.eigenvalues = eig.eigenvalues();
  q.det = q.eigenvalues.prod();
  q.inv_norm = 1.0 / q.eigenvalues[0];
  return q;
}

double QuadraticForm::inverse_apply(const Vec& u) const {
  Vec w = matrix.ldlt().solve(u);
  return u.dot(w);
}

std::vector<double> tilted_weights(const WalkModel& model, const Vec& u, double* log_kappa_out) {
  const auto& lp = model.log_probabilities();
  const std::size_t k = lp.size();
  std::vector<double> w(k);
  const Eigen::VectorXd dots = model.step_matrix() * Eigen::VectorXd(u);
  double mx = -INFINITY;
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = lp[i] + dots[static_cast<Eigen::Index>(i)];
    mx = std::max(mx, w[i]);
  }
  double total = 0.0;
  for (auto& x : w) {
    x = std::exp(x - mx);
    total += x;
  }
  for (auto& x : w) x /= total;
  if (log_kappa_out) *log_kappa_out = mx + std::log(total);
  return w;
}

double log_kappa(const WalkModel& model, const Vec& u) {
  double lk = 0.0;
  tilted_weights(model, u, &lk);
  return lk;
}

double kappa(const WalkModel& model, const Vec& u) {
  const Eigen::VectorXd dots = model.step_matrix() * Eigen::VectorXd(u);
  if (dots.maxCoeff() > 700.0)
    throw OverflowGuard("kappa(u) overflows for max <u,v> = " + std::to_string(dots.maxCoeff()) +
                        "; evaluate log_kappa instead");
  double s = 0.0;
  const auto& p = model.probabilities();
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * std::exp(dots[static_cast<Eigen::Index>(i)]);
  return s;
}

Vec grad_log_kappa(const WalkModel& model, const Vec& u) {
  const auto w = tilted_weights(model, u);
  Vec g = Vec::Zero(model.dim());
  const auto& steps = model.step_matrix();
  for (std::size_t i = 0; i < w.size(); ++i) g += w[i] * steps.row(static_cast<Eigen::Index>(i)).transpose();
  return g;
}

QuadraticForm hessian_log_kappa(const WalkModel& model, const Vec& u) {
  const auto w = tilted_weights(model, u);
  const auto& steps = model.step_matrix();
  const int d = model.dim();
  Vec g = Vec::Zero(d);
  for (std::size_t i = 0; i < w.size(); ++i) g += w[i] * steps.row(static_cast<Eigen::Index>(i)).transpose();
  Mat h = Mat::Zero(d, d);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Vec c = steps.row(static_cast<Eigen::Index>(i)).transpose() - g;
    h += w[i] * c * c.transpose();
  }
  return QuadraticForm::from_matrix(h);
}

Mat hessian_pair_sum(const WalkModel& model, const Vec& u) {
  const auto w = tilted_weights(model, u);
  const auto& steps = model.step_matrix();
  const int d = model.dim();
  Mat h = Mat::Zero(d, d);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      Vec diff = (steps.row(static_cast<Eigen::Index>(i)) - steps.row(static_cast<Eigen::Index>(j))).transpose();
      h += (w[i] * w[j]) * diff * diff.transpose();
    }
  // The i < j half of the symmetric double sum carries the factor 1/2.
  return h;
}

std::complex<double> char_function(const WalkModel& model, const Vec& theta) {
  std::complex<double> s{0.0, 0.0};
  const auto& p = model.probabilities();
  const Eigen::VectorXd dots = model.step_matrix() * Eigen::VectorXd(theta);
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * std::polar(1.0, dots[static_cast<Eigen::Index>(i)]);
  return s;
}

UnitarySet unitary_set(const WalkModel& model) {
  const auto& lattice = model.difference_lattice();
  const double den = static_cast<double>(lattice.common_denominator());
  UnitarySet out;
  for (const auto& y : lattice.dual_representatives()) {
    Vec theta(model.dim());
    for (int i = 0; i < model.dim(); ++i) theta[i] = 2.0 * std::numbers::pi * static_cast<double>(y[i]) / den;
    out.points.push_back(theta);
  }
  std::sort(out.points.begin(), out.points.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size(),
                                        [](double x, double y) { return std::abs(x) < std::abs(y) || (std::abs(x) == std::abs(y) && x < y); });
  });
  out.cardinality = static_cast<int>(out.points.size());
  return out;
}

}  // namespace latticewalk
