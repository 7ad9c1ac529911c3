#pragma once

#include <complex>
#include <vector>

#include "latticewalk/types.hpp"
#include "latticewalk/walk_model.hpp"

namespace latticewalk {

/// Symmetric positive definite form with its spectral data.
struct QuadraticForm {
  Mat matrix;
  Vec eigenvalues;  // ascending
  double det = 0.0;
  /// ||B^{-1}|| = 1 / smallest eigenvalue.
  double inv_norm = 0.0;

  static QuadraticForm from_matrix(const Mat& m);
  double operator()(const Vec& u) const { return u.dot(matrix * u); }
  /// B^{-1}(u, u).
  double inverse_apply(const Vec& u) const;
};

/// Frequencies in [-pi, pi)^d where the characteristic function has modulus one.
struct UnitarySet {
  std::vector<Vec> points;
  int cardinality = 0;
};

/// kappa(u) = sum p(v) e^{<u, v>}. Throws OverflowGuard when max <u, v> > 700;
/// use log_kappa there.
double kappa(const WalkModel& model, const Vec& u);

/// log kappa(u) by log-sum-exp; finite for every u.
double log_kappa(const WalkModel& model, const Vec& u);

/// Tilted step distribution p(v) e^{<u,v>} / kappa(u), one entry per support
/// vector. Also returns log kappa(u) through `log_kappa_out` when non-null.
std::vector<double> tilted_weights(const WalkModel& model, const Vec& u, double* log_kappa_out = nullptr);

/// Tilted mean, which equals grad log kappa(u).
Vec grad_log_kappa(const WalkModel& model, const Vec& u);

/// Hessian of log kappa as the tilted covariance sum w_v (v - m)(v - m)^T.
QuadraticForm hessian_log_kappa(const WalkModel& model, const Vec& u);

/// The same Hessian through the pair sum 1/2 sum w_v w_v' (v - v')(v - v')^T.
Mat hessian_pair_sum(const WalkModel& model, const Vec& u);

/// kappa(i theta), the characteristic function of one step.
std::complex<double> char_function(const WalkModel& model, const Vec& theta);

/// Computed from the dual of the difference lattice: theta is unitary iff
/// <theta, v - v'> is in 2 pi Z for all v, v' in V.
UnitarySet unitary_set(const WalkModel& model);

}  // namespace latticewalk
