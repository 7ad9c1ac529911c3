#pragma once

#include <memory>
#include <optional>

#include "latticewalk/cumulant.hpp"
#include "latticewalk/types.hpp"
#include "latticewalk/walk_model.hpp"

namespace latticewalk {

struct SaddleOptions {
  /// Stop once ||grad log kappa(s) - delta||_2 <= tol.
  double tol = 1e-12;
  int max_iterations = 200;
  /// Targets closer than this to the hull boundary are refused unless
  /// allow_near_boundary is set.
  double boundary_guard = 1e-6;
  bool allow_near_boundary = false;
  /// Newton start; zero when empty.
  std::optional<Vec> initial_guess;
};

/// Maximizer s of <x, delta> - log kappa(x) and the data derived from it.
struct SaddlePoint {
  Vec delta;
  Vec s;
  double phi = 0.0;
  double log_kappa = 0.0;
  QuadraticForm b_s;
  double objective_gap = 0.0;
  int iterations = 0;
};

/// Damped Newton with Armijo backtracking (factor 1/2, slope 1e-4) from s = 0.
/// Throws NotInInterior when delta is not strictly inside the hull (or inside
/// the boundary guard), MaxIterations when the gap is not met.
SaddlePoint solve_saddle(const WalkModel& model, const Vec& delta, const SaddleOptions& options = {});

/// Repeated phi evaluations on one model without the spectral data of B_s.
/// Not thread-safe; use one instance per thread.
class RateFunction {
 public:
  explicit RateFunction(const WalkModel& model, SaddleOptions options = {});
  ~RateFunction();
  RateFunction(const RateFunction&) = delete;
  RateFunction& operator=(const RateFunction&) = delete;

  /// phi(delta); when `warm`, Newton starts from the previous maximizer.
  double operator()(const Vec& delta, bool warm = false);
  const Vec& last_s() const { return s_; }

 private:
  struct Impl;
  const WalkModel* model_;
  SaddleOptions options_;
  std::unique_ptr<Impl> impl_;
  Vec s_;
};

/// Rate function phi(delta), the Legendre transform of log kappa.
double phi(const WalkModel& model, const Vec& delta, const SaddleOptions& options = {});

/// 1/2 B_0^{-1}(delta - delta0, delta - delta0).
double phi_taylor_reference(const WalkModel& model, const Vec& delta);

}  // namespace latticewalk
