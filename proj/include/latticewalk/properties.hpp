#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "latticewalk/walk_model.hpp"

namespace latticewalk {

/// Outcome of one invariant check. `detail` carries the measured quantities
/// or the failing witness.
struct CheckResult {
  std::string name;
  std::string subject;
  bool passed = false;
  std::string detail;
};

// Walk model.
/// p(n; x) > 0 only on the class of n, for n <= n_max.
CheckResult check_support_in_class(const WalkModel& model, int n_max);
/// period equals the number of unitary frequencies.
CheckResult check_period_matches_unitary(const WalkModel& model);
/// m_x / ||x||_1 over 0 < ||x||_1 <= radius lies in [1 / range, finite].
CheckResult check_first_passage_ratio(const WalkModel& model, int radius);

// Cumulant.
CheckResult check_grad_fd(const WalkModel& model, int samples, std::uint64_t seed);
CheckResult check_hessian_routes(const WalkModel& model, int samples, std::uint64_t seed);
/// |kappa(i theta)| <= 1 at random theta, equal to one on unitary points and
/// strictly below one on a refinement around them.
CheckResult check_char_modulus(const WalkModel& model, int samples, std::uint64_t seed);
/// Along rays toward the boundary the smallest tilted weight decays at least
/// like a power of the distance, with fitted exponent >= 1.
CheckResult check_tilt_lower_bound(const WalkModel& model, int rays, std::uint64_t seed);

// Convex geometry.
CheckResult check_hull_combinations(const WalkModel& model, int samples, std::uint64_t seed);
CheckResult check_mean_interior(const WalkModel& model);
CheckResult check_dist_concave(const WalkModel& model, int samples, std::uint64_t seed);

// Saddle.
CheckResult check_legendre(const WalkModel& model, int samples, std::uint64_t seed);
/// Central differences of phi against s (absolute 1e-5) at points with
/// dist >= 0.1.
CheckResult check_phi_gradient(const WalkModel& model, int points, std::uint64_t seed);
/// Finite-difference Hessian of phi against B_s^{-1} (relative 1e-4).
CheckResult check_phi_hessian(const WalkModel& model, int points, std::uint64_t seed);
/// phi / (1/2 B_0^{-1}(delta - delta0)) on a grid with dist >= min_dist lies
/// in [lo, hi]; the detail reports the empirical range.
CheckResult check_claim_ratio(const WalkModel& model, double min_dist, double lo, double hi);
CheckResult check_phi_convex(const WalkModel& model, int pairs, std::uint64_t seed);
/// Smallest eigenvalue of B_s decreases toward the boundary along rays.
CheckResult check_eigen_decay_on_rays(const WalkModel& model, int rays, std::uint64_t seed);

// Exact kernel.
/// Convolution against DFT inversion, all entries, absolute tolerance.
CheckResult check_oracle_agreement(const WalkModel& model, const std::vector<int>& ns, double tol);
/// Mass within 1e-12 n, mean n delta0 within 1e-10 n and covariance n B_0
/// within 1e-8 n for n <= n_max.
CheckResult check_mass_and_moments(const WalkModel& model, int n_max);
CheckResult check_upper_bound(const WalkModel& model, int n_max);

// Asymptotics.
/// n |theorem7 / exact - 1| over a velocity grid with dist >= min_dist stays
/// bounded by one constant across `ns`.
CheckResult check_theorem7_envelope(const WalkModel& model, const std::vector<int>& ns, double min_dist);
/// |corollary1 / theorem7 - 1| shrinks monotonically toward the mean along rays.
CheckResult check_corollary_continuity(const WalkModel& model);
/// Simple walk on Z: |theorem7 / exact - 1| n (1 - |delta|) over n in
/// [50, 800], delta in [0, 0.9] stays below `bound`.
CheckResult check_simple1d_expansion(double bound);

// Lattice adapters.
CheckResult check_hex_decomposition(int n_max);
CheckResult check_hex_mass(int n_max);
/// m |phi_q(delta) - phi_q(delta~)| against ||delta||_1 for the three shifted
/// neighbour velocities of odd steps.
CheckResult check_hex_exponents();
/// Triangular walk at n = 100: mass one and Corollary-1 relative error below
/// 3% for velocities near 0 with dist >= 0.25.
CheckResult check_triangular_accuracy();

/// Every check above on each model, then the model-independent ones. Prints
/// one line per check to `log` when non-null and stops after the first
/// failure when asked.
std::vector<CheckResult> run_selftest(const std::vector<std::pair<std::string, WalkModel>>& models,
                                      std::ostream* log, bool stop_on_failure);

/// "PASS name [subject] detail" or "FAIL ...".
std::string format_result(const CheckResult& r);

}  // namespace latticewalk
