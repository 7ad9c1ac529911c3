#include "latticewalk/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include <Eigen/LU>

#include "latticewalk/asymptotics.hpp"
#include "latticewalk/cumulant.hpp"
#include "latticewalk/errors.hpp"
#include "latticewalk/exact_kernel.hpp"
#include "latticewalk/lattice_adapters.hpp"
#include "latticewalk/saddle.hpp"

namespace latticewalk {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

CheckResult result(std::string name, bool passed, std::string detail) {
  return CheckResult{std::move(name), {}, passed, std::move(detail)};
}

// Random convex combination of the hull vertices (flat Dirichlet weights).
Vec random_combination(const WalkModel& model, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Vec delta = Vec::Zero(model.dim());
  double total = 0.0;
  for (const auto& v : model.hull().vertices()) {
    const double w = expo(rng);
    delta += w * to_vec(v);
    total += w;
  }
  return delta / total;
}

// Random velocity with dist(delta, boundary) >= min_dist, pulled toward the
// mean by a uniform factor.
Vec random_interior(const WalkModel& model, std::mt19937_64& rng, double min_dist) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double lam = unit(rng);
    const Vec delta = lam * random_combination(model, rng) + (1.0 - lam) * model.mean();
    if (model.hull().dist_boundary(delta) >= min_dist) return delta;
  }
  throw Error("no interior point found at distance " + fmt(min_dist));
}

Vec random_direction(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec u(d);
  do {
    for (int i = 0; i < d; ++i) u[i] = gauss(rng);
  } while (u.norm() < 1e-6);
  return u / u.norm();
}

// Largest t with delta0 + t u in the hull.
double ray_exit(const WalkModel& model, const Vec& from, const Vec& u) {
  double t = std::numeric_limits<double>::infinity();
  for (const auto& f : model.hull().facets()) {
    const double a = f.normal.dot(u);
    if (a > 1e-15) t = std::min(t, (f.offset - f.normal.dot(from)) / a);
  }
  return t;
}

// Least-squares slope of ys against xs.
double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Velocity grid over the bounding box of the support with `per_axis` points
// per axis, restricted to dist >= min_dist.
std::vector<Vec> velocity_grid(const WalkModel& model, int per_axis, double min_dist) {
  const int d = model.dim();
  std::vector<Vec> out;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Vec delta(d);
    for (int i = 0; i < d; ++i) {
      const double lo = static_cast<double>(model.axis_min()[i]);
      const double hi = static_cast<double>(model.axis_max()[i]);
      delta[i] = lo + (hi - lo) * idx[i] / per_axis;
    }
    if (model.hull().dist_boundary(delta) >= min_dist) out.push_back(delta);
    int i = d - 1;
    while (i >= 0 && ++idx[i] > per_axis) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

}  // namespace

// =============================================================================
// Walk model
// =============================================================================

CheckResult check_support_in_class(const WalkModel& model, int n_max) {
  KernelStepper stepper(model);
  std::size_t checked = 0;
  for (int n = 1; n <= n_max; ++n) {
    const auto& t = stepper.step();
    for (std::size_t f = 0; f < t.values.size(); ++f) {
      if (t.values[f] == 0.0) continue;
      ++checked;
      const Point x = t.values.point(f);
      if (!model.on_class(n, x))
        return result("walk_model.support_in_class", false,
                      "p(" + std::to_string(n) + "; " + format_point(x) + ") > 0 off class");
    }
  }
  return result("walk_model.support_in_class", true,
                "n<=" + std::to_string(n_max) + " entries=" + std::to_string(checked));
}

CheckResult check_period_matches_unitary(const WalkModel& model) {
  const int r = model.period();
  const int u = unitary_set(model).cardinality;
  const int iterated = period(model);
  return result("walk_model.period_matches_unitary", r == u && r == iterated,
                "r=" + std::to_string(r) + " |U|=" + std::to_string(u) + " iterated=" + std::to_string(iterated));
}

CheckResult check_first_passage_ratio(const WalkModel& model, int radius) {
  const int d = model.dim();
  const std::string name = "walk_model.first_passage_ratio";
  DenseBox<int> first(Point(static_cast<std::size_t>(d), -radius),
                      std::vector<std::int64_t>(static_cast<std::size_t>(d), 2 * radius + 1), -1);
  std::size_t remaining = 0;
  for (std::size_t f = 0; f < first.size(); ++f) {
    const auto norm = l1_norm(first.point(f));
    if (norm > 0 && norm <= radius) ++remaining;
  }
  for (int n = 1; remaining > 0; ++n) {
    if (n > model.options().step_budget)
      return result(name, false, std::to_string(remaining) + " points unreached within the step budget");
    const auto sup = n_step_support(model, n);
    for (std::size_t f = 0; f < sup.size(); ++f) {
      if (!sup[f]) continue;
      const Point x = sup.point(f);
      const auto norm = l1_norm(x);
      if (norm == 0 || norm > radius || first.get(x) >= 0) continue;
      first[first.flat(x)] = n;
      --remaining;
    }
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::size_t probes = 0;
  for (std::size_t f = 0; f < first.size(); ++f) {
    if (first[f] < 0) continue;
    const Point x = first.point(f);
    const double ratio = static_cast<double>(first[f]) / static_cast<double>(l1_norm(x));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (model.class_of(x) != first[f] % model.period())
      return result(name, false, "class_of(" + format_point(x) + ") disagrees with m_x=" + std::to_string(first[f]));
    // Spot-check the breadth-first search on a sparse subset.
    if (f % 97 == 0) {
      ++probes;
      const auto ci = class_index(model, x);
      if (ci.m_x != first[f])
        return result(name, false, "class_index(" + format_point(x) + ").m_x=" + std::to_string(ci.m_x) +
                                       " but first passage " + std::to_string(first[f]));
    }
  }
  const bool ok = lo >= 1.0 / static_cast<double>(model.range()) - 1e-15 && std::isfinite(hi);
  return result(name, ok, "m_x/|x|_1 in [" + fmt(lo) + ", " + fmt(hi) + "] over |x|_1<=" + std::to_string(radius) +
                              " (" + std::to_string(probes) + " search probes)");
}

// =============================================================================
// Cumulant
// =============================================================================

CheckResult check_grad_fd(const WalkModel& model, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 3.0);
  const int d = model.dim();
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    const Vec u = random_direction(d, rng) * radius(rng);
    const Vec g = grad_log_kappa(model, u);
    const double h = 1e-5;
    for (int i = 0; i < d; ++i) {
      Vec e = Vec::Zero(d);
      e[i] = h;
      const double fd = (log_kappa(model, u + e) - log_kappa(model, u - e)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[i]));
    }
  }
  return result("cumulant.grad_matches_fd", worst <= 1e-6, "max abs err " + fmt(worst));
}

CheckResult check_hessian_routes(const WalkModel& model, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 3.0);
  double worst = 0.0;
  for (int t = 0; t < samples; ++t) {
    const Vec u = random_direction(model.dim(), rng) * radius(rng);
    const Mat a = hessian_log_kappa(model, u).matrix;
    const Mat b = hessian_pair_sum(model, u);
    worst = std::max(worst, (a - b).norm() / a.norm());
  }
  return result("cumulant.hessian_routes_agree", worst <= 1e-12, "max rel err " + fmt(worst));
}

CheckResult check_char_modulus(const WalkModel& model, int samples, std::uint64_t seed) {
  const std::string name = "cumulant.char_modulus";
  const int d = model.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double top = 0.0;
  for (int t = 0; t < samples; ++t) {
    Vec th(d);
    for (int i = 0; i < d; ++i) th[i] = angle(rng);
    top = std::max(top, std::abs(char_function(model, th)));
  }
  if (top > 1.0 + 1e-15) return result(name, false, "|kappa(i theta)| reached " + fmt(top));
  const auto us = unitary_set(model);
  for (const auto& th : us.points) {
    const double m = std::abs(char_function(model, th));
    if (std::abs(m - 1.0) > 1e-10)
      return result(name, false, "unitary point (" + format_vec(th) + ") has modulus " + fmt(m));
    for (double h : {1e-1, 1e-2, 1e-3})
      for (int i = 0; i < d; ++i)
        for (double sgn : {-1.0, 1.0}) {
          Vec p = th;
          p[i] += sgn * h;
          if (std::abs(char_function(model, p)) >= 1.0 - 1e-10)
            return result(name, false, "modulus one at non-unitary (" + format_vec(p) + ")");
        }
  }
  return result(name, true, "max random modulus " + fmt(top) + ", |U|=" + std::to_string(us.cardinality));
}

CheckResult check_tilt_lower_bound(const WalkModel& model, int rays, std::uint64_t seed) {
  const std::string name = "cumulant.tilt_lower_bound";
  std::mt19937_64 rng(seed);
  SaddleOptions opt;
  opt.allow_near_boundary = true;
  double eta_min = std::numeric_limits<double>::infinity(), eta_max = 0.0;
  std::vector<std::pair<double, double>> samples;  // (log dist, log min weight)
  for (int r = 0; r < rays; ++r) {
    const Vec u = random_direction(model.dim(), rng);
    const double tmax = ray_exit(model, model.mean(), u);
    std::vector<double> lx, ly;
    for (int k = 2; k <= 9; ++k) {
      const Vec delta = model.mean() + tmax * (1.0 - std::pow(10.0, -0.5 * k)) * u;
      const double dist = model.hull().dist_boundary(delta);
      if (dist < 1e-5) continue;
      const auto sp = solve_saddle(model, delta, opt);
      const auto w = tilted_weights(model, sp.s);
      const double wmin = *std::min_element(w.begin(), w.end());
      lx.push_back(std::log(dist));
      ly.push_back(std::log(wmin));
      samples.emplace_back(lx.back(), ly.back());
    }
    if (lx.size() < 4) continue;
    // Local exponent from the four points nearest the boundary.
    const std::vector<double> tx(lx.end() - 4, lx.end()), ty(ly.end() - 4, ly.end());
    const double eta = slope(tx, ty);
    eta_min = std::min(eta_min, eta);
    eta_max = std::max(eta_max, eta);
  }
  if (samples.empty()) return result(name, false, "no ray samples");
  double log_c = std::numeric_limits<double>::infinity();
  for (const auto& [lx, ly] : samples) log_c = std::min(log_c, ly - eta_max * lx);
  const bool ok = eta_min >= 0.98 && std::isfinite(log_c);
  return result(name, ok, "eta_fit in [" + fmt(eta_min) + ", " + fmt(eta_max) + "], c=" + fmt(std::exp(log_c)));
}

// =============================================================================
// Convex geometry
// =============================================================================

CheckResult check_hull_combinations(const WalkModel& model, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (int t = 0; t < samples; ++t) {
    Vec delta = Vec::Zero(model.dim());
    double total = 0.0;
    for (const auto& v : model.support()) {
      const double w = expo(rng);
      delta += w * to_vec(v);
      total += w;
    }
    delta /= total;
    if (model.hull().contains(delta) == Location::outside)
      return result("convex_geometry.hull_contains_combinations", false, "(" + format_vec(delta) + ") outside");
  }
  return result("convex_geometry.hull_contains_combinations", true, std::to_string(samples) + " combinations");
}

CheckResult check_mean_interior(const WalkModel& model) {
  const double dist = model.hull().dist_boundary(model.mean());
  return result("convex_geometry.mean_interior", dist > 0.0, "dist(delta0)=" + fmt(dist));
}

CheckResult check_dist_concave(const WalkModel& model, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& hull = model.hull();
  for (int t = 0; t < samples; ++t) {
    const Vec a = random_combination(model, rng), b = random_combination(model, rng);
    const double lam = unit(rng);
    const double mid = hull.dist_boundary(lam * a + (1 - lam) * b);
    const double chord = lam * hull.dist_boundary(a) + (1 - lam) * hull.dist_boundary(b);
    if (mid < chord - 1e-12)
      return result("convex_geometry.dist_concave", false,
                    "segment (" + format_vec(a) + ")-(" + format_vec(b) + ") at " + fmt(lam));
  }
  return result("convex_geometry.dist_concave", true, std::to_string(samples) + " triples");
}

// =============================================================================
// Saddle
// =============================================================================

CheckResult check_legendre(const WalkModel& model, int samples, std::uint64_t seed) {
  const std::string name = "saddle.legendre_duality";
  std::mt19937_64 rng(seed);
  std::vector<std::pair<Vec, double>> others;
  for (int i = 0; i < 20; ++i) {
    const Vec d2 = random_interior(model, rng, 1e-3);
    others.emplace_back(d2, phi(model, d2));
  }
  RateFunction rate(model);
  double worst = 0.0, worst_conj = 0.0;
  for (int t = 0; t < samples; ++t) {
    const Vec delta = random_interior(model, rng, 1e-3);
    const auto sp = solve_saddle(model, delta);
    const double lk = log_kappa(model, sp.s);
    worst = std::max(worst, std::abs(rate(delta) - (sp.s.dot(delta) - lk)));
    for (const auto& [d2, ph2] : others) worst_conj = std::max(worst_conj, sp.s.dot(d2) - ph2 - lk);
  }
  const bool ok = worst <= 1e-10 && worst_conj <= 1e-10;
  return result(name, ok, "max |phi - (<s,delta> - log kappa)| " + fmt(worst) + ", max conjugacy excess " +
                              fmt(worst_conj));
}

CheckResult check_phi_gradient(const WalkModel& model, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = model.dim();
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    const Vec delta = random_interior(model, rng, 0.1);
    const auto sp = solve_saddle(model, delta);
    const double h = 1e-5;
    for (int i = 0; i < d; ++i) {
      Vec e = Vec::Zero(d);
      e[i] = h;
      const double fd = (phi(model, delta + e) - phi(model, delta - e)) / (2 * h);
      worst = std::max(worst, std::abs(fd - sp.s[i]));
    }
  }
  return result("saddle.phi_gradient", worst <= 1e-5, "max abs err " + fmt(worst));
}

CheckResult check_phi_hessian(const WalkModel& model, int points, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = model.dim();
  double worst = 0.0;
  for (int t = 0; t < points; ++t) {
    const Vec delta = random_interior(model, rng, 0.1);
    const auto sp = solve_saddle(model, delta);
    const Mat inv = sp.b_s.matrix.inverse();
    const double h = 1e-4;
    Mat fd(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        Vec ei = Vec::Zero(d), ej = Vec::Zero(d);
        ei[i] = h;
        ej[j] = h;
        fd(i, j) = (phi(model, delta + ei + ej) - phi(model, delta + ei - ej) - phi(model, delta - ei + ej) +
                    phi(model, delta - ei - ej)) /
                   (4 * h * h);
      }
    worst = std::max(worst, (fd - inv).cwiseAbs().maxCoeff() / inv.cwiseAbs().maxCoeff());
  }
  return result("saddle.phi_hessian", worst <= 1e-4, "max rel err " + fmt(worst));
}

CheckResult check_claim_ratio(const WalkModel& model, double min_dist, double lo, double hi) {
  const int d = model.dim();
  const int per_axis = d == 1 ? 2000 : d == 2 ? 100 : d == 3 ? 24 : 12;
  const auto grid = velocity_grid(model, per_axis, min_dist);
  RateFunction rate(model);
  double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
  bool warm = false;
  for (const auto& delta : grid) {
    const double ref = phi_taylor_reference(model, delta);
    if (ref == 0.0) continue;
    const double ratio = rate(delta, warm) / ref;
    warm = true;
    cmin = std::min(cmin, ratio);
    cmax = std::max(cmax, ratio);
  }
  const bool ok = cmin > 0.0 && cmin >= lo && cmax <= hi;
  return result("saddle.claim_ratio", ok,
                "[c, C] = [" + fmt(cmin) + ", " + fmt(cmax) + "] over " + std::to_string(grid.size()) + " points");
}

CheckResult check_phi_convex(const WalkModel& model, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RateFunction rate(model);
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < pairs; ++t) {
    const Vec a = random_interior(model, rng, 1e-3), b = random_interior(model, rng, 1e-3);
    worst = std::max(worst, rate(0.5 * (a + b)) - 0.5 * rate(a) - 0.5 * rate(b));
  }
  return result("saddle.phi_convex", worst <= 1e-12, "max midpoint excess " + fmt(worst));
}

CheckResult check_eigen_decay_on_rays(const WalkModel& model, int rays, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SaddleOptions opt;
  opt.allow_near_boundary = true;
  const double base = hessian_log_kappa(model, Vec::Zero(model.dim())).eigenvalues[0];
  double last_min = std::numeric_limits<double>::infinity();
  for (int r = 0; r < rays; ++r) {
    const Vec u = random_direction(model.dim(), rng);
    const double tmax = ray_exit(model, model.mean(), u);
    double prev = std::numeric_limits<double>::infinity();
    for (double f : {0.3, 0.5, 0.7, 0.9, 0.97, 0.99, 0.997, 0.999}) {
      const Vec delta = model.mean() + f * tmax * u;
      if (model.hull().dist_boundary(delta) < 1e-6) break;
      const double ev = solve_saddle(model, delta, opt).b_s.eigenvalues[0];
      if (ev >= prev)
        return result("saddle.eigen_decay_on_rays", false,
                      "smallest eigenvalue rises to " + fmt(ev) + " at (" + format_vec(delta) + ")");
      prev = ev;
    }
    last_min = std::min(last_min, prev);
    if (!(prev < base))
      return result("saddle.eigen_decay_on_rays", false, "ray ends above the B_0 eigenvalue");
  }
  return result("saddle.eigen_decay_on_rays", true,
                "lambda_min(B_0)=" + fmt(base) + ", smallest at f=0.999: " + fmt(last_min));
}

// =============================================================================
// Exact kernel
// =============================================================================

CheckResult check_oracle_agreement(const WalkModel& model, const std::vector<int>& ns, double tol) {
  double worst = 0.0, worst_point = 0.0;
  int worst_n = 0;
  for (int n : ns) {
    const auto conv = convolve_kernel(model, n);
    const auto four = fourier_kernel(model, n);
    for (std::size_t f = 0; f < conv.values.size(); ++f) {
      const double e = std::abs(conv.values[f] - four.values[f]);
      if (e > worst) {
        worst = e;
        worst_n = n;
      }
    }
    // Direct DFT sums at a few cells along the box diagonal.
    for (int k = 0; k < 3; ++k) {
      const std::size_t f = conv.values.size() * static_cast<std::size_t>(2 * k + 1) / 6;
      const Point x = conv.values.point(f);
      worst_point = std::max(worst_point, std::abs(fourier_point(model, n, x) - conv.values[f]));
    }
  }
  const bool ok = worst <= tol && worst_point <= tol;
  return result("exact_kernel.oracle_agreement", ok,
                "max |conv - dft| " + fmt(worst) + " (n=" + std::to_string(worst_n) + "), point sums " +
                    fmt(worst_point));
}

CheckResult check_mass_and_moments(const WalkModel& model, int n_max) {
  const std::string name = "exact_kernel.mass_and_moments";
  const int d = model.dim();
  Mat cov = Mat::Zero(d, d);
  for (std::size_t i = 0; i < model.support_size(); ++i) {
    const Vec v = to_vec(model.support()[i]) - model.mean();
    cov += model.probabilities()[i] * v * v.transpose();
  }
  KernelStepper stepper(model);
  double worst_mass = 0.0, worst_mean = 0.0, worst_cov = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto& t = stepper.step();
    const double mass_err = std::abs(t.mass() - 1.0) / n;
    worst_mass = std::max(worst_mass, mass_err);
    if (mass_err > 1e-12) return result(name, false, "mass at n=" + std::to_string(n) + " off by " + fmt(mass_err * n));
    if (n % 10 != 0 && n != n_max) continue;
    Vec first = Vec::Zero(d);
    Mat second = Mat::Zero(d, d);
    const Vec centre = n * model.mean();
    for (std::size_t f = 0; f < t.values.size(); ++f) {
      const double p = t.values[f];
      if (p == 0.0) continue;
      const Vec x = to_vec(t.values.point(f)) - centre;
      first += p * x;
      second += p * x * x.transpose();
    }
    worst_mean = std::max(worst_mean, first.norm() / n);
    worst_cov = std::max(worst_cov, (second - n * cov).norm() / n);
  }
  const bool ok = worst_mean <= 1e-10 && worst_cov <= 1e-8;
  return result(name, ok, "n<=" + std::to_string(n_max) + " mass/n " + fmt(worst_mass) + ", mean/n " +
                              fmt(worst_mean) + ", cov/n " + fmt(worst_cov));
}

CheckResult check_upper_bound(const WalkModel& model, int n_max) {
  try {
    const auto rep = upper_bound_check(model, n_max);
    return result("exact_kernel.upper_bound", true,
                  "n<=" + std::to_string(n_max) + " checked=" + std::to_string(rep.checked) + " max ratio " +
                      fmt(rep.max_ratio));
  } catch (const InvariantViolation& e) {
    return result("exact_kernel.upper_bound", false, e.what());
  }
}

// =============================================================================
// Asymptotics
// =============================================================================

CheckResult check_theorem7_envelope(const WalkModel& model, const std::vector<int>& ns, double min_dist) {
  const std::string name = "asymptotics.theorem7_envelope";
  const auto grid = velocity_grid(model, 10, min_dist);
  if (grid.empty() || ns.empty()) return result(name, false, "empty grid");
  std::vector<double> c;
  for (int n : ns) {
    const auto table = convolve_kernel(model, n);
    double cn = 0.0;
    for (const auto& target : grid) {
      const Point x = nearest_admissible(model, n, target);
      if (model.hull().dist_boundary(velocity(x, n)) < min_dist) continue;
      const double exact = table.at(x);
      const double asym = theorem7_point(model, n, x).value;
      cn = std::max(cn, n * std::abs(asym / exact - 1.0));
    }
    c.push_back(cn);
  }
  std::string detail = "n*|rel err| max:";
  for (std::size_t i = 0; i < ns.size(); ++i) detail += " n=" + std::to_string(ns[i]) + ":" + fmt(c[i]);
  const bool ok = std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); }) &&
                  c.back() <= 1.25 * c.front() + 1e-9;
  return result(name, ok, detail);
}

CheckResult check_corollary_continuity(const WalkModel& model) {
  const std::string name = "asymptotics.corollary_ratio_continuity";
  // Monotonicity holds only near the mean, so the ray is sampled close to it;
  // a large n keeps the lattice rounding of x/n well below the step sizes.
  const std::int64_t n = 20000;
  std::vector<Vec> dirs;
  for (const auto& v : model.support()) {
    const Vec u = to_vec(v) - model.mean();
    if (u.norm() > 1e-12) dirs.push_back(u / u.norm());
  }
  double smallest = std::numeric_limits<double>::infinity();
  for (const auto& u : dirs) {
    const double tmax = ray_exit(model, model.mean(), u);
    double prev = std::numeric_limits<double>::infinity();
    for (double f : {0.1, 0.05, 0.025, 0.0125, 0.00625}) {
      const Point x = nearest_admissible(model, n, model.mean() + f * tmax * u);
      const double c = corollary1_point(model, n, x, 1e-2).value;
      const double t = theorem7_point(model, n, x).value;
      const double gap = std::abs(c / t - 1.0);
      if (!(gap < prev))
        return result(name, false, "gap " + fmt(gap) + " does not shrink at x=(" + format_point(x) + ")");
      prev = gap;
    }
    smallest = std::min(smallest, prev);
  }
  return result(name, smallest < 1e-2, "smallest |ratio - 1| " + fmt(smallest) + " at 0.625% of the ray");
}

CheckResult check_simple1d_expansion(double bound) {
  const WalkModel model = WalkModel::validate(
      parse_walkspec("dim 1\nstep 1 1/2\nstep -1 1/2\n"));
  double worst = 0.0;
  for (int n : {50, 100, 200, 400, 800}) {
    const auto table = convolve_kernel(model, n);
    for (int k = 0; k <= 9; ++k) {
      Vec target(1);
      target << 0.1 * k;
      const Point x = nearest_admissible(model, n, target);
      const double delta = static_cast<double>(x[0]) / n;
      const double rel = theorem7_point(model, n, x).value / table.at(x) - 1.0;
      worst = std::max(worst, std::abs(rel) * n * (1.0 - std::abs(delta)));
    }
  }
  return result("asymptotics.simple1d_expansion", worst <= bound,
                "max |rel err| n (1 - |delta|) = " + fmt(worst) + " (bound " + fmt(bound) + ")");
}

// =============================================================================
// Lattice adapters
// =============================================================================

CheckResult check_hex_decomposition(int n_max) {
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto viaq = hex_table(n);
    const auto dp = hex_graph_dp(n);
    for (std::size_t f = 0; f < dp.size(); ++f) worst = std::max(worst, std::abs(viaq[f] - dp[f]));
  }
  return result("lattice_adapters.hex_decomposition", worst <= 1e-12,
                "n<=" + std::to_string(n_max) + " max |q route - graph DP| " + fmt(worst));
}

CheckResult check_hex_mass(int n_max) {
  double worst = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const auto t = hex_table(n);
    double total = 0.0, comp = 0.0;
    for (std::size_t f = 0; f < t.size(); ++f) {
      const double y = t[f] - comp;
      const double s = total + y;
      comp = (s - total) - y;
      total = s;
    }
    worst = std::max(worst, std::abs(total - 1.0) / n);
  }
  return result("lattice_adapters.hex_mass", worst <= 1e-12,
                "n<=" + std::to_string(n_max) + " max |mass - 1|/n " + fmt(worst));
}

CheckResult check_hex_exponents() {
  const WalkModel q = hexagonal_q_model();
  std::vector<double> c;
  const std::vector<int> ns{51, 101, 201, 401};
  for (int n : ns) {
    const std::int64_t m = (n - 1) / 2;
    double cn = 0.0;
    for (double a : {-0.2, -0.1, 0.0, 0.1, 0.2})
      for (double b : {-0.2, -0.1, 0.0, 0.1, 0.2}) {
        const auto j = static_cast<std::int64_t>(std::lround(a * n));
        auto jp = static_cast<std::int64_t>(std::lround(b * n));
        while (HexPoint::tau_of(j, jp) != 2) ++jp;
        const auto x = HexPoint::make(j, jp);
        Vec delta(2);
        delta << static_cast<double>(2 * j + jp) / (3.0 * m), static_cast<double>(jp - j) / (3.0 * m);
        const double base = phi(q, delta);
        double gap = 0.0;
        for (const auto& y : x.neighbours()) gap = std::max(gap, std::abs(phi(q, velocity(y.q_image(), m)) - base));
        cn = std::max(cn, m * gap / (delta.lpNorm<1>() + 1.0 / m));
      }
    c.push_back(cn);
  }
  std::string detail = "max m|dphi|/(|delta|_1 + 1/m):";
  for (std::size_t i = 0; i < ns.size(); ++i) detail += " n=" + std::to_string(ns[i]) + ":" + fmt(c[i]);
  return result("lattice_adapters.hex_exponent_comparability", c.back() <= 1.25 * c.front(), detail);
}

CheckResult check_triangular_accuracy() {
  const WalkModel tri = triangular_model();
  const int n = 100;
  const auto table = convolve_kernel(tri, n);
  double worst = 0.0;
  int points = 0;
  for (std::int64_t a = -10; a <= 10; ++a)
    for (std::int64_t b = -10; b <= 10; ++b) {
      const TriangularPoint x{a, b};
      if (tri.hull().dist_boundary(velocity(x.image(), n)) < 0.25) continue;
      worst = std::max(worst, std::abs(triangular_asymptotic(n, x) / table.at(x.image()) - 1.0));
      ++points;
    }
  const double mass_err = std::abs(table.mass() - 1.0);
  return result("lattice_adapters.triangular_accuracy", worst < 0.03 && mass_err <= 1e-12 * n,
                "n=100 max rel err " + fmt(worst) + " over " + std::to_string(points) + " points, |mass - 1| " +
                    fmt(mass_err));
}

// =============================================================================
// Runner
// =============================================================================

std::string format_result(const CheckResult& r) {
  std::string s = r.passed ? "PASS " : "FAIL ";
  s += r.name;
  if (!r.subject.empty()) s += " [" + r.subject + "]";
  if (!r.detail.empty()) s += " " + r.detail;
  return s;
}

std::vector<CheckResult> run_selftest(const std::vector<std::pair<std::string, WalkModel>>& models,
                                      std::ostream* log, bool stop_on_failure) {
  std::vector<CheckResult> out;
  bool stopped = false;
  auto record = [&](CheckResult r, const std::string& subject) {
    if (stopped) return;
    r.subject = subject;
    if (log) *log << format_result(r) << std::endl;
    out.push_back(std::move(r));
    if (!out.back().passed && stop_on_failure) stopped = true;
  };
  auto guarded = [&](const std::string& name, const std::string& subject, auto&& fn) {
    if (stopped) return;
    try {
      record(fn(), subject);
    } catch (const std::exception& e) {
      record(result(name, false, std::string("error: ") + e.what()), subject);
    }
  };

  for (const auto& [label, model] : models) {
    const int d = model.dim();
    const std::uint64_t seed = 1234;
    guarded("walk_model.support_in_class", label, [&] { return check_support_in_class(model, 50); });
    guarded("walk_model.period_matches_unitary", label, [&] { return check_period_matches_unitary(model); });
    guarded("walk_model.first_passage_ratio", label, [&] { return check_first_passage_ratio(model, 20); });
    guarded("cumulant.grad_matches_fd", label, [&] { return check_grad_fd(model, 100, seed); });
    guarded("cumulant.hessian_routes_agree", label, [&] { return check_hessian_routes(model, 100, seed); });
    guarded("cumulant.char_modulus", label, [&] { return check_char_modulus(model, 10000, seed); });
    guarded("cumulant.tilt_lower_bound", label, [&] { return check_tilt_lower_bound(model, 25, seed); });
    guarded("convex_geometry.hull_contains_combinations", label,
            [&] { return check_hull_combinations(model, 1000, seed); });
    guarded("convex_geometry.mean_interior", label, [&] { return check_mean_interior(model); });
    guarded("convex_geometry.dist_concave", label, [&] { return check_dist_concave(model, 200, seed); });
    guarded("saddle.legendre_duality", label, [&] { return check_legendre(model, 100, seed); });
    guarded("saddle.phi_gradient", label, [&] { return check_phi_gradient(model, 20, seed); });
    guarded("saddle.phi_hessian", label, [&] { return check_phi_hessian(model, 20, seed); });
    guarded("saddle.claim_ratio", label, [&] { return check_claim_ratio(model, 1e-3, 0.1, 10.0); });
    guarded("saddle.phi_convex", label, [&] { return check_phi_convex(model, 200, seed); });
    guarded("saddle.eigen_decay_on_rays", label, [&] { return check_eigen_decay_on_rays(model, 10, seed); });
    guarded("exact_kernel.oracle_agreement", label,
            [&] { return check_oracle_agreement(model, {1, 5, 20, 50}, 1e-10); });
    guarded("exact_kernel.mass_and_moments", label,
            [&] { return check_mass_and_moments(model, d >= 3 ? 50 : 100); });
    guarded("exact_kernel.upper_bound", label, [&] { return check_upper_bound(model, d >= 3 ? 30 : 100); });
    guarded("asymptotics.theorem7_envelope", label, [&] {
      return check_theorem7_envelope(model, d >= 3 ? std::vector<int>{50, 100} : std::vector<int>{50, 100, 200}, 0.2);
    });
    guarded("asymptotics.corollary_ratio_continuity", label, [&] { return check_corollary_continuity(model); });
  }
  guarded("asymptotics.simple1d_expansion", "simple-d1", [&] { return check_simple1d_expansion(0.5); });
  guarded("lattice_adapters.hex_decomposition", "hex", [&] { return check_hex_decomposition(30); });
  guarded("lattice_adapters.hex_mass", "hex", [&] { return check_hex_mass(100); });
  guarded("lattice_adapters.hex_exponent_comparability", "hex", [&] { return check_hex_exponents(); });
  guarded("lattice_adapters.triangular_accuracy", "triangular", [&] { return check_triangular_accuracy(); });
  return out;
}

}  // namespace latticewalk
