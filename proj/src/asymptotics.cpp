#include "latticewalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>

#include "latticewalk/cumulant.hpp"
#include "latticewalk/errors.hpp"
#include "latticewalk/exact_kernel.hpp"
#include "latticewalk/parallel.hpp"

namespace latticewalk {

namespace {

double prefactor(int d, std::int64_t n, int r, double det) {
  return r * std::pow(2.0 * std::numbers::pi * static_cast<double>(n), -0.5 * d) / std::sqrt(det);
}

void check_n(std::int64_t n) {
  if (n < 1) throw Error("n must be >= 1");
}

}  // namespace

const char* to_string(Formula f) {
  switch (f) {
    case Formula::theorem7: return "theorem7";
    case Formula::corollary1: return "corollary1";
    case Formula::gaussian_remark1: return "gaussian_remark1";
    case Formula::upper_bound: return "upper_bound";
  }
  return "?";
}

AsymptoticValue theorem7_point(const WalkModel& model, std::int64_t n, const Point& x,
                               const SaddleOptions& options) {
  check_n(n);
  AsymptoticValue out;
  out.formula = Formula::theorem7;
  out.class_ok = model.on_class(n, x);
  if (!out.class_ok) return out;
  auto sp = solve_saddle(model, velocity(x, n), options);
  out.value = prefactor(model.dim(), n, model.period(), sp.b_s.det) * std::exp(-static_cast<double>(n) * sp.phi);
  out.saddle = std::move(sp);
  return out;
}

AsymptoticValue corollary1_point(const WalkModel& model, std::int64_t n, const Point& x, double eps,
                                 const SaddleOptions& options) {
  check_n(n);
  const Vec delta = velocity(x, n);
  const double dist = model.hull().dist_boundary(delta);
  if (dist < eps)
    throw NotInInterior("dist(x/n, boundary) = " + std::to_string(dist) + " is below eps = " + std::to_string(eps));
  AsymptoticValue out;
  out.formula = Formula::corollary1;
  out.class_ok = model.on_class(n, x);
  if (!out.class_ok) return out;
  const auto b0 = hessian_log_kappa(model, Vec::Zero(model.dim()));
  auto sp = solve_saddle(model, delta, options);
  out.value = prefactor(model.dim(), n, model.period(), b0.det) * std::exp(-static_cast<double>(n) * sp.phi);
  out.saddle = std::move(sp);
  return out;
}

AsymptoticValue gaussian_remark1_point(const WalkModel& model, std::int64_t n, const Point& x) {
  check_n(n);
  if (!model.is_simple_walk()) throw WrongModel("the Gaussian form applies to the simple walk only");
  AsymptoticValue out;
  out.formula = Formula::gaussian_remark1;
  out.class_ok = model.on_class(n, x);
  if (!out.class_ok) return out;
  const double d = model.dim();
  const double nn = static_cast<double>(n);
  const double sq = to_vec(x).squaredNorm();
  out.value = 2.0 * std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::pow(d / nn, 0.5 * d) * std::exp(-d * sq / (2.0 * nn));
  return out;
}

AsymptoticValue upper_bound_point(const WalkModel& model, std::int64_t n, const Point& x,
                                  const SaddleOptions& options) {
  check_n(n);
  AsymptoticValue out;
  out.formula = Formula::upper_bound;
  out.class_ok = model.on_class(n, x);
  if (!out.class_ok) return out;
  auto sp = solve_saddle(model, velocity(x, n), options);
  out.value = std::exp(-static_cast<double>(n) * sp.phi);
  out.saddle = std::move(sp);
  return out;
}

Point nearest_admissible(const WalkModel& model, std::int64_t n, const Vec& delta) {
  const int d = model.dim();
  Point base(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) base[i] = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * delta[i]));
  const Vec target = static_cast<double>(n) * delta;
  // Classes repeat with period r along every axis, so radius r suffices.
  for (std::int64_t radius = 0; radius <= model.period() * d; ++radius) {
    std::optional<Point> best;
    double best_err = INFINITY;
    Point off(static_cast<std::size_t>(d), -radius);
    for (;;) {
      if (l1_norm(off) == radius) {
        Point x = base;
        for (int i = 0; i < d; ++i) x[i] += off[i];
        if (model.on_class(n, x)) {
          const double err = (to_vec(x) - target).squaredNorm();
          if (!best || err < best_err || (err == best_err && x < *best)) {
            best = x;
            best_err = err;
          }
        }
      }
      int j = d - 1;
      while (j >= 0 && ++off[j] > radius) off[j--] = -radius;
      if (j < 0) break;
    }
    if (best) return *best;
  }
  throw InvariantViolation("no class-correct point near n*delta");
}

ComparisonReport compare(const WalkModel& model, const std::vector<std::int64_t>& n_list,
                         const std::vector<Vec>& delta_grid, const CompareOptions& options) {
  ComparisonReport rep;
  if (n_list.empty() || delta_grid.empty()) return rep;
  for (const auto& delta : delta_grid) {
    if (delta.size() != model.dim()) throw Error("grid point has wrong dimension");
    const double dist = model.hull().dist_boundary(delta);
    if (dist < options.eps_boundary)
      throw NotInInterior("grid point (" + format_vec(delta) + ") is closer than " +
                          std::to_string(options.eps_boundary) + " to the boundary");
  }
  for (auto n : n_list) check_n(n);

  // One exact table per n, reused across the grid.
  std::vector<std::int64_t> ns = n_list;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::map<std::int64_t, KernelTable> tables;
  KernelStepper stepper(model, KernelOptions{options.mem_budget_bytes});
  for (auto n : ns) {
    while (stepper.current().n < n) stepper.step();
    tables.emplace(n, stepper.current());
  }

  const std::size_t ng = delta_grid.size(), nn = n_list.size();
  rep.rows.resize(ng * nn);
  parallel_for(ng * nn, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto& target = delta_grid[i / nn];
      const std::int64_t n = n_list[i % nn];
      ComparisonRow row;
      row.n = n;
      row.target = target;
      row.x = nearest_admissible(model, n, target);
      row.delta = velocity(row.x, n);
      row.dist = model.hull().dist_boundary(row.delta);
      row.exact = tables.at(n).at(row.x);
      row.asym = theorem7_point(model, n, row.x, options.saddle).value;
      row.rel_err = row.exact > 0.0 ? row.asym / row.exact - 1.0 : NAN;
      rep.rows[i] = std::move(row);
    }
  });

  for (std::size_t g = 0; g < ng; ++g) {
    DecayFit fit;
    fit.target = delta_grid[g];
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < nn; ++j) {
      const auto& row = rep.rows[g * nn + j];
      if (!std::isfinite(row.rel_err) || row.rel_err == 0.0) continue;
      const double lx = std::log(static_cast<double>(row.n)), ly = std::log(std::abs(row.rel_err));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++fit.points;
    }
    if (fit.points >= 2) {
      const double k = fit.points;
      const double den = k * sxx - sx * sx;
      fit.slope = den != 0.0 ? (k * sxy - sx * sy) / den : NAN;
      fit.intercept = (sy - fit.slope * sx) / k;
    } else {
      fit.slope = fit.intercept = NAN;
    }
    rep.fits.push_back(std::move(fit));
  }
  return rep;
}

void write_report_csv(std::ostream& out, const ComparisonReport& report, int dim,
                      const std::vector<std::string>& metadata) {
  for (const auto& m : metadata) out << "# " << m << '\n';
  out << 'n';
  for (int i = 0; i < dim; ++i) out << ",x" << (i + 1);
  for (int i = 0; i < dim; ++i) out << ",delta" << (i + 1);
  out << ",dist,exact,asym,rel_err\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& row : report.rows) {
    out << row.n << ',' << format_point(row.x) << ',' << format_vec(row.delta) << ',' << num(row.dist) << ','
        << num(row.exact) << ',' << num(row.asym) << ',' << num(row.rel_err) << '\n';
  }
  for (const auto& fit : report.fits)
    out << "#fit delta=" << format_vec(fit.target, ' ') << " slope=" << num(fit.slope)
        << " intercept=" << num(fit.intercept) << " points=" << fit.points << '\n';
}

}  // namespace latticewalk
