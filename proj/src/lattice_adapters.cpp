#include "latticewalk/lattice_adapters.hpp"

#include <cmath>
#include <cstdlib>

#include "latticewalk/errors.hpp"
#include "latticewalk/exact_kernel.hpp"

namespace latticewalk {

namespace {

int mod3(std::int64_t v) {
  const auto r = v % 3;
  return static_cast<int>(r < 0 ? r + 3 : r);
}

DenseBox<double> hex_box(int n) {
  return DenseBox<double>(Point{-n, -n}, {2 * static_cast<std::int64_t>(n) + 1, 2 * static_cast<std::int64_t>(n) + 1}, 0.0);
}

}  // namespace

std::array<double, 2> TriangularPoint::plane() const {
  const double h = std::sqrt(3.0) / 2.0;
  return {0.5 * static_cast<double>(jp - j), h * static_cast<double>(j + jp)};
}

int HexPoint::tau_of(std::int64_t j, std::int64_t jp) { return mod3(j + 2 * jp); }

HexPoint HexPoint::make(std::int64_t j, std::int64_t jp) {
  const int t = tau_of(j, jp);
  if (t == 1)
    throw Error("(" + std::to_string(j) + "," + std::to_string(jp) + ") has tau = 1 and is not a hexagonal vertex");
  return HexPoint{j, jp, t};
}

std::array<HexPoint, 3> HexPoint::neighbours() const {
  if (tau == 0) return {make(j, jp + 1), make(j - 1, jp), make(j + 1, jp - 1)};
  return {make(j + 1, jp), make(j, jp - 1), make(j - 1, jp + 1)};
}

Point HexPoint::q_image() const {
  if (tau != 0) throw Error("only tau = 0 vertices map to the q lattice");
  return {(2 * j + jp) / 3, (jp - j) / 3};
}

WalkSpec triangular_spec() {
  WalkSpec s;
  s.dim = 2;
  for (Point v : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}, Point{1, -1}, Point{-1, 1}})
    s.steps.push_back({v, Weight::rational(1, 6)});
  return s;
}

WalkSpec hexagonal_q_spec() {
  WalkSpec s;
  s.dim = 2;
  s.steps.push_back({Point{0, 0}, Weight::rational(1, 3)});
  for (Point v : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}, Point{1, -1}, Point{-1, 1}})
    s.steps.push_back({v, Weight::rational(1, 9)});
  return s;
}

WalkModel triangular_model() {
  static const WalkModel model = WalkModel::validate(triangular_spec());
  return model;
}

WalkModel hexagonal_q_model() {
  static const WalkModel model = WalkModel::validate(hexagonal_q_spec());
  return model;
}

DenseBox<double> hex_table(int n) {
  if (n < 1) throw Error("hex_table needs n >= 1");
  static const WalkModel q = hexagonal_q_model();
  const int m = n / 2;
  KernelTable qt{0, DenseBox<double>(Point{0, 0}, {1, 1}, 1.0)};  // q(0; .) = point mass
  if (m >= 1) qt = convolve_kernel(q, m);
  auto out = hex_box(n);
  for (std::size_t f = 0; f < out.size(); ++f) {
    const Point c = out.point(f);
    const int t = HexPoint::tau_of(c[0], c[1]);
    if (n % 2 == 0) {
      if (t == 0) out[f] = qt.at(HexPoint{c[0], c[1], 0}.q_image());
    } else if (t == 2) {
      double sum = 0.0;
      for (const auto& y : HexPoint{c[0], c[1], 2}.neighbours()) sum += qt.at(y.q_image());
      out[f] = sum / 3.0;
    }
  }
  return out;
}

double hex_point(int n, const HexPoint& x) {
  if (std::llabs(x.j) > n || std::llabs(x.jp) > n) return 0.0;
  return hex_table(n).get(Point{x.j, x.jp});
}

DenseBox<double> hex_graph_dp(int n) {
  if (n < 0) throw Error("hex_graph_dp needs n >= 0");
  auto cur = hex_box(n);
  cur[cur.flat(Point{0, 0})] = 1.0;
  for (int k = 0; k < n; ++k) {
    auto next = hex_box(n);
    for (std::size_t f = 0; f < cur.size(); ++f) {
      if (cur[f] == 0.0) continue;
      const Point c = cur.point(f);
      for (const auto& y : HexPoint::make(c[0], c[1]).neighbours()) next[next.flat(Point{y.j, y.jp})] += cur[f] / 3.0;
    }
    cur = std::move(next);
  }
  return cur;
}

Vec hex_delta(int n, const HexPoint& x) {
  Vec d(2);
  d << static_cast<double>(2 * x.j + x.jp) / (3.0 * n), static_cast<double>(x.jp - x.j) / (3.0 * n);
  return d;
}

double hex_asymptotic(int n, const HexPoint& x, double eps, HexFormula formula) {
  if (n < 2) throw Error("hex_asymptotic needs n >= 2");
  if ((x.tau == 0) != (n % 2 == 0)) return 0.0;
  static const WalkModel q = hexagonal_q_model();
  const std::int64_t m = n / 2;
  std::vector<Point> images;
  if (x.tau == 0) {
    images.push_back(x.q_image());
  } else {
    for (const auto& y : x.neighbours()) images.push_back(y.q_image());
  }
  double sum = 0.0;
  for (const auto& y : images) {
    if (formula == HexFormula::corollary1) {
      sum += corollary1_point(q, m, y, eps).value;
    } else {
      if (q.hull().dist_boundary(velocity(y, m)) < eps) throw NotInInterior("q-velocity closer than eps to boundary");
      sum += theorem7_point(q, m, y).value;
    }
  }
  return sum / static_cast<double>(images.size());
}

double triangular_asymptotic(int n, const TriangularPoint& x, double eps) {
  static const WalkModel tri = triangular_model();
  return corollary1_point(tri, n, x.image(), eps).value;
}

}  // namespace latticewalk
