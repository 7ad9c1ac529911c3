#pragma once

#include <array>
#include <cstdint>

#include "latticewalk/asymptotics.hpp"
#include "latticewalk/dense_box.hpp"
#include "latticewalk/walk_model.hpp"

namespace latticewalk {

// Triangular lattice L = Z l1 + Z l2 with l1 = (-1/2, sqrt3/2) and
// l2 = (1/2, sqrt3/2). All walks are computed in integer coordinates (j, j').

/// j l1 + j' l2; its Z^2 image for the six-neighbour walk is (j, j').
struct TriangularPoint {
  std::int64_t j = 0, jp = 0;

  Point image() const { return {j, jp}; }
  /// Position in the real plane.
  std::array<double, 2> plane() const;
  bool operator==(const TriangularPoint&) const = default;
};

/// Vertex of the hexagonal lattice H = {x in L : tau(x) != 1} with
/// tau(j l1 + j' l2) = j + 2j' mod 3.
struct HexPoint {
  std::int64_t j = 0, jp = 0;
  int tau = 0;

  /// Throws Error when tau(j, j') = 1 (not a vertex of H).
  static HexPoint make(std::int64_t j, std::int64_t jp);
  static int tau_of(std::int64_t j, std::int64_t jp);
  /// The three nearest neighbours in H.
  std::array<HexPoint, 3> neighbours() const;
  /// Z^2 image ((2j + j')/3, (-j + j')/3) of a tau = 0 vertex.
  Point q_image() const;
  bool operator==(const HexPoint&) const = default;
};

WalkSpec triangular_spec();
WalkSpec hexagonal_q_spec();
WalkModel triangular_model();
/// The two-step walk q on the tau = 0 sublattice, mapped to Z^2.
WalkModel hexagonal_q_model();

/// Simple-walk probabilities p(n; 0, x) on H for every vertex with
/// |j|, |j'| <= n, indexed by (j, j'); tau = 1 cells hold 0.
DenseBox<double> hex_table(int n);

/// p(n; 0, x) through the two-step walk q: q(n/2; x) for even n and the
/// average of q((n-1)/2; .) over the three neighbours of x for odd n.
double hex_point(int n, const HexPoint& x);

/// Direct dynamic programme on the graph H; independent of q.
DenseBox<double> hex_graph_dp(int n);

/// delta = ((2j + j')/3n, (-j + j')/3n).
Vec hex_delta(int n, const HexPoint& x);

enum class HexFormula { corollary1, theorem7 };

/// Saddle-point asymptotic of p(n; 0, x) on H via q at time floor(n/2); see
/// README for the time normalisation. Zero off the parity class of x.
/// Requires every q-velocity used to be at distance >= eps from the boundary.
double hex_asymptotic(int n, const HexPoint& x, double eps = 1e-2, HexFormula formula = HexFormula::corollary1);

/// Corollary-1 asymptotic (2 pi n)^{-1} sqrt3 e^{-n phi(delta)} (r = 1,
/// det B_0 = 1/3) for the triangular walk.
double triangular_asymptotic(int n, const TriangularPoint& x, double eps = 1e-2);

}  // namespace latticewalk
