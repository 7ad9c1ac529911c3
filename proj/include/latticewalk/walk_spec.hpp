#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latticewalk/types.hpp"

namespace latticewalk {

/// Exact rational p/q in lowest terms with q > 0.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational operator+(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational&) const = default;
};

/// A step weight, either exact (`p/q`) or decimal.
struct Weight {
  double value = 0.0;
  std::optional<Rational> exact;

  static Weight rational(std::int64_t num, std::int64_t den);
  static Weight decimal(double value);
  /// Parses `p/q` or a decimal literal.
  static Weight parse(std::string_view text);
  std::string to_string() const;
  bool operator==(const Weight&) const = default;
};

struct Step {
  Point v;
  Weight weight;
  bool operator==(const Step&) const = default;
};

/// Finite step distribution on Z^d as written in a WALKSPEC file.
struct WalkSpec {
  int dim = 0;
  std::vector<Step> steps;
  bool operator==(const WalkSpec&) const = default;
};

/// Reads the line-based WALKSPEC 1 format:
///
///     dim <d>
///     step <c1> ... <cd> <weight>
///
/// `#` starts a comment. Only syntax is checked here; see check_weights().
WalkSpec parse_walkspec(std::istream& in);
WalkSpec parse_walkspec(std::string_view text);
WalkSpec load_walkspec(const std::string& path);

/// Canonical text form. parse_walkspec(serialize_walkspec(s)) == s.
std::string serialize_walkspec(const WalkSpec& spec);

/// Throws WeightSumError unless every weight is positive and the weights sum
/// to one (exactly when all are rational, else within 1e-12); throws
/// ParseError on duplicate or malformed step vectors.
void check_weights(const WalkSpec& spec);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string spec_hash(const WalkSpec& spec);

}  // namespace latticewalk
