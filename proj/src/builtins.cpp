#include "latticewalk/builtins.hpp"

#include <algorithm>

#include "latticewalk/errors.hpp"
#include "latticewalk/lattice_adapters.hpp"

namespace latticewalk {

WalkSpec simple_walk_spec(int d) {
  WalkSpec s;
  s.dim = d;
  for (int j = 0; j < d; ++j)
    for (int sign : {1, -1}) {
      Point v(static_cast<std::size_t>(d), 0);
      v[j] = sign;
      s.steps.push_back({v, Weight::rational(1, 2 * d)});
    }
  return s;
}

WalkSpec lazy_walk_spec() {
  WalkSpec s;
  s.dim = 1;
  s.steps.push_back({Point{0}, Weight::rational(1, 2)});
  s.steps.push_back({Point{1}, Weight::rational(1, 4)});
  s.steps.push_back({Point{-1}, Weight::rational(1, 4)});
  return s;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"simple-d1", "simple-d2", "simple-d3", "lazy-d1", "triangular", "hex-q"};
  return names;
}

bool is_builtin(std::string_view name) {
  const auto& names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

WalkSpec builtin_spec(std::string_view name) {
  if (name == "simple-d1") return simple_walk_spec(1);
  if (name == "simple-d2") return simple_walk_spec(2);
  if (name == "simple-d3") return simple_walk_spec(3);
  if (name == "lazy-d1") return lazy_walk_spec();
  if (name == "triangular") return triangular_spec();
  if (name == "hex-q") return hexagonal_q_spec();
  throw ParseError("unknown builtin walk '" + std::string(name) + "'");
}

WalkModel load_model(const std::string& name_or_path, const WalkOptions& options) {
  if (is_builtin(name_or_path)) return WalkModel::validate(builtin_spec(name_or_path), options);
  return WalkModel::validate(load_walkspec(name_or_path), options);
}

}  // namespace latticewalk
