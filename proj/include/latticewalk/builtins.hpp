#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "latticewalk/walk_model.hpp"
#include "latticewalk/walk_spec.hpp"

namespace latticewalk {

/// Simple walk on Z^d: p(+-e_j) = 1/(2d).
WalkSpec simple_walk_spec(int d);
/// p(0) = 1/2, p(+-1) = 1/4.
WalkSpec lazy_walk_spec();

/// simple-d1, simple-d2, simple-d3, lazy-d1, triangular, hex-q.
const std::vector<std::string>& builtin_names();
bool is_builtin(std::string_view name);
WalkSpec builtin_spec(std::string_view name);

/// A builtin name or a path to a WALKSPEC file.
WalkModel load_model(const std::string& name_or_path, const WalkOptions& options = {});

}  // namespace latticewalk
