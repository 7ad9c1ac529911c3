// Command-line front end for the latticewalk library.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latticewalk/asymptotics.hpp"
#include "latticewalk/builtins.hpp"
#include "latticewalk/cumulant.hpp"
#include "latticewalk/errors.hpp"
#include "latticewalk/exact_kernel.hpp"
#include "latticewalk/lattice_adapters.hpp"
#include "latticewalk/properties.hpp"
#include "latticewalk/saddle.hpp"

using namespace latticewalk;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitInvariant = 2;

struct RunConfig {
  std::string walk = "simple-d1";
  std::int64_t n = 0;
  std::string n_list;
  std::string x;
  std::string delta;
  std::string grid;
  bool grid_given = false;
  double tol = 1e-12;
  double eps_boundary = 1e-2;
  std::string out;
  std::size_t mem_budget_mb = 1024;
  std::string formula = "corollary1";
};

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size())
      throw ParseError("cannot read number '" + tok + "' in '" + s + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::int64_t> parse_ints(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& tok : split(s, ',')) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || p != tok.data() + tok.size())
      throw ParseError("cannot read integer '" + tok + "' in '" + s + "'");
    out.push_back(v);
  }
  return out;
}

Vec parse_vec(const std::string& s, int dim) {
  const auto vals = parse_reals(s);
  if (static_cast<int>(vals.size()) != dim)
    throw ParseError("'" + s + "' has " + std::to_string(vals.size()) + " coordinates, expected " +
                     std::to_string(dim));
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = vals[static_cast<std::size_t>(i)];
  return v;
}

Point parse_point(const std::string& s, int dim) {
  auto vals = parse_ints(s);
  if (static_cast<int>(vals.size()) != dim)
    throw ParseError("'" + s + "' has " + std::to_string(vals.size()) + " coordinates, expected " +
                     std::to_string(dim));
  return vals;
}

/// ';'-separated list of vectors; the empty string is the empty list.
std::vector<std::string> parse_list(const std::string& s) {
  if (s.find_first_not_of(' ') == std::string::npos) return {};
  return split(s, ';');
}

std::vector<std::int64_t> n_values(const RunConfig& cfg) {
  std::vector<std::int64_t> ns;
  if (!cfg.n_list.empty()) ns = parse_ints(cfg.n_list);
  else if (cfg.n > 0) ns.push_back(cfg.n);
  for (auto n : ns)
    if (n < 1) throw ParseError("n must be >= 1");
  return ns;
}

std::size_t mem_budget(const RunConfig& cfg) { return cfg.mem_budget_mb << 20; }

SaddleOptions saddle_options(const RunConfig& cfg) {
  SaddleOptions o;
  o.tol = cfg.tol;
  return o;
}

std::vector<std::string> metadata(const std::string& command, const RunConfig& cfg, const WalkModel& model) {
  return {"latticewalk " + command, "walk=" + cfg.walk + " hash=" + spec_hash(model.spec()),
          "tol=" + short_num(cfg.tol) + " eps_boundary=" + short_num(cfg.eps_boundary)};
}

void write_metadata(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

// Output goes to a buffer first so that a failing command leaves no partial file.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}
  std::ostream& stream() { return buf_; }
  void commit() {
    if (path_.empty()) {
      std::cout << buf_.str();
      std::cout.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary);
    if (!f) throw Error("cannot open " + path_ + " for writing");
    f << buf_.str();
  }

 private:
  std::string path_;
  std::ostringstream buf_;
};

// =============================================================================
// Subcommands
// =============================================================================

int run_validate(const RunConfig& cfg) {
  const WalkModel model = load_model(cfg.walk);
  Output out(cfg.out);
  auto& os = out.stream();
  write_metadata(os, {"latticewalk validate", "walk=" + cfg.walk + " hash=" + spec_hash(model.spec())});
  const auto b0 = hessian_log_kappa(model, Vec::Zero(model.dim()));
  const auto us = unitary_set(model);
  os << "key,value\n";
  os << "dim," << model.dim() << '\n';
  os << "support," << model.support_size() << '\n';
  os << "irreducibility," << to_string(irreducibility(model.spec(), model.options())) << '\n';
  os << "period," << model.period() << '\n';
  os << "mean," << format_vec(model.mean()) << '\n';
  os << "range," << model.range() << '\n';
  os << "det_b0," << g17(b0.det) << '\n';
  for (int i = 0; i < model.dim(); ++i) os << "b0_row" << (i + 1) << ',' << format_vec(b0.matrix.row(i).transpose()) << '\n';
  os << "facets," << model.hull().facets().size() << '\n';
  for (const auto& f : model.hull().facets())
    os << "facet," << format_point(f.int_normal) << ',' << f.int_offset << '\n';
  os << "vertices," << model.hull().vertices().size() << '\n';
  os << "unitary," << us.cardinality << '\n';
  for (const auto& th : us.points) os << "theta," << format_vec(th) << '\n';
  out.commit();
  return 0;
}

int run_exact(const RunConfig& cfg) {
  const WalkModel model = load_model(cfg.walk);
  const auto ns = n_values(cfg);
  if (ns.size() != 1) throw ParseError("exact needs exactly one n");
  KernelOptions ko;
  ko.mem_budget_bytes = mem_budget(cfg);
  const auto table = convolve_kernel(model, static_cast<int>(ns[0]), ko);
  Output out(cfg.out);
  auto meta = metadata("exact", cfg, model);
  meta.push_back("n=" + std::to_string(ns[0]) + " mass=" + g17(table.mass()));
  write_metadata(out.stream(), meta);
  write_kernel_csv(out.stream(), table);
  out.commit();
  return 0;
}

int run_point(const RunConfig& cfg) {
  const WalkModel model = load_model(cfg.walk);
  const auto ns = n_values(cfg);
  if (ns.size() != 1) throw ParseError("point needs exactly one n");
  const std::int64_t n = ns[0];
  const Point x = parse_point(cfg.x, model.dim());
  const Vec delta = velocity(x, n);
  const double dist = model.hull().dist_boundary(delta);
  const auto so = saddle_options(cfg);

  KernelOptions ko;
  ko.mem_budget_bytes = mem_budget(cfg);
  const double exact = convolve_kernel(model, static_cast<int>(n), ko).at(x);
  const auto th7 = theorem7_point(model, n, x, so);
  const double nan = std::nan("");
  const double cor = dist >= cfg.eps_boundary ? corollary1_point(model, n, x, cfg.eps_boundary, so).value : nan;
  const double ub = upper_bound_point(model, n, x, so).value;
  const double gauss = model.is_simple_walk() ? gaussian_remark1_point(model, n, x).value : nan;

  Output out(cfg.out);
  auto& os = out.stream();
  write_metadata(os, metadata("point", cfg, model));
  os << "n";
  for (int i = 0; i < model.dim(); ++i) os << ",x" << (i + 1);
  for (int i = 0; i < model.dim(); ++i) os << ",delta" << (i + 1);
  os << ",dist,class_ok,exact,theorem7,corollary1,upper_bound,gaussian,rel_err\n";
  os << n << ',' << format_point(x) << ',' << format_vec(delta) << ',' << g17(dist) << ','
     << (th7.class_ok ? 1 : 0) << ',' << g17(exact) << ',' << g17(th7.value) << ',' << g17(cor) << ',' << g17(ub)
     << ',' << g17(gauss) << ',' << g17(exact > 0 ? th7.value / exact - 1.0 : nan) << '\n';
  out.commit();
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  const WalkModel model = load_model(cfg.walk);
  const auto ns = n_values(cfg);
  std::vector<Vec> grid;
  if (cfg.grid_given) {
    for (const auto& item : parse_list(cfg.grid)) grid.push_back(parse_vec(item, model.dim()));
  } else if (!cfg.delta.empty()) {
    grid.push_back(parse_vec(cfg.delta, model.dim()));
  }
  CompareOptions co;
  co.eps_boundary = cfg.eps_boundary;
  co.saddle = saddle_options(cfg);
  co.mem_budget_bytes = mem_budget(cfg);
  const auto report = compare(model, ns, grid, co);
  Output out(cfg.out);
  write_report_csv(out.stream(), report, model.dim(), metadata("sweep", cfg, model));
  out.commit();
  return 0;
}

int run_lattice(const RunConfig& cfg) {
  const bool hex = cfg.walk == "hex" || cfg.walk == "hex-q";
  if (!hex && cfg.walk != "triangular") throw ParseError("lattice expects --walk triangular or --walk hex");
  const auto ns = n_values(cfg);
  std::vector<std::pair<std::int64_t, std::int64_t>> points;
  for (const auto& item : parse_list(cfg.x)) {
    const auto p = parse_point(item, 2);
    points.emplace_back(p[0], p[1]);
  }
  HexFormula hf = HexFormula::corollary1;
  if (cfg.formula == "theorem7") hf = HexFormula::theorem7;
  else if (cfg.formula != "corollary1") throw ParseError("unknown formula '" + cfg.formula + "'");

  const WalkModel model = hex ? hexagonal_q_model() : triangular_model();
  ComparisonReport report;
  for (const auto& [j, jp] : points) {
    for (const auto n : ns) {
      ComparisonRow row;
      row.n = n;
      row.x = {j, jp};
      if (hex) {
        const auto hp = HexPoint::make(j, jp);
        row.delta = hex_delta(static_cast<int>(n), hp);
        row.exact = hex_point(static_cast<int>(n), hp);
        row.asym = hex_asymptotic(static_cast<int>(n), hp, cfg.eps_boundary, hf);
      } else {
        row.delta = velocity(row.x, n);
        KernelOptions ko;
        ko.mem_budget_bytes = mem_budget(cfg);
        row.exact = convolve_kernel(model, static_cast<int>(n), ko).at(row.x);
        row.asym = triangular_asymptotic(static_cast<int>(n), TriangularPoint{j, jp}, cfg.eps_boundary);
      }
      row.target = row.delta;
      row.dist = model.hull().dist_boundary(row.delta);
      row.rel_err = row.exact > 0 ? row.asym / row.exact - 1.0 : std::nan("");
      report.rows.push_back(std::move(row));
    }
  }
  std::vector<std::string> meta{"latticewalk lattice", "lattice=" + std::string(hex ? "hexagonal" : "triangular") +
                                                           " model hash=" + spec_hash(model.spec())};
  if (hex) {
    meta.push_back("formula=" + cfg.formula + " eps_boundary=" + short_num(cfg.eps_boundary));
    meta.push_back("delta=((2j+j')/3n,(j'-j)/3n) with hex time n; the asymptotic runs q for floor(n/2) steps");
  } else {
    meta.push_back("formula=corollary1 eps_boundary=" + short_num(cfg.eps_boundary));
  }
  meta.push_back("x1,x2 are the lattice coordinates j,j'");
  Output out(cfg.out);
  write_report_csv(out.stream(), report, 2, meta);
  out.commit();
  return 0;
}

int run_selftest_command(const RunConfig& cfg, bool walk_given) {
  std::vector<std::pair<std::string, WalkModel>> models;
  if (walk_given) {
    models.emplace_back(cfg.walk, load_model(cfg.walk));
  } else {
    for (const auto& name : builtin_names()) models.emplace_back(name, load_model(name));
  }
  Output out(cfg.out);
  std::ostream* log = cfg.out.empty() ? &std::cout : &out.stream();
  const auto results = run_selftest(models, log, true);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  *log << (failed == 0 ? "selftest passed: " : "selftest failed: ") << results.size() << " checks run\n";
  if (!cfg.out.empty()) out.commit();
  if (failed > 0) {
    for (const auto& r : results)
      if (!r.passed) std::cerr << "invariant violated: " << format_result(r) << '\n';
    return kExitInvariant;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local limit theorems for lattice random walks: exact kernels and saddle-point asymptotics"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--walk", cfg.walk, "builtin name (" + [] {
      std::string s;
      for (const auto& n : builtin_names()) s += (s.empty() ? "" : ", ") + n;
      return s;
    }() + ") or WALKSPEC path");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
  };
  auto add_numeric = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "saddle gradient tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--eps-boundary", cfg.eps_boundary, "minimum distance of x/n to the hull boundary")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--mem-budget-mb", cfg.mem_budget_mb, "memory budget per table in MiB")->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "model summary: period, mean, facets, unitary set");
  add_common(validate);

  auto* exact = app.add_subcommand("exact", "exact kernel p(n; .) as CSV");
  add_common(exact);
  add_numeric(exact);
  exact->add_option("--n", cfg.n, "number of steps")->required();

  auto* point = app.add_subcommand("point", "exact, theorem7, corollary1 and upper bound at one (n, x)");
  add_common(point);
  add_numeric(point);
  point->add_option("--n", cfg.n, "number of steps")->required();
  point->add_option("--x", cfg.x, "lattice point, comma separated")->required();

  auto* sweep = app.add_subcommand("sweep", "exact against theorem7 over an n list and a velocity grid");
  add_common(sweep);
  add_numeric(sweep);
  auto* n_opt = sweep->add_option("--n", cfg.n, "single number of steps");
  sweep->add_option("--n-list", cfg.n_list, "comma separated numbers of steps")->excludes(n_opt);
  auto* delta_opt = sweep->add_option("--delta", cfg.delta, "single velocity, comma separated");
  auto* grid_opt =
      sweep->add_option("--grid", cfg.grid, "velocities separated by ';', coordinates by ','")->excludes(delta_opt);

  auto* lattice = app.add_subcommand("lattice", "triangular and hexagonal lattice pipelines");
  add_common(lattice);
  add_numeric(lattice);
  auto* ln_opt = lattice->add_option("--n", cfg.n, "single number of steps");
  lattice->add_option("--n-list", cfg.n_list, "comma separated numbers of steps")->excludes(ln_opt);
  lattice->add_option("--x", cfg.x, "points j,j' separated by ';'")->required();
  lattice->add_option("--formula", cfg.formula, "hexagonal asymptotic: corollary1 or theorem7");

  auto* selftest = app.add_subcommand("selftest", "full invariant battery; exits 2 on the first failure");
  add_common(selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }
  cfg.grid_given = grid_opt->count() > 0;

  try {
    if (*validate) return run_validate(cfg);
    if (*exact) return run_exact(cfg);
    if (*point) return run_point(cfg);
    if (*sweep) return run_sweep(cfg);
    if (*lattice) return run_lattice(cfg);
    if (*selftest) return run_selftest_command(cfg, selftest->get_option("--walk")->count() > 0);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const MaxIterations& e) {
    std::cerr << "saddle solver: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
