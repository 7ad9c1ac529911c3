#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(LATTICEWALK_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Value of column `col` in the first data row after the header.
std::string field(const std::string& csv, const std::string& col) {
  std::istringstream is(csv);
  std::string line, header;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') {
      header = line;
      break;
    }
  std::getline(is, line);
  auto split = [](const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    std::string t;
    while (std::getline(ss, t, ',')) v.push_back(t);
    return v;
  };
  const auto h = split(header), row = split(line);
  for (std::size_t i = 0; i < h.size() && i < row.size(); ++i)
    if (h[i] == col) return row[i];
  return {};
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / ("latticewalk_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Cli, ValidateSimpleD2) {
  const auto r = run_cli("validate --walk simple-d2");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("period,2\n"), std::string::npos);
  EXPECT_NE(r.out.find("unitary,2\n"), std::string::npos);
  EXPECT_NE(r.out.find("facets,4\n"), std::string::npos);
  EXPECT_NE(r.out.find("theta,-3.1415926535897931,-3.1415926535897931\n"), std::string::npos);
  EXPECT_NE(r.out.find("hash="), std::string::npos);
}

TEST(Cli, PointSimpleD1) {
  const auto r = run_cli("point --walk simple-d1 --n 100 --x 50");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(std::stod(field(r.out, "exact")), 1.913e-7, 1e-10);
  EXPECT_NEAR(std::stod(field(r.out, "theorem7")), 1.921e-7, 1e-10);
  EXPECT_EQ(field(r.out, "class_ok"), "1");
}

TEST(Cli, SweepEmptyGrid) {
  const auto r = run_cli("sweep --walk simple-d1 --n-list 50,100 --grid ''");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("n,x1,delta1,dist,exact,asym,rel_err\n"), std::string::npos);
  EXPECT_EQ(r.out.find("\n50,"), std::string::npos);
}

TEST(Cli, SweepFitLine) {
  const auto r = run_cli("sweep --walk simple-d1 --n-list 50,100,200,400 --grid 0.5");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n50,24,0.47999999999999998,"), std::string::npos);
  EXPECT_NE(r.out.find("#fit delta=0.5 slope="), std::string::npos);
}

TEST(Cli, ExactWritesFileDeterministically) {
  const auto dir = temp_dir();
  const auto a = dir / "a.csv", b = dir / "b.csv";
  ASSERT_EQ(run_cli("exact --walk triangular --n 12 --out " + a.string()).code, 0);
  ASSERT_EQ(run_cli("exact --walk triangular --n 12 --out " + b.string()).code, 0);
  const auto sa = read_file(a);
  EXPECT_FALSE(sa.empty());
  EXPECT_EQ(sa, read_file(b));
  EXPECT_NE(sa.find("x1,x2,p\n"), std::string::npos);

  const auto s1 = run_cli("sweep --walk triangular --n-list 20,40 --grid '0.1,0.1;-0.2,0'");
  const auto s2 = run_cli("sweep --walk triangular --n-list 20,40 --grid '0.1,0.1;-0.2,0'");
  EXPECT_EQ(s1.out, s2.out);
  std::filesystem::remove_all(dir);
}

TEST(Cli, WalkspecFile) {
  const auto dir = temp_dir();
  const auto p = dir / "walk.txt";
  {
    std::ofstream f(p);
    f << "# drifted walk\ndim 1\nstep 1 2/3\nstep -1 1/3\n";
  }
  const auto r = run_cli("validate --walk " + p.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mean,0.33333333333333331\n"), std::string::npos);
  {
    std::ofstream f(p);
    f << "dim 1\nstep 1 1/2\nstep -1 1/3\n";
  }
  EXPECT_EQ(run_cli("validate --walk " + p.string()).code, 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ValidationErrorsExitOne) {
  EXPECT_EQ(run_cli("validate --walk no-such-walk").code, 1);
  EXPECT_EQ(run_cli("point --walk simple-d1 --n 10 --x 10").code, 1);
  EXPECT_EQ(run_cli("point --walk simple-d1 --n 10 --x 1,2").code, 1);
  EXPECT_EQ(run_cli("sweep --walk simple-d1 --n-list 10 --grid 0.999").code, 1);
  EXPECT_EQ(run_cli("").code, 1);
  EXPECT_EQ(run_cli("exact --walk simple-d1 --n 200 --mem-budget-mb 0").code, 1);
}

TEST(Cli, Lattice) {
  const auto r = run_cli("lattice --walk hex --n 201 --x 30,31 --formula theorem7");
  ASSERT_EQ(r.code, 0);
  EXPECT_LT(std::abs(std::stod(field(r.out, "rel_err"))), 0.01);
  EXPECT_NE(r.out.find("floor(n/2)"), std::string::npos);
  EXPECT_EQ(run_cli("lattice --walk hex --n 10 --x 1,0").code, 1);

  const auto t = run_cli("lattice --walk triangular --n 100 --x 2,-1");
  ASSERT_EQ(t.code, 0);
  EXPECT_LT(std::abs(std::stod(field(t.out, "rel_err"))), 0.03);
}

TEST(Cli, SelftestSingleWalk) {
  const auto r = run_cli("selftest --walk lazy-d1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("selftest passed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
