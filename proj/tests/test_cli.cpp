#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "muntz/cli.hpp"

using namespace muntz;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("muntz_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const fs::path& dir) {
  args.push_back("--out");
  args.push_back(dir.string());
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("solve 2 writes coefficients, summary, bounds and manifest") {
  TempDir d;
  const auto r = run({"solve", "--two-n", "2"}, d.path);
  REQUIRE(r.code == cli::kOk);
  const auto summary = load(d.path / "solve_2_summary.json");
  const BigReal eps = BigReal::parse(summary["eps"].get<std::string>(), Precision::digits(40));
  CHECK(abs(eps - BigReal(0.125, Precision::digits(40))) < 1e-30);

  const auto csv = read_csv(d.path / "solve_2_coefficients.csv");
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == std::vector<std::string>{"k", "c_k", "log10_abs_c_k"});
  CHECK(BigReal::parse(csv[1][1], Precision::digits(40)).to_double() == doctest::Approx(0.125));
  CHECK(BigReal::parse(csv[2][1], Precision::digits(40)).to_double() == doctest::Approx(1.0));

  const auto bounds = load(d.path / "solve_2_bounds.json");
  CHECK(bounds["bernstein_satisfied"].get<bool>());

  const auto manifest = load(d.path / "solve_manifest.json");
  CHECK(manifest["command"] == "solve");
  CHECK(manifest["tool_version"] == cli::kToolVersion);
  for (const auto& o : manifest["outputs"]) CHECK(fs::exists(o.get<std::string>()));
  CHECK(manifest["outputs"].size() == 4);
}

TEST_CASE("solve 0 marks bounds as not applicable") {
  TempDir d;
  REQUIRE(run({"solve", "--two-n", "0"}, d.path).code == cli::kOk);
  CHECK_FALSE(load(d.path / "solve_0_bounds.json")["applicable"].get<bool>());
}

TEST_CASE("usage errors exit 1") {
  TempDir d;
  const auto odd = run({"solve", "--two-n", "3"}, d.path);
  CHECK(odd.code == cli::kUsage);
  CHECK(odd.err.find("error: degree must be even") != std::string::npos);
  CHECK(run({"figure1", "--degrees", ""}, d.path).code == cli::kUsage);
  CHECK(run({"figure1", "--degrees", "28:140:0"}, d.path).code == cli::kUsage);
  CHECK(run({"bounds", "--eps", "0.7"}, d.path).code == cli::kUsage);
  CHECK(run({"bounds", "--eps", "abc"}, d.path).code == cli::kUsage);
  CHECK(run({"table1", "--max-computed", "9"}, d.path).code == cli::kUsage);
  CHECK(run({"nosuch"}, d.path).code == cli::kUsage);
  CHECK(run({}, d.path).code == cli::kUsage);
}

TEST_CASE("iteration cap maps to exit 2") {
  TempDir d;
  const auto r = run({"solve", "--two-n", "40", "--max-iterations", "1"}, d.path);
  CHECK(r.code == cli::kNumerical);
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("cond 2 reports kappa 3") {
  TempDir d;
  REQUIRE(run({"cond", "--two-n", "2"}, d.path).code == cli::kOk);
  const auto j = load(d.path / "cond_2.json");
  CHECK(BigReal::parse(j["kappa"].get<std::string>(), Precision::digits(30)).to_double() == doctest::Approx(3.0));
}

TEST_CASE("bounds for eps = 1e-6") {
  TempDir d;
  REQUIRE(run({"bounds", "--eps", "1e-6"}, d.path).code == cli::kOk);
  const auto j = load(d.path / "bounds.json");
  const auto p = Precision::digits(30);
  CHECK(BigReal::parse(j["thm2_n_lower"].get<std::string>(), p).to_double() == doctest::Approx(50000.0));
  CHECK(BigReal::parse(j["conjectured_n_lower"].get<std::string>(), p).to_double() == doctest::Approx(125000.0));
  CHECK(j["thm2_cmax_lower_log10"].get<double>() == doctest::Approx(7519.625).epsilon(1e-6));
  CHECK(j["predicted_degree"].get<long>() == 280170);
}

TEST_CASE("figure1 output is byte-identical across runs") {
  TempDir a, b;
  REQUIRE(run({"figure1", "--degrees", "8,14"}, a.path).code == cli::kOk);
  REQUIRE(run({"figure1", "--degrees", "8,14"}, b.path).code == cli::kOk);
  const std::string first = slurp(a.path / "figure1.csv");
  CHECK(first == slurp(b.path / "figure1.csv"));
  CHECK(slurp(a.path / "figure1_curves.json") == slurp(b.path / "figure1_curves.json"));
  const auto rows = read_csv(a.path / "figure1.csv");
  CHECK(rows[0] == std::vector<std::string>{"kind", "two_n", "k", "log10_abs_c_k"});
  int coeff_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    if (rows[i][0] == "coeff") ++coeff_rows;
    CHECK(std::isfinite(std::stod(rows[i][3])));
  }
  CHECK(coeff_rows == 5 + 8);
}

TEST_CASE("table1 with one computed row") {
  TempDir d;
  REQUIRE(run({"table1", "--max-computed", "1"}, d.path).code == cli::kOk);
  const auto rows = read_csv(d.path / "table1.csv");
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == std::vector<std::string>{"eps", "minimal_degree", "cmax_log10", "mode"});
  CHECK(rows[1][0] == "1e-1");
  CHECK(rows[1][1] == "4");
  CHECK(rows[1][3] == "computed");
  for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i][3] == "predicted");
}

TEST_CASE("output directory from the environment") {
  TempDir d;
  ::setenv(cli::kOutDirEnv, d.path.c_str(), 1);
  std::ostringstream out, err;
  CHECK(cli::run_cli({"cond", "--two-n", "4"}, out, err) == cli::kOk);
  ::unsetenv(cli::kOutDirEnv);
  CHECK(fs::exists(d.path / "cond_4.json"));
  CHECK(fs::exists(d.path / "cond_manifest.json"));
}

TEST_CASE("csv and number helpers") {
  CHECK(cli::csv_body({"a", "b"}, {{"1", "2"}, {"3", "4"}}) == "a,b\n1,2\n3,4\n");
  CHECK(cli::format_fixed(7.87071234) == "7.870712");
  CHECK(cli::format_fixed(-0.5, 2) == "-0.50");
}
