#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "orbitprod/mmio.hpp"
#include "orbitprod/model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Output {
  int code = -1;
  std::string out;
};

Output run(const std::string& args) {
  const std::string cmd = std::string(ORBITPROD_CLI_PATH) + " " + args + " 2>/dev/null";
  Output result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  const int status = pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("orbitprod_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& method(const json& doc, const std::string& name) {
  for (const auto& m : doc["methods"])
    if (m["method"] == name) return m;
  FAIL("method missing: " << name);
  return doc;
}

}  // namespace

TEST_CASE("gen writes Matrix Market files") {
  TempDir dir;
  REQUIRE(run("gen grid --rows 3 --cols 3 --r 0.2 --out " + dir / "g.mtx").code == 0);
  const auto model = orbitprod::read_precision_file(dir / "g.mtx");
  CHECK(model.size() == 9);
  CHECK(model.edge_count() == 12);

  REQUIRE(run("gen random --n 20 --rho 0.8 --seed 5 --out " + dir / "a.mtx").code == 0);
  REQUIRE(run("gen random --n 20 --rho 0.8 --seed 5 --out " + dir / "b.mtx").code == 0);
  CHECK(slurp(dir / "a.mtx") == slurp(dir / "b.mtx"));

  const auto to_stdout = run("gen grid --rows 4 --cols 4 --r 0.1 --periodic");
  CHECK(to_stdout.code == 0);
  CHECK(to_stdout.out.rfind("%%MatrixMarket matrix coordinate real symmetric", 0) == 0);

  CHECK(run("gen grid --rows 1 --cols 3 --r 0.2").code == 2);
  CHECK(run("gen torus").code == 2);
}

TEST_CASE("check") {
  TempDir dir;
  REQUIRE(run("gen grid --rows 4 --cols 4 --r 0.2 --periodic --out " + dir / "ok.mtx").code == 0);
  const auto ok = run("check " + dir / "ok.mtx");
  REQUIRE(ok.code == 0);
  const auto doc = json::parse(ok.out);
  CHECK(std::abs(doc["rho_abs"].get<double>() - 0.8) <= 1e-9);
  CHECK(doc["girth"] == 4);
  CHECK(doc["walk_summable"] == true);

  REQUIRE(run("gen grid --rows 4 --cols 4 --r 0.3 --periodic --out " + dir / "bad.mtx").code == 0);
  CHECK(run("check " + dir / "bad.mtx").code == 3);
  CHECK(run("check " + dir / "missing.mtx").code == 2);
}

TEST_CASE("estimate") {
  TempDir dir;
  SUBCASE("tree model is exact") {
    std::ofstream(dir / "tree.mtx") << "%%MatrixMarket matrix coordinate real symmetric\n"
                                       "4 4 7\n1 1 2\n2 2 1.5\n3 3 1\n4 4 3\n2 1 -0.4\n3 2 0.3\n"
                                       "4 2 -0.9\n";
    const auto res = run("estimate " + dir / "tree.mtx" + " --methods exact,gabp");
    REQUIRE(res.code == 0);
    const auto doc = json::parse(res.out);
    CHECK(doc["model"]["girth"].is_null());
    const auto& g = method(doc, "gabp");
    CHECK(g["error_vs_exact"].get<double>() <= 1e-10);
    for (const auto& m : doc["methods"]) {
      CHECK(std::abs(m["logdet_J"].get<double>() -
                     (doc["model"]["logdet_shift"].get<double>() - m["log_z"].get<double>())) <=
            1e-12);
    }
  }
  SUBCASE("truncated correction improves on the grid") {
    REQUIRE(run("gen grid --rows 3 --cols 3 --r 0.2 --out " + dir / "g.mtx").code == 0);
    const auto res = run("estimate " + dir / "g.mtx" +
                         " --methods exact,gabp,gabp+btl-trunc --orbit-max 12 --dump-rprime " +
                         dir / "rp.mtx");
    REQUIRE(res.code == 0);
    const auto doc = json::parse(res.out);
    const double plain = method(doc, "gabp")["error_vs_exact"].get<double>();
    const double corrected = method(doc, "gabp+btl-trunc")["error_vs_exact"].get<double>();
    CHECK(corrected < plain);
    CHECK(method(doc, "gabp+btl-trunc")["parameters"]["L_max"] == 12);

    std::ifstream rp(dir / "rp.mtx");
    std::string line;
    std::getline(rp, line);
    CHECK(line == "%%MatrixMarket matrix coordinate real general");
    while (std::getline(rp, line) && line[0] == '%') {
    }
    std::istringstream size_line(line);
    int rows = 0, cols = 0, nnz = 0;
    size_line >> rows >> cols >> nnz;
    CHECK(rows == 24);
    CHECK(cols == 24);
    // Sum over vertices of deg (deg - 1): corners 2, sides 3, centre 4.
    CHECK(nnz == 4 * 2 * 1 + 4 * 3 * 2 + 4 * 3);
  }
  SUBCASE("blocksum methods on a grid") {
    REQUIRE(run("gen grid --rows 8 --cols 8 --r 0.2 --periodic --out " + dir / "g.mtx").code == 0);
    const auto res =
        run("estimate " + dir / "g.mtx" +
            " --methods exact,gabp,blocksum-R,gabp+blocksum-Rprime -L 4 --grid-rows 8 "
            "--grid-cols 8 --periodic --json " +
            dir / "out.json");
    REQUIRE(res.code == 0);
    const auto doc = json::parse(slurp(dir / "out.json"));
    const auto& b = method(doc, "blocksum-R");
    CHECK(b["error_vs_exact"].get<double>() <= b["bound"].get<double>());
    CHECK(method(doc, "gabp+blocksum-Rprime")["error_vs_exact"].get<double>() <
          method(doc, "gabp")["error_vs_exact"].get<double>());
    CHECK(run("estimate " + dir / "g.mtx" + " --methods blocksum-R").code == 2);
  }
  SUBCASE("deterministic apart from timings") {
    REQUIRE(run("gen random --n 15 --rho 0.7 --seed 3 --out " + dir / "r.mtx").code == 0);
    auto strip = [](json doc) {
      for (auto& m : doc["methods"]) m.erase("wall_time_seconds");
      return doc.dump();
    };
    const std::string args = "estimate " + dir / "r.mtx" + " --methods exact,gabp,orbit-trunc";
    CHECK(strip(json::parse(run(args).out)) == strip(json::parse(run(args).out)));
  }
  SUBCASE("error codes") {
    REQUIRE(run("gen grid --rows 4 --cols 4 --r 0.3 --periodic --out " + dir / "bad.mtx").code == 0);
    CHECK(run("estimate " + dir / "bad.mtx").code == 3);
    REQUIRE(run("gen grid --rows 4 --cols 4 --r 0.2 --periodic --out " + dir / "g.mtx").code == 0);
    CHECK(run("estimate " + dir / "g.mtx" + " --max-iter 2 --tol 0").code == 4);
    CHECK(run("estimate " + dir / "g.mtx" + " --methods bogus").code == 2);
    REQUIRE(run("gen grid --rows 64 --cols 64 --r 0.2 --periodic --out " + dir / "big.mtx").code ==
            0);
    CHECK(run("estimate " + dir / "big.mtx" + " --methods exact").code == 5);
  }
}

TEST_CASE("sweep") {
  TempDir dir;
  const auto res = run("sweep --rows 8 --cols 8 --r-list 0.1,0.2 --L-list 2,4 --csv " +
                       dir / "s.csv");
  REQUIRE(res.code == 0);
  std::ifstream in(dir / "s.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "r,L,method,log_z_per_node,error_per_node,bound_per_node,rho_R,rho_Rprime,status");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "ok");
  }
  // Per r: exact, gabp, and two block methods for each of two L values.
  CHECK(rows == 2 * (2 + 2 * 2));
}

TEST_CASE("orbits") {
  TempDir dir;
  std::ofstream(dir / "tri.mtx") << "%%MatrixMarket matrix coordinate real symmetric\n"
                                    "3 3 6\n1 1 1\n2 2 1\n3 3 1\n2 1 -0.2\n3 1 -0.2\n3 2 -0.2\n";
  const auto res = run("orbits " + dir / "tri.mtx" + " --orbit-max 3");
  REQUIRE(res.code == 0);
  std::istringstream lines(res.out);
  std::string line;
  std::vector<std::string> all;
  while (std::getline(lines, line)) all.push_back(line);
  REQUIRE(all.size() == 5);
  CHECK(all[0].rfind("2 totally-backtracking 1-2-1 ", 0) == 0);
  CHECK(all[3].rfind("3 backtrackless 1-2-3-1 ", 0) == 0);
  CHECK(run("orbits " + dir / "tri.mtx" + " --orbit-max 20 --budget 10").code == 5);
}
