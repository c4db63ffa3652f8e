#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "snmge/io.h"
#include "snmge/problem.h"

#include "support.h"

using namespace snmge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fixture_path(const FixtureOptions& opt, const std::string& tag) {
  const std::string path = "/tmp/snmge_cli_" + tag + ".prob";
  testsup::write_file(path, fixture_problem_text(opt));
  return path;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

// Drops the trailing (wall-time) column so reruns can be compared exactly.
std::string without_seconds(const std::string& csv) {
  std::string out;
  for (const auto& line : lines_of(csv))
    out += line.substr(0, line.rfind(',')) + "\n";
  return out;
}

json manifest_of(const std::string& dir) {
  return json::parse(testsup::read_file(dir + "/manifest.json"));
}

}  // namespace

TEST_CASE("fixed-source run prints the partition and exits cleanly") {
  const auto path = fixture_path({}, "basic");
  const auto r = testsup::run_cli(path, "basic");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("groups 10 (cascade 0..4, block 4..10), cells 27, S4") !=
        std::string::npos);
  CHECK(r.out.find("gmres: converged") != std::string::npos);
}

TEST_CASE("output directory holds manifest, convergence table, and flux") {
  const auto path = fixture_path({}, "outdir");
  const std::string dir = "/tmp/snmge_cli_outdir";
  fs::remove_all(dir);
  const auto r = testsup::run_cli(path + " --out " + dir + " --tol 1e-8", "outdir");
  REQUIRE(r.exit_code == 0);

  const json m = manifest_of(dir);
  CHECK(m["mesh"]["nx"] == 3);
  CHECK(m["mesh"]["bc"][0] == "vacuum");
  CHECK(m["num_groups"] == 10);
  CHECK(m["quadrature_order"] == 4);
  CHECK(m["mode"] == "fixed_source");
  CHECK(m["solver"]["kind"] == "gmres");
  CHECK(m["solver"]["tol"] == 1e-8);
  CHECK(m["solver"]["sets"] == 1);
  CHECK(m["solver"]["precond"]["enabled"] == false);
  CHECK(m["solver"]["precond"]["depth"].is_null());  // no hierarchy was built
  CHECK(m["partition"]["cascade"] == json::array({0, 4}));
  CHECK(m["partition"]["block"] == json::array({4, 10}));
  CHECK(m["result"]["status"] == "converged");

  const auto csv = lines_of(testsup::read_file(dir + "/convergence.csv"));
  REQUIRE(csv.size() >= 2);
  CHECK(csv[0] == "iter,res_norm,seconds");
  CHECK(csv.size() - 1 == m["result"]["rows"].get<size_t>());
  double prev = 0.0;
  for (size_t i = 1; i < csv.size(); ++i) {
    std::istringstream row(csv[i]);
    int iter;
    char comma;
    double res;
    row >> iter >> comma >> res;
    CHECK(iter == static_cast<int>(i));
    if (i > 1) CHECK(res <= prev * (1.0 + 1e-12));
    prev = res;
  }

  const auto flux_text = testsup::read_file(dir + "/flux.csv");
  CHECK(lines_of(flux_text)[0] == "g,i,j,k,flux");

  // Round trip: parsing and re-serializing reproduces the bytes.
  auto b = testsup::build_fixture({});
  const MomentVector phi = read_flux(dir + "/flux.csv", b.spec->mesh);
  std::ostringstream rewritten;
  write_flux(phi, b.spec->mesh, rewritten);
  CHECK(rewritten.str() == flux_text);
}

TEST_CASE("reruns are identical apart from wall time") {
  const auto path = fixture_path({}, "rerun");
  fs::remove_all("/tmp/snmge_cli_r1");
  fs::remove_all("/tmp/snmge_cli_r2");
  REQUIRE(testsup::run_cli(path + " --out /tmp/snmge_cli_r1", "rerun1").exit_code == 0);
  REQUIRE(testsup::run_cli(path + " --out /tmp/snmge_cli_r2", "rerun2").exit_code == 0);

  CHECK(testsup::read_file("/tmp/snmge_cli_r1/flux.csv") ==
        testsup::read_file("/tmp/snmge_cli_r2/flux.csv"));
  CHECK(without_seconds(testsup::read_file("/tmp/snmge_cli_r1/convergence.csv")) ==
        without_seconds(testsup::read_file("/tmp/snmge_cli_r2/convergence.csv")));
}

TEST_CASE("preconditioning is echoed and shortens the iteration table") {
  const auto path = fixture_path({}, "pc");
  fs::remove_all("/tmp/snmge_cli_plain");
  fs::remove_all("/tmp/snmge_cli_mge");
  const auto r0 = testsup::run_cli(path + " --out /tmp/snmge_cli_plain", "pc0");
  const auto r1 =
      testsup::run_cli(path + " --precond on --out /tmp/snmge_cli_mge", "pc1");
  REQUIRE(r0.exit_code == 0);
  REQUIRE(r1.exit_code == 0);

  const json m0 = manifest_of("/tmp/snmge_cli_plain");
  const json m1 = manifest_of("/tmp/snmge_cli_mge");
  CHECK(m1["solver"]["precond"]["enabled"] == true);
  CHECK(m1["solver"]["precond"]["depth"] == 4);
  CHECK(m1["solver"]["precond"]["depth_requested"] == "auto");
  CHECK(m1["solver"]["precond"]["pc_order"] == 4);
  CHECK(m1["result"]["rows"].get<int>() < m0["result"]["rows"].get<int>());
}

TEST_CASE("iteration cap surfaces as exit code 2") {
  // One cell: within-group solves finish in one iteration, so the cap lands
  // on the coupled block solve instead of poisoning the cascade.
  const auto path = fixture_path({.n = 1, .solver_line = "max_iters=2"}, "cap");
  fs::remove_all("/tmp/snmge_cli_cap");
  const auto r = testsup::run_cli(path + " --out /tmp/snmge_cli_cap", "cap");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("max_iters") != std::string::npos);
  CHECK(manifest_of("/tmp/snmge_cli_cap")["result"]["status"] == "max_iters");
}

TEST_CASE("config failures exit with code 1 and a message") {
  SUBCASE("unparseable problem file") {
    testsup::write_file("/tmp/snmge_cli_bad.prob", "[mesh] not numbers here\n");
    const auto r = testsup::run_cli("/tmp/snmge_cli_bad.prob", "bad");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(r.err.find("line 1") != std::string::npos);
  }
  SUBCASE("missing file") {
    const auto r = testsup::run_cli("/tmp/does_not_exist.prob", "missing");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("cannot open") != std::string::npos);
  }
  SUBCASE("reduced preconditioner quadrature needs vacuum boundaries") {
    const auto path = fixture_path({.reflecting = true}, "refl");
    const auto r = testsup::run_cli(path + " --precond on --pc-sn 2", "pcsn");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("vacuum") != std::string::npos);
  }
  SUBCASE("unknown solver name") {
    const auto path = fixture_path({}, "badsolver");
    const auto r = testsup::run_cli(path + " --solver bogus", "badsolver");
    CHECK(r.exit_code == 1);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("eigenvalue mode writes the outer-iteration table") {
  const auto path = fixture_path(
      {.num_groups = 4, .num_upscatter = 2, .n = 2, .fission = true}, "eig");
  fs::remove_all("/tmp/snmge_cli_eig");
  const auto r = testsup::run_cli(path + " --out /tmp/snmge_cli_eig", "eig");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("power iteration: converged, k = ") != std::string::npos);

  const json m = manifest_of("/tmp/snmge_cli_eig");
  CHECK(m["mode"] == "eigenvalue");
  CHECK(m["eigen"]["k_tol"] == 1e-5);
  const double k = m["result"]["k"].get<double>();
  CHECK(k > 0.0);
  CHECK(k < 1.0);  // small leaky box

  const auto csv = lines_of(testsup::read_file("/tmp/snmge_cli_eig/convergence.csv"));
  CHECK(csv[0] == "outer,k,delta_k,l2_fission,linf_fission,krylov_iters,seconds");
  CHECK(csv.size() - 1 == m["result"]["rows"].get<size_t>());
}

TEST_CASE("pure downscatter leaves no convergence table") {
  const auto path = fixture_path({.num_upscatter = 0}, "down");
  fs::remove_all("/tmp/snmge_cli_down");
  const auto r = testsup::run_cli(path + " --out /tmp/snmge_cli_down", "down");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("block 10..10") != std::string::npos);
  CHECK(manifest_of("/tmp/snmge_cli_down")["outputs"]["convergence_csv"].is_null());
  CHECK_FALSE(fs::exists("/tmp/snmge_cli_down/convergence.csv"));
  CHECK(fs::exists("/tmp/snmge_cli_down/flux.csv"));
}

TEST_CASE("an overdeep grid request warns and clamps") {
  const auto path = fixture_path({}, "deep");
  const auto r = testsup::run_cli(path + " --precond on --depth 9", "deep");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("exceeds the achievable chain length") != std::string::npos);
}

TEST_CASE("gauss-seidel is selectable from the command line") {
  const auto path = fixture_path({}, "gs");
  fs::remove_all("/tmp/snmge_cli_gs");
  const auto r = testsup::run_cli(path + " --solver gs --out /tmp/snmge_cli_gs", "gs");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("gauss-seidel: converged") != std::string::npos);
  CHECK(manifest_of("/tmp/snmge_cli_gs")["solver"]["kind"] == "gs");
}

TEST_CASE("flag typos are rejected by the parser") {
  const auto path = fixture_path({}, "typo");
  CHECK(testsup::run_cli(path + " --precond maybe", "typo1").exit_code == 1);
  CHECK(testsup::run_cli(path + " --no-such-flag", "typo2").exit_code == 1);
  CHECK(testsup::run_cli("", "typo3").exit_code == 1);  // missing positional
}
