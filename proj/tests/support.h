#pragma once

// Shared helpers for the test binaries: fixture construction that keeps the
// ProblemSpec alive behind the OperatorContext's pointers, dense assembly of
// the matrix-free operator for oracle comparisons, and a tiny process runner
// for exercising the installed CLI binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "snmge/problem.h"
#include "snmge/transport_operator.h"

namespace testsup {

using namespace snmge;

struct Built {
  std::unique_ptr<ProblemSpec> spec;  // stable address; ctx points into it
  OperatorContext ctx;
};

inline Built build_fixture(const FixtureOptions& opt = {}) {
  Built b;
  b.spec = std::make_unique<ProblemSpec>(parse_problem_file(fixture_problem_text(opt)));
  b.ctx = build_operator_context(*b.spec);
  return b;
}

inline Built build_spec(ProblemSpec spec) {
  Built b;
  b.spec = std::make_unique<ProblemSpec>(std::move(spec));
  validate_problem(*b.spec);
  b.ctx = build_operator_context(*b.spec);
  return b;
}

/// Dense matrix of a linear operator on R^n, column by column.
inline std::vector<Vec> dense_columns(const std::function<Vec(const Vec&)>& op, int n) {
  std::vector<Vec> cols;
  cols.reserve(n);
  for (int j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    cols.push_back(op(e));
  }
  return cols;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

/// Runs the CLI with the given argument string; captures both streams.
#ifdef SNMGE_CLI_BIN
inline CliResult run_cli(const std::string& args, const std::string& tag) {
  const std::string out_path = "/tmp/snmge_test_" + tag + ".out";
  const std::string err_path = "/tmp/snmge_test_" + tag + ".err";
  const std::string cmd = std::string(SNMGE_CLI_BIN) + " " + args + " >" + out_path +
                          " 2>" + err_path;
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = raw == -1 ? -1 : WEXITSTATUS(raw);
  r.out = read_file(out_path);
  r.err = read_file(err_path);
  return r;
}
#endif

}  // namespace testsup
