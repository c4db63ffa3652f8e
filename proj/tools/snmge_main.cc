#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "snmge/driver.h"

int main(int argc, char** argv) {
  CLI::App app{"multigroup discrete-ordinates transport solver"};

  snmge::DriverOptions opt;
  auto& ov = opt.overrides;
  bool eigen_flag = false;
  std::string precond_text;

  app.add_option("problem", opt.problem_path, "problem file")->required();
  app.add_flag("--eigen", eigen_flag, "run the power-iteration eigenvalue solve");
  app.add_option("--precond", precond_text, "multigrid preconditioner: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--weight", ov.weight, "Richardson relaxation weight");
  app.add_option("--relax", ov.relax, "relaxations per level per V-cycle visit");
  app.add_option("--vcycles", ov.vcycles, "V-cycles per preconditioner application");
  app.add_option("--depth", ov.depth, "energy-grid levels: auto or a positive integer");
  app.add_option("--pc-sn", ov.pc_sn, "preconditioner quadrature order: same or 2|4|6|8");
  app.add_option("--sets", ov.sets, "energy sets for concurrent block work");
  app.add_option("--solver", ov.solver, "linear solver: gmres|gs")
      ->check(CLI::IsMember({"gmres", "gs"}));
  app.add_option("--tol", ov.tol, "solver tolerance");
  app.add_option("--out", opt.out_dir,
                 "directory for convergence.csv, flux.csv, manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (eigen_flag) ov.eigen = true;
  if (!precond_text.empty()) ov.precond = (precond_text == "on");

  return snmge::run_driver(opt, std::cout, std::cerr);
}
