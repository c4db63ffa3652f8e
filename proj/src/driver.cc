#include "snmge/driver.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "snmge/energy_grid.h"
#include "snmge/io.h"
#include "snmge/solvers.h"

namespace snmge {

namespace {

using json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int parse_int_flag(const std::string& name, const std::string& text) {
  try {
    size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("--" + name + " expects an integer, got '" + text + "'");
  }
}

void apply_overrides(ProblemSpec& spec, const CliOverrides& o) {
  if (o.eigen) spec.eigen.enabled = *o.eigen;
  if (o.precond) spec.solver.precond_enabled = *o.precond;
  if (o.weight) spec.solver.weight = *o.weight;
  if (o.relax) spec.solver.relax = *o.relax;
  if (o.vcycles) spec.solver.vcycles = *o.vcycles;
  if (o.depth) {
    if (*o.depth == "auto")
      spec.solver.depth.reset();
    else
      spec.solver.depth = parse_int_flag("depth", *o.depth);
  }
  if (o.pc_sn) {
    if (*o.pc_sn == "same")
      spec.solver.pc_order.reset();
    else
      spec.solver.pc_order = parse_int_flag("pc-sn", *o.pc_sn);
  }
  if (o.sets) spec.solver.num_sets = *o.sets;
  if (o.solver) {
    if (*o.solver == "gmres")
      spec.solver.kind = SolverKind::gmres;
    else if (*o.solver == "gs")
      spec.solver.kind = SolverKind::gauss_seidel;
    else
      throw ConfigError("--solver expects gmres or gs, got '" + *o.solver + "'");
  }
  if (o.tol) spec.solver.tol = *o.tol;
}

json range_json(GroupRange r) { return json::array({r.begin, r.end}); }

json config_json(const ProblemSpec& spec, const OperatorContext& ctx,
                 const std::string& problem_path) {
  const auto& s = spec.solver;
  json j;
  j["problem_file"] = problem_path;
  j["mesh"] = {{"nx", spec.mesh.nx},   {"ny", spec.mesh.ny},
               {"nz", spec.mesh.nz},   {"dx", spec.mesh.dx},
               {"dy", spec.mesh.dy},   {"dz", spec.mesh.dz}};
  json bc = json::array();
  for (int f = 0; f < 6; ++f)
    bc.push_back(spec.mesh.bc[f] == BoundaryKind::reflect ? "reflect" : "vacuum");
  j["mesh"]["bc"] = bc;
  j["num_groups"] = spec.num_groups;
  j["num_materials"] = static_cast<int>(spec.materials.size());
  j["quadrature_order"] = spec.quadrature_order;
  j["mode"] = spec.eigen.enabled ? "eigenvalue" : "fixed_source";
  j["solver"] = {
      {"kind", s.kind == SolverKind::gmres ? "gmres" : "gs"},
      {"tol", s.tol},
      {"max_iters", s.max_iters},
      {"restart", s.restart},
      {"block", s.block_mode == BlockMode::all_groups ? "all" : "upscatter"},
      {"sets", s.num_sets},
  };
  j["solver"]["precond"] = {
      {"enabled", s.precond_enabled},
      {"weight", s.weight},
      {"relax", s.relax},
      {"vcycles", s.vcycles},
      {"depth_requested", s.depth ? json(*s.depth) : json("auto")},
      {"depth", ctx.hierarchy ? json(ctx.hierarchy->depth) : json(nullptr)},
      {"pc_order", ctx.pc_quadrature.order},
  };
  if (spec.eigen.enabled)
    j["eigen"] = {{"k_tol", spec.eigen.k_tol},
                  {"k0", spec.eigen.k0},
                  {"l2_tol", spec.eigen.l2_tol},
                  {"linf_tol", spec.eigen.linf_tol},
                  {"max_outer", spec.eigen.max_outer}};
  j["partition"] = {{"cascade", range_json(ctx.partition.cascade)},
                    {"block", range_json(ctx.block)}};
  return j;
}

}  // namespace

int run_driver(const DriverOptions& options, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  try {
    ProblemSpec spec = parse_problem_file(slurp(options.problem_path));
    apply_overrides(spec, options.overrides);
    validate_problem(spec);

    OperatorContext ctx = build_operator_context(spec);
    out << "groups " << spec.num_groups << " (cascade " << ctx.partition.cascade.begin
        << ".." << ctx.partition.cascade.end << ", block " << ctx.block.begin << ".."
        << ctx.block.end << "), cells " << ctx.num_cells() << ", S"
        << spec.quadrature_order << "\n";

    const auto t0 = std::chrono::steady_clock::now();
    ConvergenceLog log;
    MomentVector phi;
    double k = 0.0;
    std::optional<double> rho;
    if (spec.eigen.enabled) {
      EigenResult r = power_iteration(ctx, spec.solver, spec.eigen);
      log = std::move(r.log);
      phi = std::move(r.phi);
      k = r.k;
      rho = r.dominance_ratio;
    } else {
      FixedSourceResult r = solve_fixed_source(ctx, spec.solver, spec.source);
      log = std::move(r.log);
      phi = std::move(r.phi);
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (spec.eigen.enabled) {
      out << "power iteration: " << status_name(log.status) << ", k = "
          << format_double(k) << " after " << log.outers.size() << " outer iterations, "
          << log.total_iters << " Krylov iterations";
      if (rho) out << ", dominance ratio ~ " << format_double(*rho);
      out << "\n";
    } else {
      out << (spec.solver.kind == SolverKind::gmres ? "gmres: " : "gauss-seidel: ")
          << status_name(log.status) << " in " << log.iterations.size()
          << " iterations, residual " << format_double(log.final_residual) << ", "
          << log.total_iters << " inner iterations total\n";
    }

    if (!options.out_dir.empty()) {
      fs::create_directories(options.out_dir);
      const fs::path dir(options.out_dir);
      json manifest = config_json(spec, ctx, options.problem_path);
      json outputs;
      if (!log.iterations.empty() || !log.outers.empty()) {
        const auto csv = dir / "convergence.csv";
        emit_convergence_csv(log, csv.string());
        outputs["convergence_csv"] = csv.string();
      } else {
        outputs["convergence_csv"] = nullptr;
      }
      const auto fluxp = dir / "flux.csv";
      write_flux(phi, spec.mesh, fluxp.string());
      outputs["flux"] = fluxp.string();

      json result;
      result["status"] = status_name(log.status);
      result["total_inner_iters"] = log.total_iters;
      result["rows"] =
          spec.eigen.enabled ? log.outers.size() : log.iterations.size();
      if (spec.eigen.enabled) {
        result["k"] = k;
        if (rho) result["dominance_ratio"] = *rho;
      } else {
        result["final_residual"] = log.final_residual;
      }
      result["elapsed_seconds"] = elapsed;
      manifest["result"] = result;
      manifest["outputs"] = outputs;

      std::ofstream mf(dir / "manifest.json");
      if (!mf) throw ConfigError("cannot write manifest.json");
      mf << manifest.dump(2) << "\n";
      out << "wrote " << (dir / "manifest.json").string() << "\n";
    }

    return log.status == SolveStatus::converged ? 0 : 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace snmge
