// Acceptance gate: one line per criterion, nonzero exit if any fail.
// Every tolerance is pinned here, next to the check it guards.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "snmge/energy_grid.h"
#include "snmge/mge_preconditioner.h"
#include "snmge/solvers.h"

#include "support.h"

using namespace snmge;

namespace {

int failures = 0;

void report(int num, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s  [%s]\n", pass ? "PASS" : "FAIL", num, name,
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, ap);
  va_end(ap);
  return buf;
}

double rel_inf(const Vec& a, const Vec& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::fabs(a[i] - b[i]));
    den = std::max(den, std::fabs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

double rel_l2(const Vec& a, const Vec& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

struct RunOut {
  SolveStatus status = SolveStatus::diverged;
  int rows = 0;    // block GMRES iterations (history rows)
  int inner = 0;   // total inner iterations including the cascade
  Vec phi;
  double seconds = 0.0;
};

// Fresh problem + context per run so set counts and hierarchy depths never
// leak between variants.
RunOut run_fixture(const FixtureOptions& fopt,
                   const std::function<void(SolverConfig&)>& tweak) {
  auto b = testsup::build_fixture(fopt);
  SolverConfig cfg = b.spec->solver;
  if (tweak) tweak(cfg);
  if (cfg.num_sets != b.spec->solver.num_sets) {
    b.spec->solver.num_sets = cfg.num_sets;
    b.ctx = build_operator_context(*b.spec);
  }
  const auto t0 = std::chrono::steady_clock::now();
  FixedSourceResult r = solve_fixed_source(b.ctx, cfg, b.spec->source);
  RunOut out;
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.status = r.log.status;
  out.rows = static_cast<int>(r.log.iterations.size());
  out.inner = r.log.total_iters;
  out.phi = std::move(r.phi.values);
  return out;
}

int chain_length(int g) {
  int d = 1;
  while (g > 1) {
    g = (g + 1) / 2;
    ++d;
  }
  return d;
}

// 1. The coupled-block GMRES solution matches a dense direct solve.
void criterion_1() {
  MaterialCrossSections xs;
  xs.sigma_t = {1.0, 1.1, 1.2};
  xs.sigma_s.assign(3, Vec(3, 0.0));
  for (int g = 0; g < 3; ++g)
    for (int gp = 0; gp < 3; ++gp)
      xs.sigma_s[g][gp] = (g == gp ? 0.40 : 0.15) * xs.sigma_t[gp];
  xs.nu_sigma_f.assign(3, 0.0);
  xs.chi.assign(3, 0.0);

  ProblemSpec spec;
  spec.mesh.nx = spec.mesh.ny = spec.mesh.nz = 2;
  spec.mesh.dx = spec.mesh.dy = spec.mesh.dz = 1.0;
  for (auto& bc : spec.mesh.bc) bc = BoundaryKind::vacuum;
  spec.mesh.material_id.assign(8, 0);
  spec.materials.push_back(xs);
  spec.num_groups = 3;
  spec.quadrature_order = 4;
  spec.source.group_strength = {1.0, 0.8, 0.6};
  spec.solver.block_mode = BlockMode::all_groups;
  spec.solver.tol = 1e-10;
  auto b = testsup::build_spec(std::move(spec));

  const int n = b.ctx.block.size() * b.ctx.num_cells();
  auto op = [&](const Vec& v) {
    MomentVector mv(b.ctx.block, b.ctx.num_cells());
    mv.values = v;
    return apply_operator(b.ctx, mv).values;
  };
  const auto cols = testsup::dense_columns(op, n);
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cols[j][i];

  MomentVector none(b.ctx.partition.cascade, b.ctx.num_cells());
  const MomentVector rhs = build_fixed_rhs(b.ctx, b.spec->source, none);
  const Eigen::VectorXd direct =
      a.lu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.values.data(), n));

  FixedSourceResult r = solve_fixed_source(b.ctx, b.spec->solver, b.spec->source);
  const Vec want(direct.data(), direct.data() + n);
  const double diff = rel_l2(r.phi.values, want);
  report(1, "block GMRES matches a dense direct solve",
         r.log.status == SolveStatus::converged && diff <= 1e-8,
         fmt("rel L2 diff %.3e vs 1e-8 in %zu iterations", diff,
             r.log.iterations.size()));
}

// 2. Power iteration reproduces closed-form infinite-medium eigenvalues.
void criterion_2() {
  MaterialCrossSections one;
  one.sigma_t = {1.0};
  one.sigma_s = {{0.5}};
  one.nu_sigma_f = {0.6};
  one.chi = {1.0};
  ProblemSpec spec;
  spec.mesh.nx = spec.mesh.ny = spec.mesh.nz = 1;
  spec.mesh.dx = spec.mesh.dy = spec.mesh.dz = 1.0;
  for (auto& bc : spec.mesh.bc) bc = BoundaryKind::reflect;
  spec.mesh.material_id = {0};
  spec.materials.push_back(one);
  spec.num_groups = 1;
  spec.quadrature_order = 2;
  spec.source.group_strength = {1.0};
  spec.solver.tol = 1e-8;
  spec.eigen.enabled = true;
  spec.eigen.k_tol = 1e-9;
  auto b1 = testsup::build_spec(std::move(spec));
  const EigenResult r1 = power_iteration(b1.ctx, b1.spec->solver, b1.spec->eigen);
  const double err1 = std::fabs(r1.k - 1.2);

  auto b4 = testsup::build_fixture(
      {.num_groups = 4, .num_upscatter = 2, .n = 1, .reflecting = true, .fission = true});
  SolverConfig cfg = b4.spec->solver;
  cfg.tol = 1e-8;
  EigenConfig eig = b4.spec->eigen;
  eig.k_tol = 1e-9;
  const auto& m = b4.spec->materials[0];
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  Eigen::Vector4d chi, f;
  for (int g = 0; g < 4; ++g) {
    a(g, g) = m.sigma_t[g];
    for (int gp = 0; gp < 4; ++gp) a(g, gp) -= m.sigma_s[g][gp];
    chi[g] = m.chi[g];
    f[g] = m.nu_sigma_f[g];
  }
  const double k4_exact = f.dot(a.lu().solve(chi));
  const EigenResult r4 = power_iteration(b4.ctx, cfg, eig);
  const double err4 = std::fabs(r4.k - k4_exact);

  report(2, "infinite-medium eigenvalues match closed forms",
         r1.log.status == SolveStatus::converged && err1 <= 1e-8 &&
             r4.log.status == SolveStatus::converged && err4 <= 1e-7,
         fmt("1g |k-1.2| = %.2e vs 1e-8; 4g |k-%.12f| = %.2e vs 1e-7", err1,
             k4_exact, err4));
}

// 3. Grid depth equals the halving-chain length, capped automatically.
void criterion_3() {
  bool ok = grid_depth(27) == 6;
  for (int g = 1; g <= 512 && ok; ++g) ok = grid_depth(g) == chain_length(g);
  for (int m = 1; m <= 64 && ok; ++m) {
    const int formula = static_cast<int>(std::floor(std::log2(double(m)))) + 2;
    ok = auto_grid_depth(m, 1) == std::min(formula, chain_length(m));
  }
  report(3, "grid depth follows the halving chain",
         ok, fmt("groups 1..512 checked, depth(27) = %d", grid_depth(27)));
}

// 4. Restriction and prolongation match their stencils exactly.
void criterion_4() {
  bool ok = true;
  for (int n = 1; n <= 33 && ok; ++n) {
    const int m = (n + 1) / 2;
    Vec f(n);
    for (int i = 0; i < n; ++i) f[i] = std::sin(1.0 + i) + 0.01 * i;
    const Vec c = restrict_vector(f);
    ok = static_cast<int>(c.size()) == m;
    for (int g = 0; ok && g < n / 2; ++g)
      ok = c[g] == 0.5 * (f[2 * g] + f[2 * g + 1]);
    if (ok && n % 2 == 1) ok = c[m - 1] == f[n - 1];

    Vec cc(m);
    for (int i = 0; i < m; ++i) cc[i] = std::cos(2.0 + i);
    const Vec p = prolong_vector(cc, n);
    for (int g = 0; ok && g < m && 2 * g < n; ++g) ok = p[2 * g] == cc[g];
    for (int g = 0; ok && g + 1 < m && 2 * g + 1 < n; ++g)
      ok = p[2 * g + 1] == 0.5 * (cc[g] + cc[g + 1]);
    if (ok && n % 2 == 0) ok = p[n - 1] == cc[m - 1];

    if (ok) ok = restrict_vector(Vec(n, 1.0)) == Vec(m, 1.0) &&
                 prolong_vector(Vec(m, 1.0), n) == Vec(n, 1.0);
  }
  report(4, "grid transfers match their stencils", ok, "sizes 1..33, exact");
}

// 5. The preconditioner application is linear.
void criterion_5() {
  auto b = testsup::build_fixture({});
  attach_hierarchy(b.ctx, b.spec->solver);
  MgePreconditioner pc(&b.ctx, b.spec->solver);

  MomentVector u(b.ctx.block, b.ctx.num_cells());
  MomentVector v(b.ctx.block, b.ctx.num_cells());
  for (size_t i = 0; i < u.values.size(); ++i) {
    u.values[i] = std::sin(0.37 * i) + 0.2;
    v.values[i] = std::cos(0.61 * i) - 0.1;
  }
  MomentVector combo = u;
  combo.add_scaled(v, 2.0);
  MomentVector want = pc.apply(u);
  want.add_scaled(pc.apply(v), 2.0);
  MomentVector got = pc.apply(combo);
  got.add_scaled(want, -1.0);
  const double bound = 1e-10 * (norm2(u.values) + norm2(v.values));
  const double err = norm_inf(got.values);
  report(5, "preconditioner application is linear", err <= bound,
         fmt("|P(u+2v)-Pu-2Pv| = %.3e vs %.3e", err, bound));
}

// 6. Preconditioning strictly reduces block iterations, vacuum and reflecting.
void criterion_6() {
  const auto tweak_on = [](SolverConfig& c) { c.precond_enabled = true; };
  const RunOut v0 = run_fixture({}, nullptr);
  const RunOut v1 = run_fixture({}, tweak_on);
  const RunOut r0 = run_fixture({.reflecting = true}, nullptr);
  const RunOut r1 = run_fixture({.reflecting = true}, tweak_on);
  const bool conv = v0.status == SolveStatus::converged &&
                    v1.status == SolveStatus::converged &&
                    r0.status == SolveStatus::converged &&
                    r1.status == SolveStatus::converged;
  const double dv = rel_inf(v1.phi, v0.phi);
  const double dr = rel_inf(r1.phi, r0.phi);
  report(6, "preconditioning cuts block iterations on both boundary types",
         conv && v1.rows < v0.rows && r1.rows < r0.rows && dv <= 1e-5 && dr <= 1e-5,
         fmt("vacuum %d -> %d, reflecting %d -> %d, soln diff %.1e / %.1e",
             v0.rows, v1.rows, r0.rows, r1.rows, dv, dr));
}

// 7. Moderate relaxation weights help; heavy ones destroy the gain.
void criterion_7() {
  const double weights[] = {1.0, 1.5, 2.0, 2.5, 3.0};
  const RunOut plain = run_fixture({}, nullptr);
  int counts[5];
  for (int i = 0; i < 5; ++i) {
    const double w = weights[i];
    const RunOut r = run_fixture({}, [w](SolverConfig& c) {
      c.precond_enabled = true;
      c.weight = w;
      c.relax = 1;
      c.vcycles = 1;
    });
    counts[i] = r.status == SolveStatus::converged ? r.rows : 1 << 20;
  }
  const int best_moderate = std::min(counts[0], counts[1]);
  const bool ok = counts[0] < plain.rows && counts[1] < plain.rows &&
                  counts[2] >= best_moderate &&
                  std::max(counts[3], counts[4]) > plain.rows;
  report(7, "relaxation weight has a working range", ok,
         fmt("rows at w=1..3: %d %d %d %d %d, unpreconditioned %d", counts[0],
             counts[1], counts[2], counts[3], counts[4], plain.rows));
}

// 8. One grid level is weaker than two; deeper grids change little.
void criterion_8() {
  int counts[4];
  for (int d = 1; d <= 4; ++d) {
    const RunOut r = run_fixture({}, [d](SolverConfig& c) {
      c.precond_enabled = true;
      c.depth = d;
    });
    counts[d - 1] = r.status == SolveStatus::converged ? r.rows : 1 << 20;
  }
  const bool ok = counts[0] > counts[1] && std::abs(counts[2] - counts[1]) <= 1 &&
                  std::abs(counts[3] - counts[1]) <= 1;
  report(8, "grid depth beyond two levels saturates", ok,
         fmt("rows at depth 1..4: %d %d %d %d", counts[0], counts[1], counts[2],
             counts[3]));
}

// 9. A reduced preconditioner quadrature keeps the iteration count and costs
//    no more wall time than the full-order preconditioner.
void criterion_9() {
  FixtureOptions f;
  f.quadrature_order = 8;
  auto bench = [&](std::optional<int> pc_order) {
    auto b = testsup::build_fixture(f);
    SolverConfig cfg = b.spec->solver;
    cfg.precond_enabled = true;
    cfg.pc_order = pc_order;
    b.spec->solver.pc_order = pc_order;
    b.ctx = build_operator_context(*b.spec);
    RunOut best;
    best.seconds = 1e30;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      FixedSourceResult r = solve_fixed_source(b.ctx, cfg, b.spec->source);
      const double s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (s < best.seconds) {
        best.seconds = s;
        best.status = r.log.status;
        best.rows = static_cast<int>(r.log.iterations.size());
        best.phi = std::move(r.phi.values);
      }
    }
    return best;
  };
  const RunOut full = bench(std::nullopt);
  const RunOut cheap = bench(2);
  const double diff = rel_inf(cheap.phi, full.phi);
  const bool ok = full.status == SolveStatus::converged &&
                  cheap.status == SolveStatus::converged &&
                  cheap.rows <= full.rows + 2 && diff <= 1e-5 &&
                  cheap.seconds <= full.seconds;
  report(9, "reduced preconditioner quadrature trades nothing away", ok,
         fmt("rows S2 %d vs S8 %d, best-of-3 %.3fs vs %.3fs, soln diff %.1e",
             cheap.rows, full.rows, cheap.seconds, full.seconds, diff));
}

// 10. Energy sets leave the operator intact and degrade the preconditioner
//     gracefully.
void criterion_10() {
  const int set_counts[] = {1, 2, 5};
  RunOut plain[3], mge[3];
  for (int i = 0; i < 3; ++i) {
    const int s = set_counts[i];
    plain[i] = run_fixture({}, [s](SolverConfig& c) { c.num_sets = s; });
    mge[i] = run_fixture({}, [s](SolverConfig& c) {
      c.num_sets = s;
      c.precond_enabled = true;
    });
  }
  bool ok = true;
  for (int i = 0; i < 3; ++i)
    ok = ok && plain[i].status == SolveStatus::converged &&
         mge[i].status == SolveStatus::converged;
  // The unpreconditioned operator must not feel the set split at all.
  ok = ok && plain[1].rows == plain[0].rows && plain[2].rows == plain[0].rows;
  ok = ok && rel_inf(plain[1].phi, plain[0].phi) <= 1e-12 &&
       rel_inf(plain[2].phi, plain[0].phi) <= 1e-12;
  // More sets = weaker coupling capture, but never below breakeven here.
  ok = ok && mge[0].rows <= mge[1].rows && mge[1].rows <= mge[2].rows;
  for (int i = 0; i < 3; ++i) ok = ok && mge[i].rows < plain[i].rows;
  report(10, "energy sets: invariant operator, graceful preconditioner", ok,
         fmt("plain rows %d/%d/%d, mge rows %d/%d/%d at sets 1/2/5",
             plain[0].rows, plain[1].rows, plain[2].rows, mge[0].rows, mge[1].rows,
             mge[2].rows));
}

// 11. Preconditioning the inner solves of the eigenvalue iteration cuts total
//     Krylov work without moving the eigenvalue.
void criterion_11() {
  FixtureOptions f;
  f.num_groups = 4;
  f.num_upscatter = 2;
  f.n = 2;
  f.fission = true;
  auto run = [&](bool pc) {
    auto b = testsup::build_fixture(f);
    SolverConfig cfg = b.spec->solver;
    cfg.precond_enabled = pc;
    return power_iteration(b.ctx, cfg, b.spec->eigen);
  };
  const EigenResult r0 = run(false);
  const EigenResult r1 = run(true);
  const double dk = std::fabs(r1.k - r0.k);
  const bool ok = r0.log.status == SolveStatus::converged &&
                  r1.log.status == SolveStatus::converged &&
                  r0.log.outers.size() == r1.log.outers.size() &&
                  dk <= 1e-5 && r1.log.total_iters < r0.log.total_iters;
  report(11, "preconditioned eigen solve: same k, less Krylov work", ok,
         fmt("outers %zu/%zu, |dk| = %.2e, krylov %d -> %d", r0.log.outers.size(),
             r1.log.outers.size(), dk, r0.log.total_iters, r1.log.total_iters));
}

// 12. Gauss-Seidel and preconditioned GMRES agree; pure downscatter needs one
//     Gauss-Seidel pass.
void criterion_12() {
  auto b = testsup::build_fixture({});
  SolverConfig gs = b.spec->solver;
  gs.kind = SolverKind::gauss_seidel;
  SolverConfig gm = b.spec->solver;
  gm.precond_enabled = true;
  const FixedSourceResult rs = solve_fixed_source(b.ctx, gs, b.spec->source);
  const FixedSourceResult rg = solve_fixed_source(b.ctx, gm, b.spec->source);
  const double diff = rel_inf(rs.phi.values, rg.phi.values);

  auto bd = testsup::build_fixture({.num_upscatter = 0});
  SolverConfig gsd = bd.spec->solver;
  gsd.kind = SolverKind::gauss_seidel;
  const FixedSourceResult rd = solve_fixed_source(bd.ctx, gsd, bd.spec->source);

  const bool ok = rs.log.status == SolveStatus::converged &&
                  rg.log.status == SolveStatus::converged && diff <= 1e-5 &&
                  rd.log.status == SolveStatus::converged &&
                  rd.log.iterations.size() == 1;
  report(12, "solver cross-check and downscatter short-circuit", ok,
         fmt("GS vs MGE-GMRES diff %.2e vs 1e-5, downscatter passes %zu", diff,
             rd.log.iterations.size()));
}

}  // namespace

int main() {
  using Fn = void (*)();
  const Fn criteria[] = {criterion_1, criterion_2, criterion_3,  criterion_4,
                         criterion_5, criterion_6, criterion_7,  criterion_8,
                         criterion_9, criterion_10, criterion_11, criterion_12};
  int num = 0;
  for (Fn fn : criteria) {
    ++num;
    try {
      fn();
    } catch (const std::exception& e) {
      report(num, "unexpected exception", false, e.what());
    }
  }
  if (failures == 0) {
    std::printf("all %zu criteria passed\n", std::size(criteria));
    return 0;
  }
  std::printf("%d of %zu criteria failed\n", failures, std::size(criteria));
  return 1;
}
