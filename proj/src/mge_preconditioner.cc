#include "snmge/mge_preconditioner.h"

#include <cassert>
#include <thread>
#include <vector>

#include "snmge/energy_grid.h"
#include "snmge/sweep.h"

namespace snmge {

namespace {

// Set-local operator at one hierarchy level: v - T M S_l v with the level's
// truncated scattering, its sigma_t table, and the preconditioner quadrature.
// Vectors here are level-local (groups [0, n)).
MomentVector level_apply(const OperatorContext& ctx, const EnergyLevel& level,
                         const MomentVector& v) {
  const int n = level.num_groups;
  const int cells = ctx.num_cells();
  assert(static_cast<int>(v.groups.size()) == n && v.num_cells == cells);

  MomentVector src(GroupRange{0, n}, cells);
  const auto& mat = ctx.mesh->material_id;
  for (int g = 0; g < n; ++g) {
    double* out = src.group_data(g);
    for (int gp = 0; gp < n; ++gp) {
      bool any = false;
      for (const auto& xs : level.xs)
        if (xs.sigma_s[g][gp] != 0.0) { any = true; break; }
      if (!any) continue;
      const double* in = v.group_data(gp);
      for (int c = 0; c < cells; ++c)
        out[c] += level.xs[mat[c]].sigma_s[g][gp] * in[c];
    }
  }

  MomentVector swept = transport_sweep(src, level.sigma_t_table, ctx.num_materials,
                                       ctx.pc_quadrature, *ctx.mesh);
  MomentVector out = v;
  out.groups = GroupRange{0, n};
  out.add_scaled(swept, -1.0);
  return out;
}

// One weighted Richardson pass: x + omega (b - A x).
MomentVector relax_once(const OperatorContext& ctx, const EnergyLevel& level,
                        const MomentVector& x, const MomentVector& b, double omega) {
  MomentVector ax = level_apply(ctx, level, x);
  MomentVector out = x;
  out.add_scaled(b, omega);
  out.add_scaled(ax, -omega);
  return out;
}

// Group-dimension grid transfers applied cell by cell; the coefficients match
// restrict_vector / prolong_vector exactly.
MomentVector restrict_groups(const MomentVector& fine) {
  const int n = fine.groups.size();
  const int m = (n + 1) / 2;
  MomentVector coarse(GroupRange{0, m}, fine.num_cells);
  for (int c = 0; c < fine.num_cells; ++c) {
    for (int g = 0; g < n / 2; ++g)
      coarse.at(g, c) = 0.5 * (fine.at(2 * g, c) + fine.at(2 * g + 1, c));
    if (n % 2 == 1) coarse.at(m - 1, c) = fine.at(n - 1, c);
  }
  return coarse;
}

MomentVector prolong_groups(const MomentVector& coarse, int num_fine) {
  const int m = coarse.groups.size();
  MomentVector fine(GroupRange{0, num_fine}, coarse.num_cells);
  for (int c = 0; c < coarse.num_cells; ++c) {
    for (int g = 0; g < m; ++g)
      if (2 * g < num_fine) fine.at(2 * g, c) = coarse.at(g, c);
    for (int g = 0; g + 1 < m; ++g)
      if (2 * g + 1 < num_fine)
        fine.at(2 * g + 1, c) = 0.5 * (coarse.at(g, c) + coarse.at(g + 1, c));
    if (num_fine % 2 == 0) fine.at(num_fine - 1, c) = coarse.at(m - 1, c);
  }
  return fine;
}

// Classic V-cycle with a zero initial guess. The coarsest level does its
// relaxations and returns; there is no direct solve.
MomentVector v_cycle(const OperatorContext& ctx, const SetHierarchy& sh, int lev,
                     const MomentVector& b, int relax_count, double omega) {
  const EnergyLevel& level = sh.levels[lev];
  MomentVector x(GroupRange{0, level.num_groups}, b.num_cells);
  for (int i = 0; i < relax_count; ++i) x = relax_once(ctx, level, x, b, omega);
  if (lev + 1 == static_cast<int>(sh.levels.size())) return x;

  MomentVector rho = b;
  rho.groups = GroupRange{0, level.num_groups};
  rho.add_scaled(level_apply(ctx, level, x), -1.0);
  MomentVector xc =
      v_cycle(ctx, sh, lev + 1, restrict_groups(rho), relax_count, omega);
  x.add_scaled(prolong_groups(xc, level.num_groups), 1.0);

  for (int i = 0; i < relax_count; ++i) x = relax_once(ctx, level, x, b, omega);
  return x;
}

}  // namespace

MgePreconditioner::MgePreconditioner(const OperatorContext* ctx,
                                     const SolverConfig& config)
    : ctx_(ctx), omega_(config.weight), relax_(config.relax),
      vcycles_(config.vcycles) {
  assert(ctx_->hierarchy && "attach_hierarchy must run before constructing");
  depth_ = ctx_->hierarchy->depth;
}

MomentVector MgePreconditioner::apply(const MomentVector& u,
                                      SetSchedule schedule) const {
  assert(u.groups == ctx_->block);
  const auto& sets = ctx_->hierarchy->sets;
  MomentVector out(ctx_->block, u.num_cells);

  auto run_set = [&](int s) {
    const SetHierarchy& sh = sets[s];
    const int n = sh.fine_groups.size();
    MomentVector u_set = u.slice(sh.fine_groups);
    u_set.groups = GroupRange{0, n};

    // Stationary iteration on the set system: x <- x + V(u_set - A0 x),
    // which keeps the whole application linear in u.
    MomentVector x(GroupRange{0, n}, u.num_cells);
    for (int cycle = 0; cycle < vcycles_; ++cycle) {
      MomentVector r = u_set;
      if (cycle > 0) r.add_scaled(level_apply(*ctx_, sh.levels[0], x), -1.0);
      x.add_scaled(v_cycle(*ctx_, sh, 0, r, relax_, omega_), 1.0);
    }

    const int off = sh.fine_groups.begin - ctx_->block.begin;
    for (int g = 0; g < n; ++g) {
      const double* px = x.group_data(g);
      double* po = out.group_data(off + g);
      for (int c = 0; c < u.num_cells; ++c) po[c] = px[c];
    }
  };

  const int ns = static_cast<int>(sets.size());
  if (schedule == SetSchedule::reversed) {
    for (int s = ns - 1; s >= 0; --s) run_set(s);
  } else if (schedule == SetSchedule::sequential || ns <= 1 ||
             !ctx_->run_sets_concurrently) {
    for (int s = 0; s < ns; ++s) run_set(s);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(ns);
    for (int s = 0; s < ns; ++s) workers.emplace_back(run_set, s);
    for (auto& w : workers) w.join();
  }
  return out;
}

void attach_hierarchy(OperatorContext& ctx, const SolverConfig& config) {
  const int depth =
      resolve_grid_depth(ctx.block.size(), config.num_sets, config.depth);
  ctx.hierarchy = std::make_shared<const EnergyHierarchy>(
      build_hierarchy(*ctx.materials, ctx.set_blocks, depth));
}

}  // namespace snmge
