#include "snmge/solvers.h"

#include <chrono>
#include <cmath>
#include <memory>

#include "snmge/gmres.h"
#include "snmge/mge_preconditioner.h"
#include "snmge/partition.h"
#include "snmge/sweep.h"

namespace snmge {

namespace {

using steady = std::chrono::steady_clock;

double seconds_since(steady::time_point& mark) {
  const auto now = steady::now();
  const double s = std::chrono::duration<double>(now - mark).count();
  mark = now;
  return s;
}

// Inner solves run an order of magnitude tighter than the outer tolerance so
// their error never dominates the reported residual.
constexpr double kInnerTolFactor = 0.1;

LinearOp block_operator(const OperatorContext& ctx) {
  return [&ctx](const Vec& v) {
    MomentVector mv(ctx.block, ctx.num_cells());
    mv.values = v;
    return apply_operator(ctx, mv).values;
  };
}

FixedSourceResult gauss_seidel_solve(OperatorContext& ctx,
                                     const SolverConfig& config,
                                     const SourceSpec& source) {
  const int cells = ctx.num_cells();
  const int G = ctx.num_groups;
  const auto& mats = *ctx.materials;
  const auto& mat_id = ctx.mesh->material_id;
  auto within =
      make_gmres_within_group_solver(kInnerTolFactor * config.tol, config.max_iters);

  // A lower-triangular scattering matrix makes one full pass exact, so the
  // loop can stop without a second pass to confirm.
  const bool triangular = partition_upscatter(mats).block.empty();

  FixedSourceResult out;
  out.phi = MomentVector(GroupRange{0, G}, cells);
  MomentVector& phi = out.phi;
  int inner_total = 0;
  auto mark = steady::now();

  for (int outer = 1; outer <= config.max_iters; ++outer) {
    const Vec previous = phi.values;

    for (int g = 0; g < G; ++g) {
      MomentVector s(GroupRange{g, g + 1}, cells);
      double* sd = s.group_data(0);
      for (int c = 0; c < cells; ++c) sd[c] = source.value(g, c, cells);
      for (int gp = 0; gp < G; ++gp) {
        if (gp == g) continue;  // the diagonal stays on the left-hand side
        bool any = false;
        for (const auto& m : mats)
          if (m.sigma_s[g][gp] != 0.0) { any = true; break; }
        if (!any) continue;
        const double* pd = phi.group_data(gp);
        for (int c = 0; c < cells; ++c)
          sd[c] += mats[mat_id[c]].sigma_s[g][gp] * pd[c];
      }
      MomentVector rhs = transport_sweep(s, ctx.sigma_t_slice({g, g + 1}),
                                         ctx.num_materials, ctx.quadrature, *ctx.mesh);
      auto op = [&ctx, g](const Vec& x) { return apply_single_group(ctx, g, x); };
      auto [x, inner] = within(op, rhs.values);
      inner_total += inner;
      double* pg = phi.group_data(g);
      for (int c = 0; c < cells; ++c) pg[c] = x[c];
    }

    double diff = 0.0;
    for (size_t i = 0; i < phi.values.size(); ++i)
      diff = std::max(diff, std::fabs(phi.values[i] - previous[i]));
    const double scale = norm_inf(phi.values);
    const double rel = scale > 0.0 ? diff / scale : 0.0;

    out.log.iterations.push_back({outer, rel, seconds_since(mark)});
    out.log.final_residual = rel;
    if (rel <= config.tol || triangular) {
      out.log.status = SolveStatus::converged;
      out.log.total_iters = inner_total;
      return out;
    }
  }
  out.log.status = SolveStatus::max_iters;
  out.log.total_iters = inner_total;
  return out;
}

FixedSourceResult gmres_fixed_source(OperatorContext& ctx,
                                     const SolverConfig& config,
                                     const SourceSpec& source) {
  const int cells = ctx.num_cells();
  const int G = ctx.num_groups;
  auto within =
      make_gmres_within_group_solver(kInnerTolFactor * config.tol, config.max_iters);

  FixedSourceResult out;
  out.phi = MomentVector(GroupRange{0, G}, cells);

  int inner_total = 0;
  MomentVector phi_cascade = solve_cascade(ctx, source, within, &inner_total);
  for (int g = ctx.partition.cascade.begin; g < ctx.partition.cascade.end; ++g) {
    const double* src = phi_cascade.group_data(g - ctx.partition.cascade.begin);
    double* dst = out.phi.group_data(g);
    for (int c = 0; c < cells; ++c) dst[c] = src[c];
  }

  if (ctx.block.empty()) {
    out.log.status = SolveStatus::converged;
    out.log.total_iters = inner_total;
    return out;
  }

  MomentVector b = build_fixed_rhs(ctx, source, phi_cascade);

  std::unique_ptr<MgePreconditioner> pc;
  LinearOp right_pc = nullptr;
  if (config.precond_enabled) {
    if (!ctx.hierarchy) attach_hierarchy(ctx, config);
    pc = std::make_unique<MgePreconditioner>(&ctx, config);
    right_pc = [&ctx, p = pc.get()](const Vec& v) {
      MomentVector mv(ctx.block, ctx.num_cells());
      mv.values = v;
      return p->apply(mv).values;
    };
  }

  GmresOptions opt;
  opt.tol = config.tol;
  opt.max_iters = config.max_iters;
  opt.restart = config.restart;
  GmresResult res = gmres_solve(block_operator(ctx), b.values, opt, right_pc);

  inner_total += res.iterations;
  for (size_t i = 0; i < res.res_history.size(); ++i)
    out.log.iterations.push_back(
        {static_cast<int>(i) + 1, res.res_history[i], res.iter_seconds[i]});
  out.log.status = res.status;
  out.log.final_residual = res.final_residual;
  out.log.total_iters = inner_total;

  for (int g = 0; g < ctx.block.size(); ++g) {
    const double* src = res.x.data() + static_cast<size_t>(g) * cells;
    double* dst = out.phi.group_data(ctx.block.begin + g);
    for (int c = 0; c < cells; ++c) dst[c] = src[c];
  }
  return out;
}

}  // namespace

WithinGroupSolver make_gmres_within_group_solver(double tol, int max_iters) {
  return [tol, max_iters](const std::function<Vec(const Vec&)>& op, const Vec& rhs) {
    GmresOptions opt;
    opt.tol = tol;
    opt.max_iters = max_iters;
    GmresResult r = gmres_solve(op, rhs, opt);
    if (r.status != SolveStatus::converged)
      throw NumericError("within-group solve failed to converge");
    return std::make_pair(std::move(r.x), r.iterations);
  };
}

FixedSourceResult solve_fixed_source(OperatorContext& ctx,
                                     const SolverConfig& config,
                                     const SourceSpec& source) {
  if (config.kind == SolverKind::gauss_seidel)
    return gauss_seidel_solve(ctx, config, source);
  return gmres_fixed_source(ctx, config, source);
}

EigenResult power_iteration(OperatorContext& ctx, const SolverConfig& config,
                            const EigenConfig& eigen) {
  const int cells = ctx.num_cells();
  const int G = ctx.num_groups;
  const auto& mats = *ctx.materials;
  const auto& mat_id = ctx.mesh->material_id;

  EigenResult out;
  Vec gamma(cells, 1.0 / cells);  // unit 1-norm flat fission source
  double k = eigen.k0;
  int total = 0;
  auto mark = steady::now();

  for (int outer = 1; outer <= eigen.max_outer; ++outer) {
    SourceSpec src;
    src.group_strength.assign(G, 0.0);
    src.per_cell.assign(static_cast<size_t>(G) * cells, 0.0);
    for (int g = 0; g < G; ++g) {
      double* row = src.per_cell.data() + static_cast<size_t>(g) * cells;
      for (int c = 0; c < cells; ++c) {
        const auto& chi = mats[mat_id[c]].chi;
        if (!chi.empty()) row[c] = chi[g] * gamma[c];
      }
    }

    FixedSourceResult lin = solve_fixed_source(ctx, config, src);
    if (lin.log.status != SolveStatus::converged) {
      out.log.status = lin.log.status;
      out.phi = std::move(lin.phi);
      break;
    }

    Vec gamma_next(cells, 0.0);
    for (int g = 0; g < G; ++g) {
      const double* pg = lin.phi.group_data(g);
      for (int c = 0; c < cells; ++c) {
        const auto& nf = mats[mat_id[c]].nu_sigma_f;
        if (!nf.empty()) gamma_next[c] += nf[g] * pg[c];
      }
    }

    const double k_new = norm1(gamma_next);  // gamma enters with unit 1-norm
    if (!(k_new > 0.0) || !std::isfinite(k_new)) {
      out.log.status = SolveStatus::diverged;
      out.phi = std::move(lin.phi);
      break;
    }
    for (double& v : gamma_next) v /= k_new;

    double l2 = 0.0, linf = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double d = gamma_next[c] - gamma[c];
      l2 += d * d;
      linf = std::max(linf, std::fabs(d));
    }
    l2 = std::sqrt(l2);
    const double delta_k = std::fabs(k_new - k);

    total += lin.log.total_iters;
    out.log.outers.push_back({outer, k_new, delta_k, l2, linf,
                              lin.log.total_iters, seconds_since(mark)});
    out.phi = std::move(lin.phi);
    k = k_new;
    gamma = std::move(gamma_next);

    if (delta_k / k_new <= eigen.k_tol && l2 <= eigen.l2_tol &&
        linf <= eigen.linf_tol) {
      out.log.status = SolveStatus::converged;
      break;
    }
    if (outer == eigen.max_outer) out.log.status = SolveStatus::max_iters;
  }

  out.k = k;
  out.fission_source = std::move(gamma);
  out.log.total_iters = total;
  out.log.k_effective = k;
  out.dominance_ratio = dominance_ratio_estimate(out.log.outers);
  return out;
}

std::optional<double> dominance_ratio_estimate(const std::vector<OuterRecord>& outers) {
  const int n = static_cast<int>(outers.size());
  if (n < 3) return std::nullopt;
  const int m = std::min(5, n);
  const double d_first = outers[n - m].l2_fission;
  const double d_last = outers[n - 1].l2_fission;
  if (d_first <= 0.0 || d_last <= 0.0) return 0.0;
  const double r = std::pow(d_last / d_first, 1.0 / (m - 1));
  if (!std::isfinite(r) || r < 0.0) return 0.0;
  return std::min(r, std::nextafter(1.0, 0.0));
}

}  // namespace snmge
