#include "snmge/transport_operator.h"

#include <cassert>
#include <thread>

#include "snmge/sweep.h"

namespace snmge {

Vec OperatorContext::sigma_t_slice(GroupRange r) const {
  Vec out(static_cast<size_t>(r.size()) * num_materials);
  for (int gl = 0; gl < r.size(); ++gl)
    for (int m = 0; m < num_materials; ++m)
      out[static_cast<size_t>(gl) * num_materials + m] =
          sigma_t_table[static_cast<size_t>(r.begin + gl) * num_materials + m];
  return out;
}

OperatorContext build_operator_context(const ProblemSpec& spec) {
  OperatorContext ctx;
  ctx.mesh = &spec.mesh;
  ctx.materials = &spec.materials;
  ctx.num_groups = spec.num_groups;
  ctx.num_materials = static_cast<int>(spec.materials.size());
  ctx.quadrature = build_quadrature(spec.quadrature_order);
  ctx.pc_quadrature = spec.solver.pc_order
                          ? build_quadrature(*spec.solver.pc_order)
                          : ctx.quadrature;
  ctx.partition = partition_upscatter(spec.materials);
  ctx.block = spec.solver.block_mode == BlockMode::all_groups
                  ? GroupRange{0, spec.num_groups}
                  : ctx.partition.block;
  if (spec.solver.block_mode == BlockMode::all_groups)
    ctx.partition = {{0, 0}, ctx.block};
  ctx.set_blocks = assign_groups_to_sets(ctx.block, spec.solver.num_sets);

  ctx.sigma_t_table.resize(static_cast<size_t>(spec.num_groups) * ctx.num_materials);
  for (int g = 0; g < spec.num_groups; ++g)
    for (int m = 0; m < ctx.num_materials; ++m)
      ctx.sigma_t_table[static_cast<size_t>(g) * ctx.num_materials + m] =
          spec.materials[m].sigma_t[g];
  return ctx;
}

namespace {

// out[g][c] += sum over gp in v.groups of sigma_s[g][gp](cell) * v[gp][c],
// for destination rows `rows` and source columns restricted to `cols`.
void accumulate_scatter(const OperatorContext& ctx, const MomentVector& v,
                        GroupRange cols, MomentVector& out) {
  const int ncells = ctx.num_cells();
  const std::vector<int>& mat = ctx.mesh->material_id;
  for (int g = out.groups.begin; g < out.groups.end; ++g) {
    double* dst = out.group_data(g - out.groups.begin);
    for (int gp = cols.begin; gp < cols.end; ++gp) {
      bool any = false;
      for (int m = 0; m < ctx.num_materials && !any; ++m)
        any = (*ctx.materials)[m].sigma_s[g][gp] != 0.0;
      if (!any) continue;
      const double* src = v.group_data(gp - v.groups.begin);
      for (int c = 0; c < ncells; ++c)
        dst[c] += (*ctx.materials)[mat[c]].sigma_s[g][gp] * src[c];
    }
  }
}

// Runs fn(s) for every set, concurrently when the context allows it.
void for_each_set(const OperatorContext& ctx, const std::function<void(int)>& fn) {
  const int n = static_cast<int>(ctx.set_blocks.size());
  if (n == 1 || !ctx.run_sets_concurrently) {
    for (int s = 0; s < n; ++s) fn(s);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(n);
  for (int s = 0; s < n; ++s) workers.emplace_back(fn, s);
  for (auto& w : workers) w.join();
}

}  // namespace

MomentVector scatter_matvec(const OperatorContext& ctx, const MomentVector& v,
                            GroupRange rows) {
  MomentVector out(rows, ctx.num_cells());
  accumulate_scatter(ctx, v, v.groups, out);
  return out;
}

MomentVector reduce_plus_scatter(const OperatorContext& ctx,
                                 const std::vector<MomentVector>& partials) {
  MomentVector sum(ctx.block, ctx.num_cells());
  for (size_t s = 0; s < partials.size(); ++s)  // ascending set order, always
    for (size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += partials[s].values[i];
  return sum;
}

MomentVector apply_operator(const OperatorContext& ctx, const MomentVector& v,
                            const AngularQuadrature& quad) {
  assert(v.groups == ctx.block && v.num_cells == ctx.num_cells());
  const int num_sets = static_cast<int>(ctx.set_blocks.size());

  // Each set applies its own source columns of S to the full block of rows.
  std::vector<MomentVector> partials(num_sets);
  for_each_set(ctx, [&](int s) {
    MomentVector part(ctx.block, ctx.num_cells());
    accumulate_scatter(ctx, v.slice(ctx.set_blocks[s]), ctx.set_blocks[s], part);
    partials[s] = std::move(part);
  });
  const MomentVector source = reduce_plus_scatter(ctx, partials);

  // Each set sweeps its own rows of the summed source.
  MomentVector result = v;
  for_each_set(ctx, [&](int s) {
    const GroupRange rows = ctx.set_blocks[s];
    if (rows.empty()) return;
    const MomentVector swept = transport_sweep(source.slice(rows), ctx.sigma_t_slice(rows),
                                               ctx.num_materials, quad, *ctx.mesh);
    for (int gl = 0; gl < rows.size(); ++gl) {
      double* dst = result.group_data(rows.begin - ctx.block.begin + gl);
      const double* z = swept.group_data(gl);
      for (int c = 0; c < ctx.num_cells(); ++c) dst[c] -= z[c];
    }
  });
  return result;
}

Vec apply_single_group(const OperatorContext& ctx, int g, const Vec& x) {
  const int ncells = ctx.num_cells();
  MomentVector v({g, g + 1}, ncells);
  v.values = x;
  MomentVector s({g, g + 1}, ncells);
  accumulate_scatter(ctx, v, {g, g + 1}, s);
  const MomentVector z = transport_sweep(s, ctx.sigma_t_slice({g, g + 1}),
                                         ctx.num_materials, ctx.quadrature, *ctx.mesh);
  Vec out = x;
  for (int c = 0; c < ncells; ++c) out[c] -= z.values[c];
  return out;
}

MomentVector solve_cascade(const OperatorContext& ctx, const SourceSpec& source,
                           const WithinGroupSolver& solve, int* total_inner) {
  const GroupRange cascade = ctx.partition.cascade;
  const int ncells = ctx.num_cells();
  MomentVector phi(cascade, ncells);

  for (int g = cascade.begin; g < cascade.end; ++g) {
    // Emission into group g: external source plus downscatter from groups
    // already solved. Within-group scattering stays on the operator side.
    MomentVector s({g, g + 1}, ncells);
    for (int c = 0; c < ncells; ++c) s.values[c] = source.value(g, c, ncells);
    if (g > cascade.begin)
      accumulate_scatter(ctx, phi.slice({cascade.begin, g}), {cascade.begin, g}, s);

    const MomentVector rhs = transport_sweep(s, ctx.sigma_t_slice({g, g + 1}),
                                             ctx.num_materials, ctx.quadrature, *ctx.mesh);
    auto op = [&](const Vec& x) { return apply_single_group(ctx, g, x); };
    auto [x, iters] = solve(op, rhs.values);
    if (total_inner) *total_inner += iters;
    for (int c = 0; c < ncells; ++c) phi.at(g - cascade.begin, c) = x[c];
  }
  return phi;
}

MomentVector build_fixed_rhs(const OperatorContext& ctx, const SourceSpec& source,
                             const MomentVector& phi_cascade) {
  const int ncells = ctx.num_cells();
  MomentVector s(ctx.block, ncells);
  for (int gl = 0; gl < ctx.block.size(); ++gl)
    for (int c = 0; c < ncells; ++c)
      s.at(gl, c) = source.value(ctx.block.begin + gl, c, ncells);
  if (!phi_cascade.groups.empty())
    accumulate_scatter(ctx, phi_cascade, phi_cascade.groups, s);
  return transport_sweep(s, ctx.sigma_t_slice(ctx.block), ctx.num_materials,
                         ctx.quadrature, *ctx.mesh);
}

}  // namespace snmge
