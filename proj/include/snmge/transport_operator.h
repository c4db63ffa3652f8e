#pragma once

#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "snmge/mesh.h"
#include "snmge/moment_vector.h"
#include "snmge/partition.h"
#include "snmge/problem.h"
#include "snmge/quadrature.h"

namespace snmge {

struct EnergyHierarchy;  // built by the preconditioner layer

/// Everything the matrix-free operator needs: geometry, level-0 cross
/// sections, quadratures, the cascade/block split, and the energy-set layout.
/// The Krylov block is the upscatter block or all groups, per BlockMode.
struct OperatorContext {
  const CartesianMesh* mesh = nullptr;
  const std::vector<MaterialCrossSections>* materials = nullptr;
  AngularQuadrature quadrature;
  AngularQuadrature pc_quadrature;  // same set unless a reduced order was chosen
  GroupPartition partition;
  GroupRange block;
  std::vector<GroupRange> set_blocks;
  int num_groups = 0;
  int num_materials = 0;
  Vec sigma_t_table;  // all groups, [g * num_materials + material]
  bool run_sets_concurrently = true;
  std::shared_ptr<const EnergyHierarchy> hierarchy;  // set when preconditioning

  int num_cells() const { return mesh->num_cells(); }
  /// sigma_t sweep table restricted to a global group range.
  Vec sigma_t_slice(GroupRange r) const;
};

OperatorContext build_operator_context(const ProblemSpec& spec);

/// Moment-space scattering product into the requested destination rows:
/// out[g][c] = sum over source groups gp of v of sigma_s[g][gp](cell) v[gp][c].
/// The 1/4pi moment-to-angle factor is applied later, inside the sweep.
MomentVector scatter_matvec(const OperatorContext& ctx, const MomentVector& v,
                            GroupRange rows);

/// Deterministic collective for the energy sets: sums the per-set partial
/// scattering sources over the full block in ascending set order. Each set
/// then reads back its own slice of the result.
MomentVector reduce_plus_scatter(const OperatorContext& ctx,
                                 const std::vector<MomentVector>& partials);

/// Matrix-free application of the block operator v - T M S v at the fine
/// level. Cross-set coupling is included: set workers exchange scattering
/// sources through reduce_plus_scatter, then sweep their own group rows.
MomentVector apply_operator(const OperatorContext& ctx, const MomentVector& v,
                            const AngularQuadrature& quad);
inline MomentVector apply_operator(const OperatorContext& ctx, const MomentVector& v) {
  return apply_operator(ctx, v, ctx.quadrature);
}

/// Single-group operator x - T M sigma_s[g][g] x for within-group solves.
Vec apply_single_group(const OperatorContext& ctx, int g, const Vec& x);

/// Solves a single-group linear system given its operator and right-hand
/// side; returns the solution and the iteration count it spent.
using WithinGroupSolver =
    std::function<std::pair<Vec, int>(const std::function<Vec(const Vec&)>&, const Vec&)>;

/// Solves the downscatter-only prefix one group at a time in ascending order.
/// Group g sees the external source plus downscattering from already-solved
/// cascade groups; nothing in the cascade depends on block fluxes.
/// Returns the cascade fluxes and accumulates within-group iterations.
MomentVector solve_cascade(const OperatorContext& ctx, const SourceSpec& source,
                           const WithinGroupSolver& solve, int* total_inner = nullptr);

/// Right-hand side of the block system:
/// b = T M (S_block<-cascade phi_cascade + q_block).
MomentVector build_fixed_rhs(const OperatorContext& ctx, const SourceSpec& source,
                             const MomentVector& phi_cascade);

}  // namespace snmge
