#pragma once

#include "snmge/moment_vector.h"
#include "snmge/problem.h"
#include "snmge/transport_operator.h"

namespace snmge {

// Multigrid-in-energy preconditioner for the Krylov block rows.  Each group
// set is treated independently on a hierarchy of energy grids; within a set
// the smoother is weighted Richardson on the set-local operator (scattering
// truncated to within-set columns, sweeps on the preconditioner quadrature).
//
// apply() is linear in its input: the V-cycle starts from a zero guess and
// every ingredient (relaxation, grid transfer, coarse solve) is linear, so
// the composition with right-preconditioned GMRES stays a fixed operator.
class MgePreconditioner {
 public:
  // Per-set execution order; results are bitwise identical across schedules
  // because the sets touch disjoint group slices.
  enum class SetSchedule { concurrent, sequential, reversed };

  MgePreconditioner(const OperatorContext* ctx, const SolverConfig& config);

  // u is defined on ctx->block rows; returns G^{-1} u on the same rows.
  MomentVector apply(const MomentVector& u,
                     SetSchedule schedule = SetSchedule::concurrent) const;

  int depth() const { return depth_; }

 private:
  const OperatorContext* ctx_;
  double omega_;
  int relax_;
  int vcycles_;
  int depth_;
};

// Resolves the grid depth for the context's set layout and builds the energy
// hierarchy the preconditioner walks.  Stored on the context so repeated
// apply() calls share one immutable copy.
void attach_hierarchy(OperatorContext& ctx, const SolverConfig& config);

}  // namespace snmge
