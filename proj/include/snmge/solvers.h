#pragma once

#include <optional>

#include "snmge/convergence.h"
#include "snmge/problem.h"
#include "snmge/transport_operator.h"

namespace snmge {

struct FixedSourceResult {
  MomentVector phi;  // every group, cascade and block assembled together
  ConvergenceLog log;
};

struct EigenResult {
  double k = 0.0;
  MomentVector phi;    // flux shape from the final outer iteration
  Vec fission_source;  // final fission source, normalized to unit 1-norm
  ConvergenceLog log;
  std::optional<double> dominance_ratio;
};

/// Single-group solver used inside the downscatter cascade and the
/// Gauss-Seidel outer loop: unrestarted GMRES on the within-group operator.
/// Throws NumericError if a within-group system fails to converge.
WithinGroupSolver make_gmres_within_group_solver(double tol, int max_iters);

/// Solves (I - T M S) phi = T M q for the given external source, dispatching
/// on config.kind. The GMRES path solves the downscatter cascade group by
/// group, then the coupled block with (optionally preconditioned) GMRES; the
/// Gauss-Seidel path iterates over all groups. Builds the energy hierarchy on
/// the context if preconditioning needs one and it is not there yet.
FixedSourceResult solve_fixed_source(OperatorContext& ctx,
                                     const SolverConfig& config,
                                     const SourceSpec& source);

/// Power iteration for the dominant eigenpair: each outer iteration solves a
/// fixed-source problem whose source is the current fission source
/// distributed by chi, then updates k from the 1-norm ratio of consecutive
/// fission sources. Convergence requires the k change, the L2 change, and
/// the max change of the normalized fission source to pass their tolerances
/// together.
EigenResult power_iteration(OperatorContext& ctx, const SolverConfig& config,
                            const EigenConfig& eigen);

/// Geometric-mean convergence-rate estimate from the trailing L2 fission
/// source deltas (up to five): (d_last / d_first)^(1/(m-1)), clamped to
/// [0, 1). Needs at least three outer iterations to say anything.
std::optional<double> dominance_ratio_estimate(const std::vector<OuterRecord>& outers);

}  // namespace snmge
