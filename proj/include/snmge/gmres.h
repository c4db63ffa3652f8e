#pragma once

#include <functional>
#include <vector>

#include "snmge/convergence.h"
#include "snmge/types.h"

namespace snmge {

using LinearOp = std::function<Vec(const Vec&)>;

struct GmresOptions {
  double tol = 1e-6;   // on ||b - A x||_2 / ||b||_2
  int max_iters = 1000;
  int restart = 0;     // inner subspace size; 0 = unrestarted
};

struct GmresResult {
  Vec x;
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;               // inner iterations summed over restarts
  std::vector<double> res_history;  // relative residual after each iteration
  std::vector<double> iter_seconds; // wall time per iteration, same length
  double final_residual = 0.0;
};

/// Right-preconditioned GMRES on A x = b: the Krylov space is built for
/// A G^{-1}, the small least-squares problem is solved for y, and the return
/// value is x = G^{-1} V y. With right preconditioning the recurrence
/// residual is the true residual of the original system, so res_history and
/// the convergence test need no extra operator applications. Pass a null
/// precond for plain GMRES.
///
/// Orthogonalization is modified Gram-Schmidt with one reorthogonalization
/// pass whenever the remaining projection onto the basis exceeds 1e-8
/// relative to the vector's entry norm. A zero right-hand side returns x = 0
/// immediately. Arnoldi breakdown ends the solve: converged if the explicit
/// residual passes tol, diverged otherwise.
GmresResult gmres_solve(const LinearOp& apply_a, const Vec& b,
                        const GmresOptions& options,
                        const LinearOp& precond = nullptr);

}  // namespace snmge
