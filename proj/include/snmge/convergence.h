#pragma once

#include <string>
#include <vector>

#include "snmge/types.h"

namespace snmge {

enum class SolveStatus { converged, max_iters, diverged };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

/// One fixed-source iteration row: relative residual after the iteration and
/// the wall seconds it took.
struct IterationRecord {
  int iter;
  double res_norm;
  double seconds;
};

/// One eigenvalue outer-iteration row.
struct OuterRecord {
  int outer;
  double k;
  double delta_k;
  double l2_fission;
  double linf_fission;
  int krylov_iters;
  double seconds;
};

struct ConvergenceLog {
  std::vector<IterationRecord> iterations;  // fixed-source path
  std::vector<OuterRecord> outers;          // eigenvalue path
  SolveStatus status = SolveStatus::converged;
  int total_iters = 0;      // inner Krylov iterations, all phases
  double final_residual = 0.0;
  double k_effective = 0.0;  // eigenvalue path only
};

}  // namespace snmge
