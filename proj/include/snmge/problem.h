#pragma once

#include <optional>
#include <string>
#include <vector>

#include "snmge/cross_sections.h"
#include "snmge/mesh.h"
#include "snmge/types.h"

namespace snmge {

/// Isotropic source density per group (uniform over the mesh unless a
/// per-cell override is installed programmatically).
struct SourceSpec {
  Vec group_strength;           // size num_groups
  Vec per_cell;                 // optional, size num_groups*num_cells, group-major

  bool uniform() const { return per_cell.empty(); }
  double value(int g, int cell, int num_cells) const {
    return uniform() ? group_strength[g]
                     : per_cell[static_cast<size_t>(g) * num_cells + cell];
  }
};

enum class BlockMode { all_groups, upscatter_only };
enum class SolverKind { gmres, gauss_seidel };

struct SolverConfig {
  double tol = 1e-6;           // relative residual (gmres) / max-norm change (gs)
  int max_iters = 1000;
  int restart = 0;             // 0 = no restart (full subspace)
  BlockMode block_mode = BlockMode::upscatter_only;
  int num_sets = 1;
  SolverKind kind = SolverKind::gmres;

  // Multigrid-in-energy preconditioner controls.
  bool precond_enabled = false;
  double weight = 1.0;              // Richardson relaxation weight
  int relax = 2;                    // relaxations per level per visit
  int vcycles = 2;                  // V-cycles per preconditioner application
  std::optional<int> depth;         // grid levels; empty = automatic
  std::optional<int> pc_order;      // reduced quadrature order; empty = same
};

struct EigenConfig {
  bool enabled = false;
  double k_tol = 1e-5;
  double k0 = 1.0;
  double l2_tol = 1.0;
  double linf_tol = 0.01;
  int max_outer = 500;
};

struct ProblemSpec {
  CartesianMesh mesh;
  std::vector<MaterialCrossSections> materials;  // indexed by mesh.material_id
  int num_groups = 0;
  int quadrature_order = 2;
  SourceSpec source;
  SolverConfig solver;
  EigenConfig eigen;
};

/// Parse error carrying the 1-based input line that caused it.
struct ParseError : ConfigError {
  int line;
  ParseError(int line_, const std::string& what)
      : ConfigError("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

/// Parses the sectioned problem-file format:
///   [mesh] nx ny nz dx dy dz
///   [bc] xlo xhi ylo yhi zlo zhi                (vacuum | reflect)
///   [quadrature] N
///   [material ID]  followed by "total g v" | "scatter g gprime v" |
///                  "nufission g v" | "chi g v" lines
///   [cells] fill ID   (or "cell i j k ID" lines covering every cell)
///   [source] group g v
///   [solver] tol= max_iters= block=all|upscatter sets= restart=
///   [mge] enabled= weight= relax= vcycles= depth=auto|<int> sn=same|<int>
///   [eigen] enabled= ktol= k0= l2tol= linftol= max_outer=
/// Sections may appear in any order; '#' starts a comment. The group count is
/// inferred from the largest group index present. Scatter rows name the
/// destination group first, matching the storage convention.
ProblemSpec parse_problem_file(const std::string& text);

/// Consistency checks that do not depend on how the ProblemSpec was produced:
/// material validity, cell coverage, group bounds, fission data when an
/// eigenvalue solve is requested, and the vacuum-only rule for a reduced
/// preconditioner quadrature. Throws ConfigError on the first failure.
void validate_problem(const ProblemSpec& spec);

/// Options for emitting a synthetic fixture as problem-file text.
struct FixtureOptions {
  int num_groups = 10;
  int num_upscatter = 5;
  int n = 3;                    // cells per axis
  double width = 1.0;           // cell width per axis (cm)
  int quadrature_order = 4;
  bool reflecting = false;      // all six faces reflect instead of vacuum
  bool fission = false;         // use the fissioning fixture and enable [eigen]
  int source_groups = 3;        // uniform unit source in the first few groups
  std::string solver_line;      // extra key=value text appended to [solver]
  std::string mge_line;         // extra key=value text appended to [mge]
};

/// Problem-file text for the synthetic fixture; parse_problem_file round-trips it.
std::string fixture_problem_text(const FixtureOptions& opt);

}  // namespace snmge
