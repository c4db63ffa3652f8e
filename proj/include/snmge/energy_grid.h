#pragma once

#include <optional>
#include <vector>

#include "snmge/cross_sections.h"
#include "snmge/types.h"

namespace snmge {

/// Number of grids in the halving chain G, ceil(G/2), ..., 1 (1 for G = 1).
/// Equals floor(log2(G-1)) + 2 for G >= 2.
int grid_depth(int num_groups);

/// Automatic depth for a multiset hierarchy: the formula floor(log2(m)) + 2
/// evaluated at the smallest per-set group count m = floor(block/num_sets),
/// clamped to the chain length m actually admits. Every set shares the result.
int auto_grid_depth(int block_size, int num_sets);

/// Resolved depth for a hierarchy: the automatic value, or the requested
/// override clamped to [1, achievable]; a clamp emits a warning on stderr.
int resolve_grid_depth(int block_size, int num_sets, std::optional<int> requested);

/// Pairwise-average coarsening of a group vector; an odd trailing entry is
/// copied. ceil(N/2) coarse values from N fine values.
Vec restrict_vector(const Vec& fine);

/// Transpose-style refinement to num_fine groups: even fine entries copy the
/// parent, odd entries average neighbouring parents, and when num_fine is
/// even the final fine entry copies the last coarse value.
Vec prolong_vector(const Vec& coarse, int num_fine);

/// Collapses all cross sections one level: sigma_t and nu_sigma_f restrict
/// like vectors, chi restricts by pairwise sum (preserving its normalization),
/// and sigma_s restricts by 2x2 block averaging with half-weight edge rows
/// and columns and a direct corner copy when the group count is odd.
MaterialCrossSections restrict_material(const MaterialCrossSections& fine);

struct EnergyLevel {
  int num_groups = 0;
  std::vector<MaterialCrossSections> xs;  // per material, this level's data
  Vec sigma_t_table;                      // sweep table [g_local * nmat + mat]
};

/// One energy set's grid stack. Level 0 is the set's slice of the input data
/// with scattering truncated to within-set columns; deeper levels come from
/// repeated restriction. Built once; never mutated by solves.
struct SetHierarchy {
  GroupRange fine_groups;
  std::vector<EnergyLevel> levels;
};

struct EnergyHierarchy {
  int depth = 1;
  std::vector<SetHierarchy> sets;
};

EnergyHierarchy build_hierarchy(const std::vector<MaterialCrossSections>& materials,
                                const std::vector<GroupRange>& set_blocks, int depth);

}  // namespace snmge
