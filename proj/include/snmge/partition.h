#pragma once

#include <vector>

#include "snmge/cross_sections.h"
#include "snmge/types.h"

namespace snmge {

/// Split of the energy groups into a downscatter-only cascade prefix and a
/// contiguous coupled block suffix.
struct GroupPartition {
  GroupRange cascade;  // groups solvable once, in order, before the block
  GroupRange block;    // groups requiring an iterative (or Krylov) solve
};

/// The block starts at the smallest group g whose equation couples to a
/// lower-energy group's flux, i.e. the first row of any material's sigma_s
/// with a nonzero entry above the diagonal (sigma_s[g][gp] != 0, gp > g).
/// Groups before that point never see block fluxes, so solving them once in
/// order and then solving the block reproduces the coupled solution exactly.
GroupPartition partition_upscatter(const std::vector<MaterialCrossSections>& materials);

/// Contiguous assignment of the block's groups to num_sets energy sets.
/// Set sizes differ by at most one; lower-indexed sets take the larger sizes.
/// Returned ranges use global group indices and tile the block exactly.
std::vector<GroupRange> assign_groups_to_sets(GroupRange block, int num_sets);

}  // namespace snmge
