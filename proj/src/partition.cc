#include "snmge/partition.h"

namespace snmge {

GroupPartition partition_upscatter(const std::vector<MaterialCrossSections>& materials) {
  int num_groups = 0;
  for (const auto& m : materials) num_groups = std::max(num_groups, m.num_groups());

  int block_start = num_groups;  // no upscatter anywhere: empty block
  for (const auto& m : materials) {
    for (int g = 0; g < m.num_groups() && g < block_start; ++g) {
      for (int gp = g + 1; gp < m.num_groups(); ++gp) {
        if (m.sigma_s[g][gp] != 0.0) {
          block_start = g;
          break;
        }
      }
    }
  }
  return {{0, block_start}, {block_start, num_groups}};
}

std::vector<GroupRange> assign_groups_to_sets(GroupRange block, int num_sets) {
  if (num_sets < 1) throw ConfigError("number of energy sets must be at least 1");
  if (num_sets == 1) return {block};
  if (num_sets > block.size())
    throw ConfigError("number of energy sets (" + std::to_string(num_sets) +
                      ") exceeds the block size (" + std::to_string(block.size()) + ")");

  std::vector<GroupRange> sets;
  sets.reserve(num_sets);
  const int base = block.size() / num_sets;
  const int extra = block.size() % num_sets;  // first `extra` sets get one more
  int begin = block.begin;
  for (int s = 0; s < num_sets; ++s) {
    const int len = base + (s < extra ? 1 : 0);
    sets.push_back({begin, begin + len});
    begin += len;
  }
  return sets;
}

}  // namespace snmge
