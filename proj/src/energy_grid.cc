#include "snmge/energy_grid.h"

#include <cmath>
#include <iostream>

namespace snmge {

int grid_depth(int num_groups) {
  int depth = 1;
  while (num_groups > 1) {
    num_groups = (num_groups + 1) / 2;
    ++depth;
  }
  return depth;
}

int auto_grid_depth(int block_size, int num_sets) {
  const int m = block_size / num_sets;  // smallest set's group count
  if (m < 1) return 1;
  const int formula = static_cast<int>(std::floor(std::log2(static_cast<double>(m)))) + 2;
  return std::min(formula, grid_depth(m));  // the chain bound bites at powers of two
}

int resolve_grid_depth(int block_size, int num_sets, std::optional<int> requested) {
  const int achievable = grid_depth(std::max(1, block_size / num_sets));
  if (!requested) return auto_grid_depth(block_size, num_sets);
  int d = *requested;
  if (d < 1) d = 1;
  if (d > achievable) {
    std::cerr << "warning: requested grid depth " << *requested
              << " exceeds the achievable chain length " << achievable << "; using "
              << achievable << "\n";
    d = achievable;
  }
  return d;
}

Vec restrict_vector(const Vec& fine) {
  const int n = static_cast<int>(fine.size());
  const int m = (n + 1) / 2;
  Vec coarse(m);
  for (int g = 0; g < n / 2; ++g) coarse[g] = 0.5 * (fine[2 * g] + fine[2 * g + 1]);
  if (n % 2 == 1) coarse[m - 1] = fine[n - 1];
  return coarse;
}

Vec prolong_vector(const Vec& coarse, int num_fine) {
  const int m = static_cast<int>(coarse.size());
  Vec fine(num_fine, 0.0);
  for (int g = 0; g < m; ++g)
    if (2 * g < num_fine) fine[2 * g] = coarse[g];
  for (int g = 0; g + 1 < m; ++g)
    if (2 * g + 1 < num_fine) fine[2 * g + 1] = 0.5 * (coarse[g] + coarse[g + 1]);
  if (num_fine % 2 == 0) fine[num_fine - 1] = coarse[m - 1];
  return fine;
}

MaterialCrossSections restrict_material(const MaterialCrossSections& fine) {
  const int n = fine.num_groups();
  const int m = (n + 1) / 2;
  const bool odd = (n % 2 == 1);

  MaterialCrossSections coarse;
  coarse.sigma_t = restrict_vector(fine.sigma_t);
  coarse.nu_sigma_f = restrict_vector(fine.nu_sigma_f);

  if (!fine.chi.empty()) {
    coarse.chi.assign(m, 0.0);
    for (int g = 0; g < n / 2; ++g) coarse.chi[g] = fine.chi[2 * g] + fine.chi[2 * g + 1];
    if (odd) coarse.chi[m - 1] = fine.chi[n - 1];
  }

  coarse.sigma_s.assign(m, Vec(m, 0.0));
  for (int g = 0; g < m; ++g) {
    for (int gp = 0; gp < m; ++gp) {
      const bool edge_row = odd && g == m - 1;
      const bool edge_col = odd && gp == m - 1;
      if (edge_row && edge_col) {
        coarse.sigma_s[g][gp] = fine.sigma_s[n - 1][n - 1];
      } else if (edge_row) {
        coarse.sigma_s[g][gp] =
            0.5 * (fine.sigma_s[n - 1][2 * gp] + fine.sigma_s[n - 1][2 * gp + 1]);
      } else if (edge_col) {
        coarse.sigma_s[g][gp] =
            0.5 * (fine.sigma_s[2 * g][n - 1] + fine.sigma_s[2 * g + 1][n - 1]);
      } else {
        coarse.sigma_s[g][gp] =
            0.25 * (fine.sigma_s[2 * g][2 * gp] + fine.sigma_s[2 * g + 1][2 * gp] +
                    fine.sigma_s[2 * g][2 * gp + 1] + fine.sigma_s[2 * g + 1][2 * gp + 1]);
      }
    }
  }
  return coarse;
}

namespace {

Vec sweep_table(const std::vector<MaterialCrossSections>& xs) {
  const int nmat = static_cast<int>(xs.size());
  const int ng = xs.empty() ? 0 : xs[0].num_groups();
  Vec table(static_cast<size_t>(ng) * nmat);
  for (int g = 0; g < ng; ++g)
    for (int m = 0; m < nmat; ++m)
      table[static_cast<size_t>(g) * nmat + m] = xs[m].sigma_t[g];
  return table;
}

// The set's slice of one material with scattering truncated to within-set
// columns; cross-set and cascade coupling is excluded inside the hierarchy.
MaterialCrossSections slice_material(const MaterialCrossSections& m, GroupRange r) {
  MaterialCrossSections out;
  const int n = r.size();
  out.sigma_t.resize(n);
  if (!m.nu_sigma_f.empty()) out.nu_sigma_f.resize(n);
  if (!m.chi.empty()) out.chi.resize(n);
  out.sigma_s.assign(n, Vec(n, 0.0));
  for (int g = 0; g < n; ++g) {
    out.sigma_t[g] = m.sigma_t[r.begin + g];
    if (!m.nu_sigma_f.empty()) out.nu_sigma_f[g] = m.nu_sigma_f[r.begin + g];
    if (!m.chi.empty()) out.chi[g] = m.chi[r.begin + g];
    for (int gp = 0; gp < n; ++gp)
      out.sigma_s[g][gp] = m.sigma_s[r.begin + g][r.begin + gp];
  }
  return out;
}

}  // namespace

EnergyHierarchy build_hierarchy(const std::vector<MaterialCrossSections>& materials,
                                const std::vector<GroupRange>& set_blocks, int depth) {
  EnergyHierarchy h;
  h.depth = depth;
  h.sets.reserve(set_blocks.size());
  for (const GroupRange& r : set_blocks) {
    SetHierarchy sh;
    sh.fine_groups = r;
    EnergyLevel level;
    level.num_groups = r.size();
    for (const auto& m : materials) level.xs.push_back(slice_material(m, r));
    level.sigma_t_table = sweep_table(level.xs);
    sh.levels.push_back(std::move(level));
    for (int l = 1; l < depth; ++l) {
      EnergyLevel next;
      for (const auto& m : sh.levels.back().xs) next.xs.push_back(restrict_material(m));
      next.num_groups = next.xs.empty() ? 0 : next.xs[0].num_groups();
      next.sigma_t_table = sweep_table(next.xs);
      sh.levels.push_back(std::move(next));
    }
    h.sets.push_back(std::move(sh));
  }
  return h;
}

}  // namespace snmge
