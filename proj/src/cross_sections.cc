#include "snmge/cross_sections.h"

#include <cmath>

namespace snmge {

bool MaterialCrossSections::fissioning() const {
  for (double v : nu_sigma_f)
    if (v > 0.0) return true;
  return false;
}

double MaterialCrossSections::scatter_column_sum(int gp) const {
  double sum = 0.0;
  for (const auto& row : sigma_s) sum += row[gp];
  return sum;
}

std::vector<Violation> validate_material(const MaterialCrossSections& m) {
  std::vector<Violation> out;
  const int g_count = m.num_groups();
  auto shape_ok = [&](size_t n) { return static_cast<int>(n) == g_count; };

  if (!shape_ok(m.sigma_s.size())) {
    out.push_back({-1, "sigma_s row count does not match group count"});
    return out;
  }
  for (int g = 0; g < g_count; ++g) {
    if (!shape_ok(m.sigma_s[g].size())) {
      out.push_back({g, "sigma_s row " + std::to_string(g) + " has wrong length"});
      return out;
    }
  }
  if (!m.nu_sigma_f.empty() && !shape_ok(m.nu_sigma_f.size()))
    out.push_back({-1, "nu_sigma_f length does not match group count"});
  if (!m.chi.empty() && !shape_ok(m.chi.size()))
    out.push_back({-1, "chi length does not match group count"});

  for (int g = 0; g < g_count; ++g) {
    if (!(m.sigma_t[g] >= 0.0) || !std::isfinite(m.sigma_t[g]))
      out.push_back({g, "sigma_t negative or non-finite in group " + std::to_string(g)});
    for (int gp = 0; gp < g_count; ++gp)
      if (!(m.sigma_s[g][gp] >= 0.0) || !std::isfinite(m.sigma_s[g][gp]))
        out.push_back({gp, "sigma_s negative or non-finite at (" + std::to_string(g) +
                               "," + std::to_string(gp) + ")"});
    for (double v : m.nu_sigma_f)
      if (!(v >= 0.0) || !std::isfinite(v)) {
        out.push_back({-1, "nu_sigma_f negative or non-finite"});
        break;
      }
  }

  // Scattering ratio per source column: c = sum_g sigma_s[g][gp] / sigma_t[gp] <= 1.
  for (int gp = 0; gp < g_count; ++gp) {
    const double col = m.scatter_column_sum(gp);
    if (col > m.sigma_t[gp] * (1.0 + 1e-12))
      out.push_back({gp, "scattering exceeds total in group " + std::to_string(gp) +
                             " (c > 1 in column " + std::to_string(gp) + ")"});
  }

  // chi must be a normalized spectrum iff the material fissions.
  double chi_sum = 0.0;
  for (double v : m.chi) {
    chi_sum += v;
    if (!(v >= 0.0) || !std::isfinite(v)) {
      out.push_back({-1, "chi negative or non-finite"});
      break;
    }
  }
  if (m.fissioning()) {
    if (std::fabs(chi_sum - 1.0) > 1e-12)
      out.push_back({-1, "chi must sum to 1"});
  } else if (chi_sum != 0.0) {
    out.push_back({-1, "chi nonzero in a material without fission"});
  }
  return out;
}

MaterialCrossSections synth_upscatter_fixture(int num_groups, int num_upscatter) {
  MaterialCrossSections m;
  m.sigma_t.resize(num_groups);
  m.sigma_s.assign(num_groups, Vec(num_groups, 0.0));
  m.nu_sigma_f.assign(num_groups, 0.0);
  m.chi.assign(num_groups, 0.0);
  for (int g = 0; g < num_groups; ++g) {
    m.sigma_t[g] = 1.0 + 0.05 * g;
    m.sigma_s[g][g] = 0.45 * m.sigma_t[g];
    if (g + 1 < num_groups) m.sigma_s[g + 1][g] = 0.20 * m.sigma_t[g];
    if (g >= num_groups - num_upscatter && g > 0)
      m.sigma_s[g - 1][g] = 0.05 * m.sigma_t[g];
  }
  return m;
}

MaterialCrossSections synth_fission_fixture(int num_groups, int num_upscatter) {
  MaterialCrossSections m = synth_upscatter_fixture(num_groups, num_upscatter);
  for (int g = 0; g < num_groups; ++g) m.nu_sigma_f[g] = 0.3 * m.sigma_t[g];
  if (num_groups >= 3) {
    m.chi[0] = 0.5;
    m.chi[1] = 0.3;
    m.chi[2] = 0.2;
  } else if (num_groups == 2) {
    m.chi[0] = 0.6;
    m.chi[1] = 0.4;
  } else {
    m.chi[0] = 1.0;
  }
  return m;
}

}  // namespace snmge
