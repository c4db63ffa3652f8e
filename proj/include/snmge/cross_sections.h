#pragma once

#include <string>
#include <vector>

#include "snmge/types.h"

namespace snmge {

/// Multigroup cross sections for one material.
///
/// sigma_s is stored destination-by-source: sigma_s[g][gp] is the macroscopic
/// cross section for scattering out of group gp into group g (1/cm). Entries
/// above the diagonal (g < gp) therefore represent upscattering.
struct MaterialCrossSections {
  Vec sigma_t;                  // per group (1/cm)
  std::vector<Vec> sigma_s;     // [destination][source] (1/cm)
  Vec nu_sigma_f;               // per group (1/cm), zero when non-fissioning
  Vec chi;                      // fission spectrum, sums to 1 if fissioning

  int num_groups() const { return static_cast<int>(sigma_t.size()); }
  bool fissioning() const;

  /// Sum of column gp of sigma_s: total scattering out of group gp.
  double scatter_column_sum(int gp) const;
};

struct Violation {
  int group = -1;        // offending group/column, -1 when not group-specific
  std::string message;
};

/// Checks non-negativity, shape consistency, scattering ratio c <= 1 per
/// column, and the chi normalization rule. Empty result means valid.
std::vector<Violation> validate_material(const MaterialCrossSections& m);

/// Deterministic synthetic material with a downscatter band and an upscatter
/// band in the last num_upscatter source groups:
///   sigma_t[g]      = 1 + 0.05 g
///   sigma_s[g][g]   = 0.45 sigma_t[g]
///   sigma_s[g+1][g] = 0.20 sigma_t[g]
///   sigma_s[g-1][g] = 0.05 sigma_t[g]   for g >= num_groups - num_upscatter
/// No fission. Scattering ratio is at most 0.70 in every column.
MaterialCrossSections synth_upscatter_fixture(int num_groups, int num_upscatter);

/// Upscatter fixture plus fission data: nu_sigma_f[g] = 0.3 sigma_t[g] and a
/// fast-weighted chi (0.5/0.3/0.2 in the first three groups).
MaterialCrossSections synth_fission_fixture(int num_groups, int num_upscatter);

}  // namespace snmge
