#pragma once

#include <array>

#include "snmge/mesh.h"
#include "snmge/moment_vector.h"
#include "snmge/quadrature.h"

namespace snmge {

/// Stored boundary angular fluxes for one group: for each face, the outgoing
/// flux of every ordinate at every boundary cell of that face. Reflection
/// feeds an incoming ordinate from the stored outgoing flux of its mirror.
struct BoundaryFluxes {
  std::array<Vec, 6> face;  // [face][ordinate * cells_on_face + face_cell]
};

/// Upwind (step) cell update: returns the cell flux given the angular source
/// density, the per-axis couplings c_axis/delta_axis, and the incoming face
/// fluxes. The outgoing flux on each downstream face equals the cell flux.
double step_cell_kernel(double q_angular, double sigma_t,
                        const std::array<double, 3>& coupling,
                        const std::array<double, 3>& incoming);

/// One transport solve L psi = M source per group: sweeps every ordinate from
/// its upwind corner and accumulates phi = sum_m w_m psi_m. `source` is the
/// moment-space emission density; the isotropic angular source is source/4pi.
/// sigma_t_table holds sigma_t for the swept groups, laid out
/// [g_local * num_materials + material]. With reflecting faces the sweep is
/// repeated until the stored boundary fluxes change by no more than
/// 1e-10 * (1 + max|phi|), up to 50 passes.
MomentVector transport_sweep(const MomentVector& source, const Vec& sigma_t_table,
                             int num_materials, const AngularQuadrature& quad,
                             const CartesianMesh& mesh);

}  // namespace snmge
