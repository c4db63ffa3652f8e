#include "snmge/sweep.h"

#include <cmath>
#include <numbers>
#include <string>

namespace snmge {

double step_cell_kernel(double q_angular, double sigma_t,
                        const std::array<double, 3>& coupling,
                        const std::array<double, 3>& incoming) {
  const double denom = sigma_t + coupling[0] + coupling[1] + coupling[2];
  return (q_angular + coupling[0] * incoming[0] + coupling[1] * incoming[1] +
          coupling[2] * incoming[2]) /
         denom;
}

namespace {

constexpr int kMaxReflectPasses = 50;
constexpr double kReflectTol = 1e-10;

inline int face_cells(const CartesianMesh& mesh, int axis) {
  switch (axis) {
    case 0: return mesh.ny * mesh.nz;
    case 1: return mesh.nx * mesh.nz;
    default: return mesh.nx * mesh.ny;
  }
}

}  // namespace

MomentVector transport_sweep(const MomentVector& source, const Vec& sigma_t_table,
                             int num_materials, const AngularQuadrature& quad,
                             const CartesianMesh& mesh) {
  const int nx = mesh.nx, ny = mesh.ny, nz = mesh.nz;
  const int ncells = mesh.num_cells();
  const int n_ord = quad.size();
  const double inv_4pi = 1.0 / (4.0 * std::numbers::pi);

  MomentVector phi(source.groups, ncells);

  // Scratch incoming-flux planes, reused across ordinates.
  Vec bufx(static_cast<size_t>(ny) * nz);
  Vec bufy(static_cast<size_t>(nx) * nz);
  Vec bufz(static_cast<size_t>(nx) * ny);

  for (int gl = 0; gl < source.groups.size(); ++gl) {
    const double* q_g = source.group_data(gl);
    double* phi_g = phi.group_data(gl);

    BoundaryFluxes stored;
    for (int f = 0; f < 6; ++f)
      if (mesh.bc[f] == BoundaryKind::reflect)
        stored.face[f].assign(static_cast<size_t>(n_ord) * face_cells(mesh, f / 2), 0.0);

    double max_change = 0.0;
    int pass = 0;
    int worst_face = -1;
    while (true) {
      ++pass;
      max_change = 0.0;
      worst_face = -1;
      for (int c = 0; c < ncells; ++c) phi_g[c] = 0.0;

      for (int m = 0; m < n_ord; ++m) {
        const Ordinate& ord = quad.ordinates[m];
        const int si = ord.mu > 0 ? 1 : -1;
        const int sj = ord.eta > 0 ? 1 : -1;
        const int sk = ord.xi > 0 ? 1 : -1;
        const int i0 = si > 0 ? 0 : nx - 1;
        const int j0 = sj > 0 ? 0 : ny - 1;
        const int k0 = sk > 0 ? 0 : nz - 1;
        const std::array<double, 3> coupling = {std::fabs(ord.mu) / mesh.dx,
                                                std::fabs(ord.eta) / mesh.dy,
                                                std::fabs(ord.xi) / mesh.dz};

        // Incoming planes: zero from vacuum, mirrored outgoing from reflection.
        const int entry_x = si > 0 ? xlo : xhi;
        const int entry_y = sj > 0 ? ylo : yhi;
        const int entry_z = sk > 0 ? zlo : zhi;
        if (mesh.bc[entry_x] == BoundaryKind::reflect) {
          const int mm = quad.mirror[0][m];
          for (size_t p = 0; p < bufx.size(); ++p)
            bufx[p] = stored.face[entry_x][static_cast<size_t>(mm) * bufx.size() + p];
        } else {
          std::fill(bufx.begin(), bufx.end(), 0.0);
        }
        if (mesh.bc[entry_y] == BoundaryKind::reflect) {
          const int mm = quad.mirror[1][m];
          for (size_t p = 0; p < bufy.size(); ++p)
            bufy[p] = stored.face[entry_y][static_cast<size_t>(mm) * bufy.size() + p];
        } else {
          std::fill(bufy.begin(), bufy.end(), 0.0);
        }
        if (mesh.bc[entry_z] == BoundaryKind::reflect) {
          const int mm = quad.mirror[2][m];
          for (size_t p = 0; p < bufz.size(); ++p)
            bufz[p] = stored.face[entry_z][static_cast<size_t>(mm) * bufz.size() + p];
        } else {
          std::fill(bufz.begin(), bufz.end(), 0.0);
        }

        for (int kk = 0, k = k0; kk < nz; ++kk, k += sk) {
          for (int jj = 0, j = j0; jj < ny; ++jj, j += sj) {
            for (int ii = 0, i = i0; ii < nx; ++ii, i += si) {
              const int cell = mesh.cell_index(i, j, k);
              const double st =
                  sigma_t_table[static_cast<size_t>(gl) * num_materials +
                                mesh.material_id[cell]];
              const double psi = step_cell_kernel(
                  q_g[cell] * inv_4pi, st, coupling,
                  {bufx[j + ny * k], bufy[i + nx * k], bufz[i + nx * j]});
              bufx[j + ny * k] = psi;
              bufy[i + nx * k] = psi;
              bufz[i + nx * j] = psi;
              phi_g[cell] += ord.weight * psi;
            }
          }
        }

        // Park outgoing boundary fluxes on reflecting exit faces, tracking the
        // largest update for the fixed-point test.
        auto store_exit = [&](int face, const Vec& buf) {
          if (mesh.bc[face] != BoundaryKind::reflect) return;
          Vec& dst = stored.face[face];
          const size_t base = static_cast<size_t>(m) * buf.size();
          for (size_t p = 0; p < buf.size(); ++p) {
            const double change = std::fabs(buf[p] - dst[base + p]);
            if (change > max_change) {
              max_change = change;
              worst_face = face;
            }
            dst[base + p] = buf[p];
          }
        };
        store_exit(si > 0 ? xhi : xlo, bufx);
        store_exit(sj > 0 ? yhi : ylo, bufy);
        store_exit(sk > 0 ? zhi : zlo, bufz);
      }

      if (!mesh.any_reflecting()) break;
      double max_phi = 0.0;
      for (int c = 0; c < ncells; ++c) max_phi = std::max(max_phi, std::fabs(phi_g[c]));
      if (max_change <= kReflectTol * (1.0 + max_phi)) break;
      if (pass >= kMaxReflectPasses)
        throw NumericError("reflecting-boundary sweep did not converge in " +
                           std::to_string(kMaxReflectPasses) + " passes (face " +
                           face_name(worst_face) + ", group " +
                           std::to_string(source.groups.begin + gl) + ")");
    }
  }
  return phi;
}

}  // namespace snmge
