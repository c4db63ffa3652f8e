#pragma once

#include <array>
#include <vector>

namespace snmge {

enum class BoundaryKind { vacuum, reflect };

/// Face order used everywhere boundary data is indexed: xlo, xhi, ylo, yhi, zlo, zhi.
enum Face : int { xlo = 0, xhi = 1, ylo = 2, yhi = 3, zlo = 4, zhi = 5 };

inline const char* face_name(int f) {
  static const char* names[6] = {"xlo", "xhi", "ylo", "yhi", "zlo", "zhi"};
  return names[f];
}

/// Regular Cartesian grid with one material id per cell.
/// Cells are addressed by (i, j, k) with linear index i + nx*(j + ny*k).
struct CartesianMesh {
  int nx = 1, ny = 1, nz = 1;
  double dx = 1.0, dy = 1.0, dz = 1.0;
  std::array<BoundaryKind, 6> bc = {BoundaryKind::vacuum, BoundaryKind::vacuum,
                                    BoundaryKind::vacuum, BoundaryKind::vacuum,
                                    BoundaryKind::vacuum, BoundaryKind::vacuum};
  std::vector<int> material_id;  // size nx*ny*nz

  int num_cells() const { return nx * ny * nz; }
  int cell_index(int i, int j, int k) const { return i + nx * (j + ny * k); }

  bool any_reflecting() const {
    for (auto b : bc)
      if (b == BoundaryKind::reflect) return true;
    return false;
  }
};

}  // namespace snmge
