#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "snmge/types.h"

namespace snmge {

/// Scalar-flux-shaped vector: one value per (group, cell), group-major, over
/// a half-open global group range. The backing storage is a flat Vec so the
/// Krylov kernels can treat it as a plain vector.
struct MomentVector {
  GroupRange groups;
  int num_cells = 0;
  Vec values;

  MomentVector() = default;
  MomentVector(GroupRange g, int ncells)
      : groups(g), num_cells(ncells),
        values(static_cast<size_t>(g.size()) * ncells, 0.0) {}

  double& at(int g_local, int cell) {
    return values[static_cast<size_t>(g_local) * num_cells + cell];
  }
  double at(int g_local, int cell) const {
    return values[static_cast<size_t>(g_local) * num_cells + cell];
  }
  double* group_data(int g_local) {
    return values.data() + static_cast<size_t>(g_local) * num_cells;
  }
  const double* group_data(int g_local) const {
    return values.data() + static_cast<size_t>(g_local) * num_cells;
  }

  /// Copy of the sub-vector for a global group subrange.
  MomentVector slice(GroupRange sub) const {
    MomentVector out(sub, num_cells);
    for (int g = sub.begin; g < sub.end; ++g)
      for (int c = 0; c < num_cells; ++c)
        out.at(g - sub.begin, c) = at(g - groups.begin, c);
    return out;
  }

  void add_scaled(const MomentVector& other, double alpha) {
    for (size_t i = 0; i < values.size(); ++i) values[i] += alpha * other.values[i];
  }
};

inline double norm2(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(const Vec& v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::fabs(x));
  return s;
}

inline double norm1(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace snmge
