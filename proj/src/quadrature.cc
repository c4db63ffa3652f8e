#include "snmge/quadrature.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace snmge {

namespace {

// One entry per distinct cosine-level triple (i,j,k), 1-based levels with
// i+j+k = order/2 + 2. point_weight is octant-normalized (octant sums to 1).
struct PointClass {
  std::array<int, 3> levels;
  double point_weight;
};

struct LevelSymmetricSet {
  double mu1_sq;                    // square of the smallest cosine
  std::vector<PointClass> classes;
};

// Solutions of the even-moment conditions (sum w = 1 per octant and exact
// mu^4, mu^6, mu^8 moments as the order admits), frozen to double precision.
LevelSymmetricSet set_for_order(int order) {
  switch (order) {
    case 2:
      return {1.0 / 3.0, {{{1, 1, 1}, 1.0}}};
    case 4:
      return {0.12251482265544138, {{{1, 1, 2}, 1.0 / 3.0}}};
    case 6:
      return {0.071094437341974342,
              {{{1, 1, 3}, 0.17612613086338343}, {{1, 2, 2}, 0.15720720246994990}}};
    case 8:
      return {1.0 / 21.0,
              {{{1, 1, 4}, 0.12098765432098765},
               {{1, 2, 3}, 0.090740740740740741},
               {{2, 2, 2}, 0.092592592592592593}}};
    default:
      throw ConfigError("unsupported quadrature order " + std::to_string(order) +
                        " (supported: 2, 4, 6, 8)");
  }
}

}  // namespace

AngularQuadrature build_quadrature(int order) {
  const LevelSymmetricSet set = set_for_order(order);
  const int n_levels = order / 2;

  // Cosine per level: mu_i^2 = mu_1^2 + (i-1) * 2(1 - 3 mu_1^2)/(order - 2).
  Vec mu(n_levels);
  const double delta =
      n_levels > 1 ? (1.0 - 3.0 * set.mu1_sq) / (n_levels - 1) : 0.0;
  for (int i = 0; i < n_levels; ++i) mu[i] = std::sqrt(set.mu1_sq + i * delta);

  AngularQuadrature quad;
  quad.order = order;
  const double octant_weight = 4.0 * std::numbers::pi / 8.0;

  for (const PointClass& cls : set.classes) {
    std::array<int, 3> perm = cls.levels;
    std::sort(perm.begin(), perm.end());
    std::vector<std::array<int, 3>> perms;
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (const auto& p : perms) {
      for (int oct = 0; oct < 8; ++oct) {
        const double sx = (oct & 1) ? -1.0 : 1.0;
        const double sy = (oct & 2) ? -1.0 : 1.0;
        const double sz = (oct & 4) ? -1.0 : 1.0;
        quad.ordinates.push_back({sx * mu[p[0] - 1], sy * mu[p[1] - 1],
                                  sz * mu[p[2] - 1],
                                  cls.point_weight * octant_weight});
      }
    }
  }

  // Mirror maps for boundary reflection, one per axis.
  const int n = quad.size();
  for (int axis = 0; axis < 3; ++axis) {
    quad.mirror[axis].assign(n, -1);
    for (int m = 0; m < n; ++m) {
      const Ordinate& a = quad.ordinates[m];
      for (int mm = 0; mm < n; ++mm) {
        const Ordinate& b = quad.ordinates[mm];
        const bool match = (axis == 0 && b.mu == -a.mu && b.eta == a.eta && b.xi == a.xi) ||
                           (axis == 1 && b.mu == a.mu && b.eta == -a.eta && b.xi == a.xi) ||
                           (axis == 2 && b.mu == a.mu && b.eta == a.eta && b.xi == -a.xi);
        if (match) {
          quad.mirror[axis][m] = mm;
          break;
        }
      }
      if (quad.mirror[axis][m] < 0)
        throw NumericError("quadrature set is not closed under sign flips");
    }
  }
  return quad;
}

}  // namespace snmge
