#pragma once

#include <array>
#include <vector>

#include "snmge/types.h"

namespace snmge {

struct Ordinate {
  double mu, eta, xi;  // direction cosines along x, y, z
  double weight;       // steradians; all ordinates sum to 4*pi
};

/// Level-symmetric discrete-ordinates set of order N in {2, 4, 6, 8}.
struct AngularQuadrature {
  int order = 0;
  std::vector<Ordinate> ordinates;

  int size() const { return static_cast<int>(ordinates.size()); }

  /// Index of the ordinate with the cosine along `axis` (0=x,1=y,2=z) negated.
  /// Built once at construction; reflection at a boundary face maps an
  /// incoming ordinate to the stored outgoing flux of its mirror.
  std::array<std::vector<int>, 3> mirror;
};

/// Builds the order-N level-symmetric set. The point and weight constants for
/// N in {4, 6, 8} are fixed solutions of the even-moment conditions; N = 2 is
/// the single-cosine set mu = 1/sqrt(3) with weight pi/2 per ordinate.
AngularQuadrature build_quadrature(int order);

}  // namespace snmge
