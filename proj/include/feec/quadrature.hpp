#pragma once

#include <vector>

#include "feec/forms.hpp"

namespace feec {

struct QuadratureRule1D {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule with `points` nodes on [0,1].
QuadratureRule1D gauss_legendre(int points);

/// Rule on the reference k-simplex conv{0, e_1, ..., e_k}; weights sum to 1/k!.
/// Exact for polynomials of total degree <= `degree` (collapsed-coordinate product).
struct SimplexRule {
  int dim = 0;
  std::vector<Point> points;  // reference coordinates, length dim
  std::vector<double> weights;
};

const SimplexRule& simplex_rule(int dim, int degree);

}  // namespace feec
