#pragma once

#include <vector>

#include "feec/forms.hpp"

namespace feec {

/// Quadrature over the closed unit ball: nodes y_i and weights w_i with
/// sum w_i = 1, absorbing the mollifier density.
struct BallRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
  int radial = 0;
  int angular = 0;
};

/// Standard mollifier mu(y) = C exp(-1/(1-|y|^2)) on the unit ball of R^n.
class Mollifier {
 public:
  explicit Mollifier(int dim);

  int dim() const { return dim_; }
  double normalization() const { return c_mu_; }

  double value(const Point& y) const;
  Point gradient(const Point& y) const;
  /// mu_r(y) = r^{-n} mu(y / r).
  double value_scaled(const Point& y, double r) const;
  Point gradient_scaled(const Point& y, double r) const;

  /// Polar product rule: Gauss in the radius (weight s^{n-1}) times the
  /// trapezoid rule in the angle. In 1D `angular` is ignored.
  BallRule ball_rule(int radial = 16, int angular = 16) const;

  /// Integral of mu_r over its support by an independent Cartesian composite
  /// rule. Used for the unit-mass check.
  double mass_check(double r, int cells_per_axis = 64) const;

 private:
  int dim_;
  double c_mu_;
};

}  // namespace feec
