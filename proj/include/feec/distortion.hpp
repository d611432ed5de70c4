#pragma once

#include <vector>

#include "feec/box_geometry.hpp"
#include "feec/radius.hpp"

namespace feec {

/// Piecewise-linear profile: identity outside (-2a, 4a), 0 -> 2a, slope 2 on
/// [-2a, 0] and 1/2 on [0, 4a].
double zeta(double t, double a);
double zeta_inverse(double s, double a);
/// Partial derivatives in t and a (inside the active zone).
double zeta_dt(double t, double a);
double zeta_da(double t, double a);

struct DistortionConstants {
  double eps_D = 0.0;   // admissible bound for sup rho and Lip rho
  double L_D = 0.0;
  double kappa = 0.0;   // profile scale: alpha = kappa * rho at a boundary point
};

/// Bi-Lipschitz map of R^2 pushing a rho-neighbourhood of the bulge boundary
/// into the bulge. Composition of two sweeps: first the segments normal to
/// y move the y coordinate, then the segments normal to x move x. Inside a
/// sweep the active zones of different segments are disjoint.
class DistortionMap {
 public:
  DistortionMap(BoxGeometry geometry, RadiusFunction rho, double kappa = 0.4, double L_D = 4.0);

  Point forward(const Point& x) const;
  Point inverse(const Point& x) const;
  Jacobian jacobian(const Point& x) const;

  /// Single sweep moving coordinate `axis`, its inverse and Jacobian.
  Point sweep(int axis, const Point& x) const;
  Point sweep_inverse(int axis, const Point& x) const;
  Jacobian sweep_jacobian(int axis, const Point& x) const;

  /// Profile parameter of segment s at other-coordinate value `o`.
  double alpha(const BulgeSegment& s, double o) const;
  /// Segments normal to `axis`.
  const std::vector<BulgeSegment>& segments(int axis) const { return by_axis_[static_cast<std::size_t>(axis)]; }

  const DistortionConstants& constants() const { return constants_; }
  const BoxGeometry& geometry() const { return geometry_; }
  const RadiusFunction& rho() const { return rho_; }

 private:
  BoxGeometry geometry_;
  RadiusFunction rho_;
  DistortionConstants constants_;
  std::vector<BulgeSegment> by_axis_[2];
};

}  // namespace feec
