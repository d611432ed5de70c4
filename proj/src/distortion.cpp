#include "feec/distortion.hpp"

#include <cmath>
#include <sstream>

namespace feec {

double zeta(double t, double a) {
  if (a <= 0.0 || t <= -2.0 * a || t >= 4.0 * a) return t;
  return t <= 0.0 ? 2.0 * a + 2.0 * t : 2.0 * a + 0.5 * t;
}

double zeta_inverse(double s, double a) {
  if (a <= 0.0 || s <= -2.0 * a || s >= 4.0 * a) return s;
  return s <= 2.0 * a ? 0.5 * (s - 2.0 * a) : 2.0 * (s - 2.0 * a);
}

double zeta_dt(double t, double a) {
  if (a <= 0.0 || t <= -2.0 * a || t >= 4.0 * a) return 1.0;
  return t <= 0.0 ? 2.0 : 0.5;
}

double zeta_da(double t, double a) {
  if (a <= 0.0 || t <= -2.0 * a || t >= 4.0 * a) return 0.0;
  return 2.0;
}

DistortionMap::DistortionMap(BoxGeometry geometry, RadiusFunction rho, double kappa, double L_D)
    : geometry_(std::move(geometry)), rho_(std::move(rho)) {
  constants_.kappa = kappa;
  constants_.L_D = L_D;
  // facing zones across a slab reach 4 kappa rho each
  constants_.eps_D = geometry_.tau_b() / 4.0;
  if (!(kappa > 1.0 / (L_D - 1.0)) || 8.0 * kappa * constants_.eps_D > geometry_.tau_b())
    throw GeometryError("distortion rejected: profile scale out of range");
  if (!(rho_.sup() < constants_.eps_D) || !(rho_.lipschitz() < constants_.eps_D)) {
    std::ostringstream os;
    os << "distortion rejected: sup rho = " << rho_.sup() << ", Lip rho = " << rho_.lipschitz()
       << " must both be below eps_D = " << constants_.eps_D;
    throw GeometryError(os.str());
  }
  for (const auto& s : geometry_.bulge_boundary()) by_axis_[s.axis].push_back(s);
  // zones of one sweep must not overlap
  const double reach = 4.0 * kappa * rho_.sup(), ext = rho_.sup();
  for (int a = 0; a < 2; ++a) {
    const auto& segs = by_axis_[a];
    for (std::size_t i = 0; i < segs.size(); ++i)
      for (std::size_t j = i + 1; j < segs.size(); ++j) {
        const bool normal_overlap = std::abs(segs[i].c - segs[j].c) < 2.0 * reach;
        const bool span_overlap = segs[i].s0 - ext < segs[j].s1 + ext && segs[j].s0 - ext < segs[i].s1 + ext;
        if (normal_overlap && span_overlap) throw GeometryError("distortion rejected: overlapping collar zones");
      }
  }
}

double DistortionMap::alpha(const BulgeSegment& s, double o) const {
  const double d = o < s.s0 ? s.s0 - o : (o > s.s1 ? o - s.s1 : 0.0);
  Point p(2);
  p(s.axis) = s.c;
  p(1 - s.axis) = o;
  return constants_.kappa * std::max(0.0, rho_(p) - d);
}

Point DistortionMap::sweep(int axis, const Point& x) const {
  Point y = x;
  for (const auto& s : by_axis_[axis]) {
    const double a = alpha(s, x(1 - axis));
    const double t = s.inward * (x(axis) - s.c);
    if (a > 0.0 && t > -2.0 * a && t < 4.0 * a) {
      y(axis) = s.c + s.inward * zeta(t, a);
      break;
    }
  }
  return y;
}

Point DistortionMap::sweep_inverse(int axis, const Point& x) const {
  Point y = x;
  for (const auto& s : by_axis_[axis]) {
    const double a = alpha(s, x(1 - axis));
    const double t = s.inward * (x(axis) - s.c);
    if (a > 0.0 && t > -2.0 * a && t < 4.0 * a) {
      y(axis) = s.c + s.inward * zeta_inverse(t, a);
      break;
    }
  }
  return y;
}

Jacobian DistortionMap::sweep_jacobian(int axis, const Point& x) const {
  Jacobian j = Jacobian::Identity(2, 2);
  const int o = 1 - axis;
  for (const auto& s : by_axis_[axis]) {
    const double a = alpha(s, x(o));
    const double t = s.inward * (x(axis) - s.c);
    if (!(a > 0.0 && t > -2.0 * a && t < 4.0 * a)) continue;
    // d alpha / d o
    Point p(2);
    p(axis) = s.c;
    p(o) = x(o);
    const double dd = x(o) < s.s0 ? -1.0 : (x(o) > s.s1 ? 1.0 : 0.0);
    const double da = constants_.kappa * (rho_.gradient(p)(o) - dd);
    j(axis, axis) = zeta_dt(t, a);
    j(axis, o) = s.inward * zeta_da(t, a) * da;
    break;
  }
  return j;
}

Point DistortionMap::forward(const Point& x) const { return sweep(0, sweep(1, x)); }

Point DistortionMap::inverse(const Point& x) const { return sweep_inverse(1, sweep_inverse(0, x)); }

Jacobian DistortionMap::jacobian(const Point& x) const {
  const Point p = sweep(1, x);
  return sweep_jacobian(0, p) * sweep_jacobian(1, x);
}

}  // namespace feec
