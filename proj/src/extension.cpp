#include "feec/extension.hpp"

#include <sstream>

namespace feec {

ExtensionSource ExtensionOperator::locate(const Point& x) const {
  if (!geometry_.in_extended(x)) {
    std::ostringstream os;
    os << "extension evaluated outside the extended domain at (" << x(0) << ", " << x(1) << ")";
    throw GeometryError(os.str());
  }
  ExtensionSource s;
  s.source = x;
  s.jacobian = Jacobian::Identity(2, 2);
  const Point& lo = geometry_.bulge_lo();
  const Point& hi = geometry_.bulge_hi();
  for (int a = 0; a < 2; ++a) {
    if (x(a) < lo(a)) {
      s.source(a) = 2.0 * lo(a) - x(a);
      s.jacobian(a, a) = -1.0;
    } else if (x(a) > hi(a)) {
      s.source(a) = 2.0 * hi(a) - x(a);
      s.jacobian(a, a) = -1.0;
    }
  }
  if (!geometry_.in_closed_omega(s.source)) s.zero = true;
  return s;
}

Coeffs ExtensionOperator::apply(const FormField& u, const Point& x) const {
  const auto s = locate(x);
  if (s.zero) return Coeffs::Zero(num_components(2, u.degree));
  return pullback(s.jacobian, u(s.source), u.degree);
}

FormField ExtensionOperator::apply(const FormField& u) const {
  FormField e;
  e.dim = u.dim;
  e.degree = u.degree;
  auto self = *this;
  e.eval = [self, u](const Point& x) { return self.apply(u, x); };
  if (u.has_derivative()) e.derivative = std::make_shared<FormField>(apply(u.d()));
  return e;
}

}  // namespace feec
