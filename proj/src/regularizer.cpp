#include "feec/regularizer.hpp"

#include <sstream>

namespace feec {

Coeffs mollify(const FormField& u, const RadiusFunction& rho, const BallRule& rule, const Point& x) {
  if (!(rho.lipschitz() < 0.5)) throw GeometryError("mollification needs Lip(rho) < 1/2");
  const int n = static_cast<int>(x.size());
  const double r = rho(x);
  const Point g = rho.gradient(x);
  Coeffs out = Coeffs::Zero(num_components(n, u.degree));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const Point& y = rule.nodes[i];
    const Jacobian j = Jacobian::Identity(n, n) + y * g.transpose();
    out += rule.weights[i] * pullback(j, u(x + r * y), u.degree);
  }
  return out;
}

FormField mollify(const FormField& u, const RadiusFunction& rho, const BallRule& rule) {
  FormField m;
  m.dim = u.dim;
  m.degree = u.degree;
  m.eval = [u, rho, rule](const Point& x) { return mollify(u, rho, rule, x); };
  if (u.has_derivative()) m.derivative = std::make_shared<FormField>(mollify(u.d(), rho, rule));
  return m;
}

Regularizer::Regularizer(BoxGeometry geometry, RadiusFunction rho, double delta, int radial, int angular)
    : distortion_(geometry, rho), extension_(geometry), rho_(std::move(rho)), delta_(delta),
      rule_(Mollifier(2).ball_rule(radial, angular)) {
  const double L_D = distortion_.constants().L_D;
  if (!(delta > 0.0) || !(2.0 * delta * L_D < 1.0)) {
    std::ostringstream os;
    os << "regularizer needs 0 < delta and 2 delta L_D < 1 (delta = " << delta << ", L_D = " << L_D << ")";
    throw GeometryError(os.str());
  }
  if (!(delta * rho_.lipschitz() < 0.5)) throw GeometryError("regularizer needs Lip(delta rho) < 1/2");
}

Coeffs Regularizer::apply(const FormField& u, const Point& x) const {
  Coeffs out = Coeffs::Zero(num_components(2, u.degree));
  visit(x, [&](double w, const Point& src, const Jacobian& j) { out += w * pullback(j, u(src), u.degree); });
  return out;
}

FormField Regularizer::apply(const FormField& u) const {
  FormField m;
  m.dim = 2;
  m.degree = u.degree;
  auto self = std::make_shared<Regularizer>(*this);
  m.eval = [self, u](const Point& x) { return self->apply(u, x); };
  if (u.has_derivative()) m.derivative = std::make_shared<FormField>(apply(u.d()));
  return m;
}

double Regularizer::vanishing_distance() const {
  return (1.0 / distortion_.constants().L_D - delta_) * rho_.inf();
}

}  // namespace feec
