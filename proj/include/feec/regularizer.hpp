#pragma once

#include "feec/distortion.hpp"
#include "feec/extension.hpp"
#include "feec/mollifier.hpp"

namespace feec {

/// R^k_rho u(x) = sum_i w_i (Phi_{rho,y_i}^* u)(x), Phi_{rho,y}(x) = x + rho(x) y.
/// Requires Lip(rho) < 1/2.
Coeffs mollify(const FormField& u, const RadiusFunction& rho, const BallRule& rule, const Point& x);
FormField mollify(const FormField& u, const RadiusFunction& rho, const BallRule& rule);

/// M u = R_{delta rho} D_rho^* E u on the box with bulge.
class Regularizer {
 public:
  Regularizer(BoxGeometry geometry, RadiusFunction rho, double delta = 0.1, int radial = 16, int angular = 16);

  Coeffs apply(const FormField& u, const Point& x) const;
  /// M u as a field; carries M(du) as derivative when u has one.
  FormField apply(const FormField& u) const;

  /// Calls f(weight, source, jacobian) for each composite sample with
  /// M u(x) = sum weight * jacobian^* u(source); samples landing in the
  /// bulge are skipped.
  template <class F>
  void visit(const Point& x, F&& f) const {
    const double r = delta_ * rho_(x);
    const Point g = delta_ * rho_.gradient(x);
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      const Point& y = rule_.nodes[i];
      const Point z = x + r * y;
      const Jacobian jphi = Jacobian::Identity(2, 2) + y * g.transpose();
      const Point w = distortion_.forward(z);
      const auto e = extension_.locate(w);
      if (e.zero) continue;
      f(rule_.weights[i], e.source, Jacobian(e.jacobian * distortion_.jacobian(z) * jphi));
    }
  }

  /// M u vanishes at points closer than this to Gamma_T: (1/L_D - delta) inf rho.
  double vanishing_distance() const;

  const DistortionMap& distortion() const { return distortion_; }
  const ExtensionOperator& extension() const { return extension_; }
  const RadiusFunction& rho() const { return rho_; }
  double delta() const { return delta_; }
  const BallRule& rule() const { return rule_; }

 private:
  DistortionMap distortion_;
  ExtensionOperator extension_;
  RadiusFunction rho_;
  double delta_;
  BallRule rule_;
};

}  // namespace feec
