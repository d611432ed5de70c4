#pragma once

#include <memory>

#include "feec/mesh_quality.hpp"

namespace feec {

/// Smooth positive radius rho: constant, or eps times a mesh-size function.
class RadiusFunction {
 public:
  static RadiusFunction constant(double r);
  static RadiusFunction scaled(std::shared_ptr<const MeshSizeFunction> h, double eps);

  double operator()(const Point& x) const;
  Point gradient(const Point& x) const;
  /// New radius f * rho.
  RadiusFunction scaled_by(double f) const;

  bool is_constant() const;
  /// Global bounds; exact for the constant case, from min/max h_T otherwise.
  double sup() const;
  double inf() const;
  double lipschitz() const;
  double factor() const { return factor_; }

 private:
  double factor_ = 0.0;
  std::shared_ptr<const MeshSizeFunction> h_;
};

}  // namespace feec
