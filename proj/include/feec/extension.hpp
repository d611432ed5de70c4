#pragma once

#include "feec/box_geometry.hpp"

namespace feec {

/// Where the extension reads its value: E u(x) = J^* u(source), or zero when
/// x falls into the bulge.
struct ExtensionSource {
  bool zero = false;
  Point source;
  Jacobian jacobian;  // diagonal, entries +-1
};

/// Extension of forms on the closed box to Omega^e: zero on the bulge, even
/// reflection (with pullback) across every face of Omega^b, corners by
/// composing the two face reflections.
class ExtensionOperator {
 public:
  explicit ExtensionOperator(BoxGeometry geometry) : geometry_(std::move(geometry)) {}

  /// Throws GeometryError naming x when it lies outside Omega^e.
  ExtensionSource locate(const Point& x) const;

  Coeffs apply(const FormField& u, const Point& x) const;
  /// E u as a field on Omega^e; carries E(du) as derivative when u has one.
  FormField apply(const FormField& u) const;

  const BoxGeometry& geometry() const { return geometry_; }

 private:
  BoxGeometry geometry_;
};

}  // namespace feec
