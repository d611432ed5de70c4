#pragma once

#include <stdexcept>
#include <vector>

#include "feec/forms.hpp"
#include "feec/mesh.hpp"

namespace feec {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Straight piece of the bulge boundary. Points with coordinate `axis`
/// equal to `c` and other coordinate in [s0, s1]; `inward` (+1/-1) is the
/// direction along `axis` pointing into the bulge.
struct BulgeSegment {
  int axis = 0;
  double c = 0.0;
  double s0 = 0.0, s1 = 0.0;
  int inward = 1;
};

/// Omega = (-1,1)^2 with Gamma_T a union of whole faces. The bulge Upsilon is
/// the slab of thickness tau_b glued to every face of Gamma_T (corner squares
/// included where two such faces meet), Omega^b = Omega with its bulge, and
/// Omega^e = Omega^b widened by the reflection collar tau_e on every side.
class BoxGeometry {
 public:
  BoxGeometry(std::vector<BoxFace> gamma_T, double tau_b = 0.25, double tau_e = 0.25);

  const std::vector<BoxFace>& gamma_T() const { return faces_; }
  bool has_face(BoxFace f) const;
  double tau_b() const { return tau_b_; }
  double tau_e() const { return tau_e_; }

  /// Omega^b = [lo, hi].
  const Point& bulge_lo() const { return lo_; }
  const Point& bulge_hi() const { return hi_; }
  Point extended_lo() const { return (lo_.array() - tau_e_).matrix(); }
  Point extended_hi() const { return (hi_.array() + tau_e_).matrix(); }

  bool in_closed_omega(const Point& x, double tol = 0.0) const;
  /// Open bulge: inside Omega^b and outside the closed box.
  bool in_bulge(const Point& x) const;
  bool in_extended(const Point& x, double tol = 1e-12) const;

  /// Boundary of the bulge as maximal straight segments.
  const std::vector<BulgeSegment>& bulge_boundary() const { return segments_; }
  double dist_to_bulge_boundary(const Point& x) const;
  /// Distance to the closure of Gamma_T.
  double dist_to_gamma_T(const Point& x) const;

  static BoxGeometry from_patch(const PatchSpec& patch, double tau_b = 0.25, double tau_e = 0.25);

 private:
  std::vector<BoxFace> faces_;
  double tau_b_, tau_e_;
  Point lo_, hi_;
  std::vector<BulgeSegment> segments_;
};

double dist_to_segment(const Point& x, const BulgeSegment& s);

}  // namespace feec
