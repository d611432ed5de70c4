#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "feec/projection.hpp"

namespace feec {

/// One measured quantity next to the bound it is held to. A bound of NaN
/// means the value is only reported.
struct Measurement {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct CheckReport {
  std::string name;
  std::vector<Measurement> items;

  bool pass() const;
  /// Adds value <= bound.
  void at_most(const std::string& what, double value, double bound);
  void at_least(const std::string& what, double value, double bound);
  void report(const std::string& what, double value);
  void require(const std::string& what, bool ok);
};

/// Sampled battery of the distortion properties: inverse defect,
/// Lipschitz quotients, displacement, identity away from the bulge boundary
/// and balls on the bulge boundary mapped into the bulge.
CheckReport check_distortion(const DistortionMap& map, int samples = 10000, std::uint64_t seed = 7);

/// Tensor Gauss rule on [-1,1]^2 whose breakpoints are refined geometrically
/// towards the faces of the box down to `finest`.
struct BoxQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
};
BoxQuadrature box_quadrature(int cells = 8, double finest = 1e-3, int gauss_points = 3);

double field_l2_norm(const FormField& u, const BoxQuadrature& q);

/// Unit mass, preserved constants and affine functions, commutation with d
/// under the finite-difference oracle on three trigonometric forms, and the
/// local sup bound with p = infinity.
CheckReport check_mollifier(const RadiusFunction& rho, int samples = 100, std::uint64_t seed = 7);

/// Vanishing on the bulge, restriction to the box, commutation with d across
/// Gamma_T for vanishing traces, measured local constants.
CheckReport check_extension(const BoxGeometry& geometry, int samples = 100, std::uint64_t seed = 7);

/// Vanishing band next to Gamma_T, commutation with d, linearity, local bound.
CheckReport check_regularizer(const Regularizer& m, int samples = 100, std::uint64_t seed = 7);

/// ||Phi^* u||_{L2(A)} <= ||DPhi||^k ||DPhi^{-1}||^{n/2} ||u||_{L2(Phi(A))} for
/// the distortion map on a window around the bulge boundary.
CheckReport check_pullback_estimate(const DistortionMap& map, std::uint64_t seed = 7);

struct ProjectionCheckOptions {
  int smooth_fields = 10;
  int random_inputs = 5;
  bool measure_norm = true;
  std::uint64_t seed = 7;
};

/// Idempotence on the FE basis, pi^2 = pi, commutation on FE and smooth
/// inputs, zero DOFs on Gamma_T, linearity and the measured norms.
CheckReport check_projection(const SmoothedProjection& pi, const BoxGeometry& geometry,
                             const ProjectionCheckOptions& options = {});

struct DensityRow {
  double epsilon = 0.0;
  double error_u = 0.0;   // ||u - M u||_{L2}
  double error_du = 0.0;  // ||du - M du||_{L2}
  double total() const { return error_u + error_du; }
};

/// ||u - M_eps u|| + ||du - d M_eps u|| for every eps with rho = eps * h.
std::vector<DensityRow> density_table(const BoxGeometry& geometry, std::shared_ptr<const MeshSizeFunction> h,
                                      const FormField& u, const std::vector<double>& epsilons, double delta = 0.1,
                                      int radial = 16, int angular = 16);

}  // namespace feec
