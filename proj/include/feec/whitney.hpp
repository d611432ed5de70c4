#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "feec/forms.hpp"
#include "feec/locator.hpp"
#include "feec/mesh.hpp"
#include "feec/topology.hpp"

namespace feec {

/// Shared, immutable data of all spaces on one meshed domain.
struct FEContext {
  explicit FEContext(MeshedDomain d);
  MeshedDomain domain;
  PointLocator locator;
  RelativeComplex relative;
};

/// Lowest-order Whitney space of degree k with the traces on gamma_T removed.
class FESpace {
 public:
  FESpace(std::shared_ptr<const FEContext> ctx, int k);

  int degree() const { return k_; }
  int dim() const { return ctx_->domain.mesh->dim(); }
  std::size_t size() const { return ctx_->relative.num_free(k_); }
  /// Global simplex id of each DOF.
  const std::vector<int>& dofs() const { return ctx_->relative.free(k_); }
  /// DOF of global k-simplex i, -1 if constrained.
  int dof_of(std::size_t i) const { return ctx_->relative.free_index(k_, i); }

  const SimplicialMesh& mesh() const { return *ctx_->domain.mesh; }
  const BoundaryPartition& partition() const { return *ctx_->domain.partition; }
  const PointLocator& locator() const { return ctx_->locator; }
  const std::shared_ptr<const FEContext>& context() const { return ctx_; }

 private:
  std::shared_ptr<const FEContext> ctx_;
  int k_;
};

/// The spaces of all degrees 0..n on one domain.
class FEComplex {
 public:
  explicit FEComplex(MeshedDomain domain);
  int dim() const { return static_cast<int>(spaces_.size()) - 1; }
  const FESpace& space(int k) const { return spaces_.at(static_cast<std::size_t>(k)); }
  const MeshedDomain& domain() const { return ctx_->domain; }
  const std::shared_ptr<const FEContext>& context() const { return ctx_; }

 private:
  std::shared_ptr<const FEContext> ctx_;
  std::vector<FESpace> spaces_;
};

struct Cochain {
  const FESpace* space = nullptr;
  Vector coeffs;
};

/// Global ids of the k-faces of a cell, in the order of subsets(n+1, k+1)
/// over local vertex positions.
std::vector<int> local_faces(const SimplicialMesh& mesh, int k, std::size_t cell);

/// Values of the Whitney forms of all k-faces of `cell` at barycentric
/// coordinates `lambda`, order as in local_faces. For k = n the form is
/// scaled by the cell orientation so that its integral is 1.
std::vector<Coeffs> whitney_local(const PointLocator& loc, int k, std::size_t cell, const Eigen::VectorXd& lambda);

/// Value of sum_s c_s phi_s at x inside `cell`. Throws if x is not in the cell.
Coeffs whitney_evaluate(const Cochain& c, const Point& x, std::size_t cell);
/// Same with point location.
Coeffs whitney_evaluate(const Cochain& c, const Point& x);

/// Evaluation of a full (unconstrained) coefficient vector indexed by global
/// simplex id.
Coeffs whitney_evaluate_global(const PointLocator& loc, int k, const Vector& global, const Point& x, std::size_t cell);

/// Integral of the trace of `field` over k-simplex i (oriented as in the
/// incidence convention).
double simplex_integral(const SimplicialMesh& mesh, int k, std::size_t i, const FormField& field, int degree = 6);

Cochain canonical_interpolant(const FESpace& space, const FormField& field, int degree = 6);

/// Constrained incidence matrix from space k to space k+1.
SparseMatrix exterior_derivative(const FESpace& from, const FESpace& to);

SparseMatrix mass_matrix(const FESpace& space);

/// Entries <f, phi_a> by quadrature of the given degree.
Vector load_vector(const FESpace& space, const FormField& f, int degree = 6);

double l2_inner(const Cochain& a, const Cochain& b, const SparseMatrix& mass);
double l2_norm(const Cochain& a, const SparseMatrix& mass);
/// Sampled sup norm of |u| (maximum over a barycentric lattice per cell);
/// a lower estimate of the true L-infinity norm.
double linf_norm_sampled(const Cochain& a, int lattice = 6);

/// ||u_h - u||_{L2} by cellwise quadrature.
double l2_error(const Cochain& uh, const FormField& u, int degree = 6);
/// ||d u_h - d u||_{L2}; requires the analytic derivative.
double hd_seminorm_error(const Cochain& uh, const FESpace& next, const SparseMatrix& d, const FormField& u, int degree = 6);

nlohmann::json cochain_to_json(const Cochain& c);
Vector cochain_from_json(const FESpace& space, const nlohmann::json& doc);

}  // namespace feec
