#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "feec/affine_pipeline.hpp"

namespace feec {

class ProjectionError : public std::runtime_error {
 public:
  ProjectionError(const std::string& what, double defect) : std::runtime_error(what), defect_(defect) {}
  /// Best ||I - Q|_P||_M reached, NaN if no candidate got that far.
  double defect() const { return defect_; }

 private:
  double defect_;
};

struct ProjectionOptions {
  double epsilon = 0.3;
  double delta = 0.1;
  int max_halvings = 8;
  int radial = 16;
  int angular = 16;
};

struct EpsilonAttempt {
  double epsilon = 0.0;
  bool accepted = false;
  std::string reason;
  double defect = 0.0;  // max_k ||I - Q|_P||_M, NaN when not computed
};

/// pi = (Q|_P)^{-1} Q on every degree of one box mesh with uniform cells.
class SmoothedProjection {
 public:
  SmoothedProjection(const FEComplex& fe, BoxGeometry geometry, ProjectionOptions options = {},
                     std::ostream* log = nullptr);

  double epsilon() const { return epsilon_; }
  const std::vector<EpsilonAttempt>& attempts() const { return attempts_; }
  const SmoothedInterpolant& interpolant() const { return *interp_; }
  const FEComplex& complex() const { return *fe_; }

  const SparseMatrix& q_square(int k) const { return data_.at(static_cast<std::size_t>(k)).q; }
  const SparseMatrix& mass(int k) const { return data_.at(static_cast<std::size_t>(k)).mass; }
  double defect(int k) const { return data_.at(static_cast<std::size_t>(k)).defect; }

  /// Q from an arbitrary input space of degree k to the free DOFs of degree k.
  SparseMatrix q_matrix(int k, const FESpace& input) const;
  /// (Q|_P)^{-1} b and its transpose.
  Vector solve(int k, const Vector& b) const;
  Vector solve_transpose(int k, const Vector& b) const;

  Vector apply(int k, const Vector& fe_coeffs) const;
  Vector apply(int k, const FormField& u, int degree = 6) const;

 private:
  struct Degree {
    SparseMatrix q, mass;
    std::shared_ptr<Eigen::SparseLU<SparseMatrix>> lu, lu_t;
    double defect = 0.0;
  };
  bool try_epsilon(double eps, const BoxGeometry& geometry, std::string& reason, double& defect);

  const FEComplex* fe_;
  ProjectionOptions options_;
  double epsilon_ = 0.0;
  std::vector<EpsilonAttempt> attempts_;
  std::unique_ptr<SmoothedInterpolant> interp_;
  std::vector<Degree> data_;
};

/// sqrt of the largest eigenvalue of A^T M_out A against M_in: the operator
/// norm of A between the mass-weighted spaces, by power iteration.
double mass_operator_norm(const std::function<Vector(const Vector&)>& a, const std::function<Vector(const Vector&)>& at,
                          const SparseMatrix& mass_out, const SparseMatrix& mass_in, int max_iterations = 300,
                          double tolerance = 1e-8);

/// ||pi||_{L2 -> L2} measured on the inputs of `input` (typically the
/// unconstrained Whitney space of a refined mesh).
double projection_norm(const SmoothedProjection& pi, int k, const FESpace& input);

}  // namespace feec
