#pragma once

#include <memory>
#include <optional>
#include <stdexcept>

#include <Eigen/SparseCholesky>

#include "feec/whitney.hpp"

namespace feec {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spaces of degree k-1, k, k+1 with their mass matrices and derivatives.
/// Missing neighbours (k = 0 or k = n) are represented by empty matrices.
class HodgeComplex {
 public:
  HodgeComplex(const FEComplex& fe, int k);

  int k() const { return k_; }
  int n() const { return n_; }
  bool has_prev() const { return k_ > 0; }
  bool has_next() const { return k_ < n_; }
  const FESpace& space() const { return fe_->space(k_); }
  const FESpace& prev_space() const { return fe_->space(k_ - 1); }
  const FESpace& next_space() const { return fe_->space(k_ + 1); }

  const SparseMatrix& mass() const { return m_; }
  const SparseMatrix& mass_prev() const { return m_prev_; }
  const SparseMatrix& mass_next() const { return m_next_; }
  /// d from k-1 to k (size(k) x size(k-1)).
  const SparseMatrix& d_prev() const { return d_prev_; }
  /// d from k to k+1.
  const SparseMatrix& d() const { return d_; }

  /// M-orthogonal projection of u onto d(space k-1); returns the exact part.
  Vector exact_part(const Vector& u) const;

 private:
  const FEComplex* fe_;
  int k_, n_;
  SparseMatrix m_, m_prev_, m_next_, d_prev_, d_;
  std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix>> prev_solver_;
  SparseMatrix prev_stiffness_, prev_shifted_;
};

struct HarmonicBasis {
  int k = 0;
  long betti = 0;
  /// Columns: M-orthonormal basis of ker d intersected with the
  /// M-complement of the range of d.
  Eigen::MatrixXd vectors;
  /// Smallest singular value of the combined operator outside the kernel
  /// and the threshold used, for diagnostics.
  double gap = 0.0;
  double threshold = 0.0;
};

/// Null space of [d_k; s d_{k-1}^T M_k] by shifted subspace inverse iteration
/// and a Rayleigh-Ritz step; throws SolverError if its dimension differs
/// from the exact relative Betti number.
HarmonicBasis harmonic_basis(const HodgeComplex& hc);

struct HodgeParts {
  Vector exact;
  Vector harmonic;
  Vector coexact;
};

HodgeParts hodge_decompose(const HodgeComplex& hc, const HarmonicBasis& hb, const Vector& u);

struct SaddleSolution {
  Vector sigma;  // degree k-1 (empty for k = 0)
  Vector u;      // degree k
  Vector p;      // coefficients in the harmonic basis
  Vector p_cochain;
  // Euclidean norms of the three block residuals and of the right-hand side.
  double residual_sigma = 0.0, residual_u = 0.0, residual_p = 0.0, rhs_norm = 0.0;
  // sigma in L2, u in the graph norm of d, p in L2
  double norm_sigma = 0.0, norm_u_hd = 0.0, norm_p = 0.0;
};

/// Solves the discrete mixed Hodge-Laplace system for the load vector
/// F_a = <f, phi_a>.
SaddleSolution solve_mixed_hodge(const HodgeComplex& hc, const HarmonicBasis& hb, const Vector& load);

/// 1 / sqrt(lambda_min) for (d^T M d) x = lambda M x on the M-complement of
/// ker d, by inverse iteration with deflation.
double poincare_constant(const HodgeComplex& hc, const HarmonicBasis& hb);

}  // namespace feec
