#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>

#include "feec/mesh.hpp"

namespace feec {

using IncidenceMatrix = Eigen::SparseMatrix<int>;

/// Coboundary D_k from k-cochains to (k+1)-cochains: the face omitting local
/// vertex j enters with sign (-1)^j; rows of n-simplices are multiplied by
/// the cell orientation.
IncidenceMatrix incidence_matrix(const SimplicialMesh& mesh, int k);
std::vector<IncidenceMatrix> incidence_matrices(const SimplicialMesh& mesh);

/// Cochain complex relative to the closure of gamma_T.
class RelativeComplex {
 public:
  RelativeComplex(const SimplicialMesh& mesh, const BoundaryPartition& partition);

  int dim() const { return n_; }
  /// Global ids of k-simplices outside the closure of gamma_T, ascending.
  const std::vector<int>& free(int k) const { return free_[static_cast<std::size_t>(k)]; }
  /// Free index of global k-simplex i, or -1 when constrained.
  int free_index(int k, std::size_t i) const { return local_[static_cast<std::size_t>(k)][i]; }
  std::size_t num_free(int k) const { return free(k).size(); }
  /// Restricted D_k, k in [0, n-1].
  const IncidenceMatrix& d(int k) const { return d_[static_cast<std::size_t>(k)]; }

 private:
  int n_;
  std::vector<std::vector<int>> free_;
  std::vector<std::vector<int>> local_;
  std::vector<IncidenceMatrix> d_;
};

/// Exact rank over the rationals by fraction-free elimination in 64-bit
/// integers. Throws std::overflow_error if an intermediate overflows.
long exact_rank(const IncidenceMatrix& m);

/// b_k(closure(Omega), gamma_T) for k = 0..n.
std::vector<long> betti_relative(const SimplicialMesh& mesh, const BoundaryPartition& partition);
std::vector<long> betti_relative(const RelativeComplex& complex);

struct DualityReport {
  std::vector<long> b_T;  // b_k(Omega, Gamma_T)
  std::vector<long> b_N;  // b_k(Omega, Gamma_N)
  bool holds = false;     // b_T[k] == b_N[n-k] for all k
};

DualityReport verify_poincare_lefschetz(const SimplicialMesh& mesh, const BoundaryPartition& partition);

/// Alternating count of free simplices.
long relative_euler_characteristic(const RelativeComplex& complex);

}  // namespace feec
