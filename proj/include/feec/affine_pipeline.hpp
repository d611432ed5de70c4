#pragma once

#include <array>
#include <utility>
#include <vector>

#include "feec/regularizer.hpp"
#include "feec/whitney.hpp"

namespace feec {

/// Oriented piece of a pushed-forward simplex: one vertex (k = 0), an
/// oriented segment (k = 1) or a convex polygon whose vertex order carries
/// the orientation (k = 2).
struct ChainPiece {
  std::vector<Point> verts;
  double weight = 1.0;
};

/// Sparse row: (input DOF, coefficient) pairs sorted by DOF.
using SparseRow = std::vector<std::pair<int, double>>;

/// Integrals of the basis forms of one Whitney space over pieces, with
/// per-cell barycentric data precomputed.
class WhitneyIntegrator {
 public:
  explicit WhitneyIntegrator(const FESpace& input);
  /// Adds scale * (integral of every basis form over the piece) to `row`.
  void integrate(const ChainPiece& piece, double scale, SparseRow& row) const;

 private:
  struct Cell {
    Eigen::Matrix<double, 3, 2> grad;  // lambda = grad * z + offset
    Eigen::Vector3d offset;
    std::array<int, 3> vertex_dof, edge_dof;
    std::array<std::array<int, 2>, 3> edge_local;
    int cell_dof = -1;
    double density = 0.0;  // coefficient of the top Whitney form, 1 / area
  };
  Eigen::Vector3d lambda(const Cell& c, const Point& z) const { return c.grad * z + c.offset; }

  const FESpace* space_;
  std::vector<Cell> cells_;
};
/// Exact action of Q = I o M on a k-simplex for a constant radius. For a
/// constant radius the mollifier translations, both distortion sweeps and the
/// reflections are affine on explicit polygonal zones, so the simplex is
/// split along the zone lines and pushed forward piece by piece; pieces in
/// the bulge are dropped.
class SmoothedInterpolant {
 public:
  explicit SmoothedInterpolant(Regularizer m);

  /// Pieces of sum_i w_i E_* D_* (Phi_{y_i})_* S inside the closed box.
  std::vector<ChainPiece> push(const std::vector<Point>& simplex) const;

  /// Row of Q for target DOF simplex `verts` (sorted order) against an input
  /// Whitney space on any mesh of the box. `top_sign` is the orientation
  /// factor of the target DOF (cell orientation for k = n, else 1).
  SparseRow row(const std::vector<Point>& verts, double top_sign, const WhitneyIntegrator& input) const;

  /// Q as a matrix from `input` to the free DOFs of `target`.
  SparseMatrix matrix(const FESpace& target, const FESpace& input) const;

  /// Q of a smooth field, integrated with a Gauss rule of the given degree on every piece.
  Vector apply(const FESpace& target, const FormField& u, int degree = 6) const;

  const Regularizer& regularizer() const { return m_; }

 private:
  void sweep(int axis, ChainPiece piece, std::size_t seg, std::vector<ChainPiece>& out) const;
  void extend(ChainPiece piece, std::vector<ChainPiece>& out) const;

  Regularizer m_;
};

/// Integral of a smooth k-form over a piece.
double integrate_field(const FormField& u, const ChainPiece& piece, int degree);

}  // namespace feec
