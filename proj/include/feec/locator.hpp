#pragma once

#include <optional>
#include <vector>

#include "feec/mesh.hpp"

namespace feec {

/// Bucket grid over the bounding box of a mesh for point location and
/// barycentric coordinates of n-simplices.
class PointLocator {
 public:
  explicit PointLocator(const SimplicialMesh& mesh);

  /// Barycentric coordinates of x in cell i (n+1 entries, sorted vertex order).
  Eigen::VectorXd barycentric(std::size_t cell, const Point& x) const;
  bool contains(std::size_t cell, const Point& x, double tol = 1e-12) const;

  /// Some cell containing x, or nothing if x lies outside the mesh.
  std::optional<int> locate(const Point& x, double tol = 1e-12) const;

  /// Cells whose bounding boxes meet the box [lo, hi].
  std::vector<int> cells_near(const Point& lo, const Point& hi) const;

  /// Gradients of the barycentric coordinates of cell i as rows ((n+1) x n).
  const Eigen::MatrixXd& barycentric_gradients(std::size_t cell) const { return grads_[cell]; }

  const SimplicialMesh& mesh() const { return *mesh_; }

 private:
  std::vector<int> bucket_range(const Point& lo, const Point& hi) const;

  const SimplicialMesh* mesh_;
  int n_;
  Point lo_, hi_;
  std::vector<int> counts_;
  std::vector<std::vector<int>> buckets_;
  std::vector<Eigen::MatrixXd> grads_;
  std::vector<Point> cell_lo_, cell_hi_;
};

}  // namespace feec
