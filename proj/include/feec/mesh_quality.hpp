#pragma once

#include <memory>
#include <vector>

#include "feec/locator.hpp"
#include "feec/mesh.hpp"
#include "feec/mollifier.hpp"

namespace feec {

struct MeshQuality {
  std::vector<double> h_cell;    // diameter per n-simplex
  std::vector<double> h_vertex;  // mean diameter of adjacent n-simplices
  double shape_constant = 0.0;
  int neighbor_bound = 0;        // max number of cells meeting a cell, itself included
  double epsilon_h = 0.0;        // sampled lower bound
  double h_min = 0.0, h_max = 0.0;
};

/// Cells sharing at least one vertex with cell i, including i, sorted.
std::vector<int> cell_patch(const SimplicialMesh& mesh, std::size_t cell);

/// `with_epsilon_h = false` skips the sampling pass for epsilon_h.
MeshQuality mesh_quality(const SimplicialMesh& mesh, bool with_epsilon_h = true);

/// Sampled check of B_{eps h_T}(T) cap closure(Omega) within the patch of T.
bool ball_neighborhood_contained(const SimplicialMesh& mesh, const PointLocator& loc, std::size_t cell,
                                 const std::vector<int>& patch, double eps);

/// Smooth mesh-size function: the cellwise diameter field, continued outside
/// the box by reflection, convolved with mu_r for r = factor * min h_T.
class MeshSizeFunction {
 public:
  MeshSizeFunction(std::shared_ptr<const SimplicialMesh> mesh, double smoothing_radius_factor = 0.5);

  double operator()(const Point& x) const { return value(x); }
  double value(const Point& x) const;
  Point gradient(const Point& x) const;

  bool is_constant() const { return constant_; }
  double radius() const { return radius_; }
  double h_min() const { return h_min_; }
  double h_max() const { return h_max_; }
  /// Lipschitz bound measured as 1.05 * max |grad| on a sample grid.
  double lipschitz() const { return lip_; }
  /// Local comparability constant measured on sample points of every simplex.
  double comparability() const { return c_h_; }

 private:
  template <class F>
  void accumulate(const Point& x, F&& f) const;
  /// Integral of mu_r(x - z) over the cell, and its gradient in x.
  double cell_weight(int cell, const Point& x) const;
  Point cell_weight_gradient(int cell, const Point& x) const;

  std::shared_ptr<const SimplicialMesh> mesh_;
  std::unique_ptr<PointLocator> locator_;
  Mollifier mu_;
  std::vector<double> h_;
  double radius_ = 0.0, h_min_ = 0.0, h_max_ = 0.0, lip_ = 0.0, c_h_ = 1.0;
  bool constant_ = false;
};

}  // namespace feec
