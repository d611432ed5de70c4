#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "feec/forms.hpp"

namespace feec {

/// Sorted vertex-index tuple. The orientation of a k-simplex, k < n, is the
/// one of its sorted tuple; n-simplices carry the ambient orientation.
using Simplex = std::vector<int>;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite simplicial complex triangulating a closed domain in R^n.
/// Immutable after construction.
class SimplicialMesh {
 public:
  /// Builds the full face closure from the top-dimensional cells.
  SimplicialMesh(int dim, std::vector<Point> vertices, std::vector<Simplex> cells);

  int dim() const { return dim_; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_simplices(int k) const { return simplices_.at(static_cast<std::size_t>(k)).size(); }
  const std::vector<Simplex>& simplices(int k) const { return simplices_.at(static_cast<std::size_t>(k)); }
  const Simplex& simplex(int k, std::size_t i) const { return simplices_[static_cast<std::size_t>(k)][i]; }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }

  std::optional<int> find(const Simplex& sorted) const;
  int index_of(const Simplex& sorted) const;

  /// (k-1)-faces of k-simplex i; entry j omits local vertex j.
  const std::vector<int>& faces(int k, std::size_t i) const { return faces_[static_cast<std::size_t>(k)][i]; }
  /// (k+1)-simplices having k-simplex i as a face.
  const std::vector<int>& cofaces(int k, std::size_t i) const { return cofaces_[static_cast<std::size_t>(k)][i]; }
  /// n-simplices containing vertex v.
  const std::vector<int>& vertex_cells(std::size_t v) const { return vertex_cells_[v]; }

  /// +1 if the sorted vertex order of cell i is positively oriented in R^n.
  int cell_orientation(std::size_t i) const { return orientation_[i]; }

  /// Unsigned k-volume of k-simplex i (1 for vertices).
  double volume(int k, std::size_t i) const;
  double diameter(int k, std::size_t i) const;

  /// (n-1)-simplices with exactly one coface.
  const std::vector<int>& boundary_facets() const { return boundary_facets_; }
  bool is_boundary_facet(std::size_t i) const { return on_boundary_[i] != 0; }

  /// Edge vectors v_j - v_0 of k-simplex i as columns.
  VectorFrame edge_frame(int k, std::size_t i) const;

  /// Bounding box of all vertices.
  Point bbox_min() const { return bbox_min_; }
  Point bbox_max() const { return bbox_max_; }

 private:
  int dim_;
  std::vector<Point> vertices_;
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, int>> lookup_;
  std::vector<std::vector<std::vector<int>>> faces_;
  std::vector<std::vector<std::vector<int>>> cofaces_;
  std::vector<std::vector<int>> vertex_cells_;
  std::vector<int> orientation_;
  std::vector<int> boundary_facets_;
  std::vector<char> on_boundary_;
  Point bbox_min_, bbox_max_;
};

/// Admissible boundary partition (Gamma_T, Gamma_I, Gamma_N) realized on the
/// boundary facets. gamma_T triangulates the closure of Gamma_T.
class BoundaryPartition {
 public:
  BoundaryPartition() = default;
  BoundaryPartition(const SimplicialMesh& mesh, std::vector<int> gamma_T_facets);

  const std::vector<int>& gamma_T() const { return gamma_T_; }
  const std::vector<int>& gamma_N() const { return gamma_N_; }
  /// Interface simplices of dimension k <= n-2 shared by both closures.
  const std::vector<int>& gamma_I(int k) const { return gamma_I_.at(static_cast<std::size_t>(k)); }
  /// Whether k-simplex i lies in the face closure of gamma_T.
  bool in_closure_T(int k, std::size_t i) const { return closure_T_[static_cast<std::size_t>(k)][i] != 0; }
  bool in_closure_N(int k, std::size_t i) const { return closure_N_[static_cast<std::size_t>(k)][i] != 0; }

  /// The complementary partition, with the roles of Gamma_T and Gamma_N swapped.
  BoundaryPartition complement(const SimplicialMesh& mesh) const;

  int dim() const { return dim_; }

 private:
  int dim_ = 0;
  std::vector<int> gamma_T_, gamma_N_;
  std::vector<std::vector<int>> gamma_I_;
  std::vector<std::vector<char>> closure_T_, closure_N_;
};

/// Mesh and patch, shared by all downstream spaces.
struct MeshedDomain {
  std::shared_ptr<const SimplicialMesh> mesh;
  std::shared_ptr<const BoundaryPartition> partition;
};

/// Box face names: in 2D left (x=-1), right (x=1), bottom (y=-1), top (y=1);
/// in 1D left and right.
enum class BoxFace { Left, Right, Bottom, Top };

/// A piece of the box boundary: a whole face or, in 2D, the part of a face
/// whose tangential coordinate lies in [lo, hi].
struct PatchSegment {
  BoxFace face;
  double lo = -1.0;
  double hi = 1.0;
};

struct PatchSpec {
  std::vector<PatchSegment> segments;

  /// Grammar: comma separated tokens `face` or `face[lo:hi]`, or the words
  /// `none` / `all`. Faces: left, right, bottom, top.
  static PatchSpec parse(const std::string& text);
  std::string to_string() const;
  bool whole_faces_only() const;
  /// Faces fully contained in the patch.
  std::vector<BoxFace> whole_faces() const;
};

std::string face_name(BoxFace f);

/// Uniform triangulation of [-1,1]^n, n in {1,2}, with `divisions` cells per axis.
MeshedDomain make_box_mesh(int dim, int divisions, const PatchSpec& patch);

/// Red refinement: each triangle split into four at edge midpoints; gamma_T inherited.
MeshedDomain refine_uniform(const MeshedDomain& domain);

/// Moves every vertex x -> x + a sin(pi x) in the first coordinate. The box
/// and its faces are kept, the cells are graded in x. Requires |a| < 1/pi.
MeshedDomain grade_box_mesh(const MeshedDomain& domain, double amplitude);

/// Euler characteristic V - E + F (alternating simplex count).
long euler_characteristic(const SimplicialMesh& mesh);

}  // namespace feec
