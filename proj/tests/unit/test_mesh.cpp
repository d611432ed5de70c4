#include <doctest.h>

#include <cmath>
#include <set>

#include "feec/mesh.hpp"
#include "feec/mesh_io.hpp"
#include "feec/mesh_quality.hpp"

using namespace feec;

namespace {

bool closure_holds(const SimplicialMesh& m) {
  for (int k = 1; k <= m.dim(); ++k)
    for (const auto& s : m.simplices(k))
      for (std::size_t j = 0; j < s.size(); ++j) {
        Simplex f;
        for (std::size_t q = 0; q < s.size(); ++q)
          if (q != j) f.push_back(s[q]);
        if (!m.find(f)) return false;
      }
  return true;
}

// components of a set of edges, by union-find over vertices
int edge_components(const SimplicialMesh& m, const std::vector<int>& edges) {
  std::vector<int> parent(m.num_vertices());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> root = [&](int v) { return parent[static_cast<std::size_t>(v)] == v ? v : parent[static_cast<std::size_t>(v)] = root(parent[static_cast<std::size_t>(v)]); };
  std::set<int> verts;
  for (int e : edges) {
    const auto& s = m.simplex(1, static_cast<std::size_t>(e));
    parent[static_cast<std::size_t>(root(s[0]))] = root(s[1]);
    verts.insert(s[0]);
    verts.insert(s[1]);
  }
  std::set<int> roots;
  for (int v : verts) roots.insert(root(v));
  return static_cast<int>(roots.size());
}

}  // namespace

TEST_CASE("single-division square") {
  auto d = make_box_mesh(2, 1, PatchSpec::parse("none"));
  CHECK(d.mesh->num_simplices(2) == 2);
  CHECK(d.mesh->boundary_facets().size() == 4);
  CHECK(d.partition->gamma_N().size() == 4);
  CHECK(d.partition->gamma_T().empty());
  CHECK(euler_characteristic(*d.mesh) == 1);
  CHECK(closure_holds(*d.mesh));
}

TEST_CASE("full boundary patch") {
  auto d = make_box_mesh(2, 1, PatchSpec::parse("all"));
  CHECK(d.partition->gamma_N().empty());
  CHECK(d.partition->gamma_I(0).empty());
}

TEST_CASE("opposite faces give two components of four edges") {
  auto d = make_box_mesh(2, 2, PatchSpec::parse("left,right"));
  CHECK(d.partition->gamma_T().size() == 4);
  CHECK(edge_components(*d.mesh, d.partition->gamma_T()) == 2);
  CHECK(d.partition->gamma_I(0).size() == 4);
}

TEST_CASE("partial segments must end on grid nodes") {
  CHECK_THROWS_AS(make_box_mesh(2, 2, PatchSpec::parse("left[-0.3:1]")), MeshError);
  auto d = make_box_mesh(2, 4, PatchSpec::parse("left[-1:0],left[0.5:1]"));
  CHECK(d.partition->gamma_T().size() == 3);
  CHECK(edge_components(*d.mesh, d.partition->gamma_T()) == 2);
  CHECK_THROWS_AS(PatchSpec::parse("middle"), MeshError);
}

TEST_CASE("1D box mesh") {
  auto d = make_box_mesh(1, 4, PatchSpec::parse("left"));
  CHECK(d.mesh->num_simplices(1) == 4);
  CHECK(d.partition->gamma_T().size() == 1);
  CHECK(euler_characteristic(*d.mesh) == 1);
}

TEST_CASE("cells are positively oriented after applying the orientation sign") {
  auto d = make_box_mesh(2, 3, PatchSpec{});
  for (std::size_t c = 0; c < d.mesh->num_simplices(2); ++c) {
    const auto f = d.mesh->edge_frame(2, c);
    const double det = f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
    CHECK(det * d.mesh->cell_orientation(c) > 0.0);
  }
}

TEST_CASE("degenerate and duplicate cells are rejected") {
  std::vector<Point> v{make_point(0, 0), make_point(1, 0), make_point(2, 0), make_point(0, 1)};
  CHECK_THROWS_WITH_AS(SimplicialMesh(2, v, {{0, 1, 2}}), doctest::Contains("[0,1,2]"), MeshError);
  CHECK_THROWS_AS(SimplicialMesh(2, v, {{0, 1, 3}, {3, 1, 0}}), MeshError);
}

TEST_CASE("uniform refinement") {
  auto d = make_box_mesh(2, 1, PatchSpec::parse("left"));
  auto r = refine_uniform(d);
  CHECK(r.mesh->num_simplices(2) == 8);
  CHECK(r.partition->gamma_T().size() == 2);
  CHECK(closure_holds(*r.mesh));
  CHECK(euler_characteristic(*r.mesh) == 1);
  const auto q0 = mesh_quality(*d.mesh, false), q1 = mesh_quality(*r.mesh, false);
  CHECK(q1.shape_constant <= q0.shape_constant * 1.01);
}

TEST_CASE("mesh quality of the single-division square") {
  auto d = make_box_mesh(2, 1, PatchSpec{});
  const auto q = mesh_quality(*d.mesh);
  for (double h : q.h_cell) CHECK(h == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(q.neighbor_bound == 2);
  CHECK(q.shape_constant == doctest::Approx(4.0));
  CHECK(q.epsilon_h > 0.0);
}

TEST_CASE("epsilon_h stays bounded below along a refinement chain") {
  auto d = make_box_mesh(2, 2, PatchSpec{});
  double lowest = 1.0;
  for (int level = 0; level < 4; ++level) {
    const auto q = mesh_quality(*d.mesh);
    lowest = std::min(lowest, q.epsilon_h);
    if (level < 3) d = refine_uniform(d);
  }
  CHECK(lowest > 0.1);
}

TEST_CASE("mesh-size function on a uniform mesh is the constant diameter") {
  auto d = make_box_mesh(2, 4, PatchSpec{});
  MeshSizeFunction h(d.mesh);
  CHECK(h.is_constant());
  CHECK(h(make_point(0.1, 0.7)) == doctest::Approx(std::sqrt(2.0) * 0.5));
}

TEST_CASE("mesh-size function on a graded mesh") {
  auto d = make_box_mesh(2, 6, PatchSpec{});
  std::vector<Point> v = d.mesh->vertices();
  for (auto& p : v) p(0) = p(0) + 0.15 * std::sin(M_PI * p(0));  // keeps the box, grades in x
  auto mesh = std::make_shared<SimplicialMesh>(2, v, d.mesh->simplices(2));
  MeshSizeFunction h(mesh);
  CHECK_FALSE(h.is_constant());
  double lo = 1e9, hi = 0.0, lip = 0.0;
  std::vector<Point> pts;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j <= 100; ++j) pts.push_back(make_point(-1.0 + 0.02 * i, -1.0 + 0.02 * j));
  std::vector<double> vals;
  for (const auto& p : pts) {
    const double x = h(p);
    vals.push_back(x);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo >= h.h_min() - 1e-12);
  CHECK(hi <= h.h_max() + 1e-12);
  for (std::size_t a = 0; a + 1 < pts.size(); a += 7) {
    const std::size_t b = (a * 31 + 17) % pts.size();
    if (a == b) continue;
    lip = std::max(lip, std::abs(vals[a] - vals[b]) / (pts[a] - pts[b]).norm());
  }
  CHECK(lip <= h.lipschitz());
  // gradient against central differences
  const Point x0 = make_point(0.37, -0.21);
  const double e = 1e-6;
  const Point g = h.gradient(x0);
  CHECK(g(0) == doctest::Approx((h(make_point(0.37 + e, -0.21)) - h(make_point(0.37 - e, -0.21))) / (2 * e)).epsilon(1e-4));
  CHECK(h.comparability() >= 1.0);
}

TEST_CASE("mesh JSON round trip") {
  auto d = make_box_mesh(2, 2, PatchSpec::parse("left"));
  auto doc = mesh_to_json(d);
  auto e = mesh_from_json(doc);
  CHECK(e.mesh->num_simplices(2) == d.mesh->num_simplices(2));
  CHECK(e.partition->gamma_T().size() == d.partition->gamma_T().size());
  doc["gamma_T"] = nlohmann::json::array({{0, 4}});  // interior diagonal
  CHECK_THROWS_AS(mesh_from_json(doc), MeshError);
}
