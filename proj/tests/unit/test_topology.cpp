#include <doctest.h>

#include <Eigen/Dense>

#include "feec/mesh.hpp"
#include "feec/topology.hpp"

using namespace feec;

namespace {

// Independent oracle: floating rank by full-pivot LU of the dense matrix.
long dense_rank(const IncidenceMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd(m.cast<double>());
  if (d.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
  lu.setThreshold(1e-9);
  return lu.rank();
}

}  // namespace

TEST_CASE("single triangle incidence") {
  SimplicialMesh m(2, {make_point(0, 0), make_point(1, 0), make_point(0, 1)}, {{0, 1, 2}});
  const auto d0 = incidence_matrix(m, 0);
  CHECK(d0.rows() == 3);
  CHECK(d0.cols() == 3);
  const Eigen::MatrixXi dd = Eigen::MatrixXi(d0);
  for (int r = 0; r < 3; ++r) CHECK(dd.row(r).sum() == 0);
  const auto d1 = incidence_matrix(m, 1);
  CHECK(Eigen::MatrixXi(d1 * d0).isZero());
}

TEST_CASE("dd = 0 on refined meshes with patches") {
  auto d = make_box_mesh(2, 3, PatchSpec::parse("left,bottom"));
  const auto ds = incidence_matrices(*d.mesh);
  CHECK(Eigen::MatrixXi(ds[1] * ds[0]).isZero());
  RelativeComplex rc(*d.mesh, *d.partition);
  CHECK(Eigen::MatrixXi(rc.d(1) * rc.d(0)).isZero());
}

TEST_CASE("exact rank agrees with a dense oracle") {
  auto d = make_box_mesh(2, 1, PatchSpec{});
  CHECK(exact_rank(incidence_matrix(*d.mesh, 0)) == 3);
  auto e = make_box_mesh(2, 4, PatchSpec::parse("top"));
  RelativeComplex rc(*e.mesh, *e.partition);
  for (int k = 0; k < 2; ++k) CHECK(exact_rank(rc.d(k)) == dense_rank(rc.d(k)));
}

TEST_CASE("relative Betti numbers of the square") {
  auto b = [](const char* patch, int div = 2) {
    auto d = make_box_mesh(2, div, PatchSpec::parse(patch));
    return betti_relative(*d.mesh, *d.partition);
  };
  CHECK(b("none") == std::vector<long>{1, 0, 0});
  CHECK(b("left,right") == std::vector<long>{0, 1, 0});
  CHECK(b("all") == std::vector<long>{0, 0, 1});
  CHECK(b("left") == std::vector<long>{0, 0, 0});
  CHECK(b("left,bottom") == std::vector<long>{0, 0, 0});
  // three disjoint pieces of the boundary: b_1 = M - 1
  CHECK(b("left[-1:0],right,top[-0.5:0.5]", 4) == std::vector<long>{0, 2, 0});
}

TEST_CASE("Betti numbers are invariant under refinement") {
  auto d = make_box_mesh(2, 2, PatchSpec::parse("left,right"));
  for (int level = 0; level < 3; ++level) {
    CHECK(betti_relative(*d.mesh, *d.partition) == std::vector<long>{0, 1, 0});
    d = refine_uniform(d);
  }
}

TEST_CASE("Poincare-Lefschetz duality and Euler characteristic") {
  for (const char* p : {"none", "left", "left,right", "left,bottom", "left,right,top", "all", "left[-1:0],right"}) {
    auto d = make_box_mesh(2, 4, PatchSpec::parse(p));
    const auto rep = verify_poincare_lefschetz(*d.mesh, *d.partition);
    CHECK_MESSAGE(rep.holds, p);
    RelativeComplex rc(*d.mesh, *d.partition);
    long alt = 0;
    for (int k = 0; k <= 2; ++k) alt += (k % 2 == 0 ? 1 : -1) * rep.b_T[static_cast<std::size_t>(k)];
    CHECK(alt == relative_euler_characteristic(rc));
  }
}
