#include <doctest.h>

#include <cmath>
#include <random>

#include "feec/quadrature.hpp"
#include "feec/whitney.hpp"

using namespace feec;

namespace {

MeshedDomain reference_triangle() {
  auto m = std::make_shared<SimplicialMesh>(2, std::vector<Point>{make_point(0, 0), make_point(1, 0), make_point(0, 1)},
                                            std::vector<Simplex>{{0, 1, 2}});
  return {m, std::make_shared<BoundaryPartition>(*m, std::vector<int>{})};
}

FormField const_one_form(double a, double b) {
  Coeffs c(2);
  c << a, b;
  return constant_form_field(2, 1, c);
}

Vector random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(g);
  return v;
}

// direct quadrature of |u_h|^2 through pointwise evaluation
double direct_norm2(const Cochain& c) {
  const auto& mesh = c.space->mesh();
  const auto& rule = simplex_rule(2, 8);
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.num_simplices(2); ++t) {
    const auto& sv = mesh.simplex(2, t);
    const Point v0 = mesh.vertex(static_cast<std::size_t>(sv[0]));
    const auto f = mesh.edge_frame(2, t);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = v0 + f * rule.points[q];
      s += rule.weights[q] * 2.0 * mesh.volume(2, t) * whitney_evaluate(c, x, t).squaredNorm();
    }
  }
  return s;
}

}  // namespace

TEST_CASE("partition of unity") {
  FEComplex fe(make_box_mesh(2, 3, PatchSpec{}));
  Cochain ones{&fe.space(0), Vector::Ones(static_cast<Eigen::Index>(fe.space(0).size()))};
  std::mt19937 g(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 50; ++i) CHECK(whitney_evaluate(ones, make_point(u(g), u(g)))(0) == doctest::Approx(1.0));
}

TEST_CASE("interpolated dx on the reference triangle") {
  FEComplex fe(reference_triangle());
  const auto c = canonical_interpolant(fe.space(1), const_one_form(1, 0));
  const Coeffs v = whitney_evaluate(c, make_point(1.0 / 3, 1.0 / 3), 0);
  CHECK(v(0) == doctest::Approx(1.0));
  CHECK(v(1) == doctest::Approx(0.0).epsilon(1e-14));
  // edge from (1,0) to (0,1): integral of dx is -1
  const int e = fe.space(1).mesh().index_of({1, 2});
  CHECK(c.coeffs(fe.space(1).dof_of(static_cast<std::size_t>(e))) == doctest::Approx(-1.0));
}

TEST_CASE("top-degree Whitney form is one over the area") {
  FEComplex fe(make_box_mesh(2, 2, PatchSpec{}));
  Cochain c{&fe.space(2), Vector::Zero(static_cast<Eigen::Index>(fe.space(2).size()))};
  c.coeffs(3) = 1.0;
  const auto& m = fe.space(2).mesh();
  const auto& s = m.simplex(2, 3);
  Point bc = (m.vertex(static_cast<std::size_t>(s[0])) + m.vertex(static_cast<std::size_t>(s[1])) + m.vertex(static_cast<std::size_t>(s[2]))) / 3.0;
  CHECK(whitney_evaluate(c, bc, 3)(0) == doctest::Approx(1.0 / m.volume(2, 3)));
  const auto& s2 = m.simplex(2, 2);
  const Point bc2 = (m.vertex(static_cast<std::size_t>(s2[0])) + m.vertex(static_cast<std::size_t>(s2[1])) + m.vertex(static_cast<std::size_t>(s2[2]))) / 3.0;
  CHECK(whitney_evaluate(c, bc2, 2)(0) == doctest::Approx(0.0));
}

TEST_CASE("constant forms are reproduced") {
  FEComplex fe(make_box_mesh(2, 3, PatchSpec{}));
  const auto c1 = canonical_interpolant(fe.space(1), const_one_form(0.7, -1.3));
  Coeffs area(1);
  area << 2.5;
  const auto c2 = canonical_interpolant(fe.space(2), constant_form_field(2, 2, area));
  std::mt19937 g(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 40; ++i) {
    const Point x = make_point(u(g), u(g));
    const Coeffs v = whitney_evaluate(c1, x);
    CHECK(v(0) == doctest::Approx(0.7));
    CHECK(v(1) == doctest::Approx(-1.3));
    CHECK(whitney_evaluate(c2, x)(0) == doctest::Approx(2.5));
  }
}

TEST_CASE("interpolation commutes with d for polynomial data") {
  FEComplex fe(make_box_mesh(2, 4, PatchSpec{}));
  FormField x;
  x.dim = 2;
  x.degree = 0;
  x.eval = [](const Point& p) { Coeffs c(1); c << p(0); return c; };
  const auto i0 = canonical_interpolant(fe.space(0), x);
  const auto i1 = canonical_interpolant(fe.space(1), const_one_form(1, 0));
  const SparseMatrix d = exterior_derivative(fe.space(0), fe.space(1));
  CHECK((d * i0.coeffs - i1.coeffs).norm() < 1e-13);
}

TEST_CASE("d maps constrained spaces into constrained spaces") {
  FEComplex fe(make_box_mesh(2, 3, PatchSpec::parse("left,top")));
  const SparseMatrix d0 = exterior_derivative(fe.space(0), fe.space(1));
  const SparseMatrix d1 = exterior_derivative(fe.space(1), fe.space(2));
  CHECK(d0.rows() == static_cast<Eigen::Index>(fe.space(1).size()));
  CHECK(d0.cols() == static_cast<Eigen::Index>(fe.space(0).size()));
  CHECK(SparseMatrix(d1 * d0).norm() == 0.0);
  // the number of DOFs equals the number of free simplices
  const auto& part = fe.space(1).partition();
  std::size_t free_edges = 0;
  for (std::size_t e = 0; e < fe.space(1).mesh().num_simplices(1); ++e)
    if (!part.in_closure_T(1, e)) ++free_edges;
  CHECK(fe.space(1).size() == free_edges);
}

TEST_CASE("P1 mass matrix on the reference triangle") {
  FEComplex fe(reference_triangle());
  const Eigen::MatrixXd m = Eigen::MatrixXd(mass_matrix(fe.space(0)));
  // int lambda_i lambda_j = 2|T| (1 + delta_ij) / 4!
  const double area = 0.5;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(m(i, j) == doctest::Approx(2.0 * area * (i == j ? 2.0 : 1.0) / 24.0));
}

TEST_CASE("mass matrices agree with direct quadrature") {
  FEComplex fe(make_box_mesh(2, 3, PatchSpec::parse("bottom")));
  for (int k = 0; k <= 2; ++k) {
    const SparseMatrix m = mass_matrix(fe.space(k));
    CHECK((Eigen::MatrixXd(m) - Eigen::MatrixXd(m).transpose()).norm() < 1e-14);
    for (unsigned seed = 0; seed < 3; ++seed) {
      Cochain c{&fe.space(k), random_vector(static_cast<Eigen::Index>(fe.space(k).size()), seed + 10 * static_cast<unsigned>(k))};
      const double viam = c.coeffs.dot(m * c.coeffs);
      CHECK(std::abs(viam - direct_norm2(c)) <= 1e-10 * std::max(1.0, viam));
    }
  }
}

TEST_CASE("L2 norms of simple forms on the square") {
  FEComplex fe(make_box_mesh(2, 4, PatchSpec{}));
  const SparseMatrix m0 = mass_matrix(fe.space(0)), m1 = mass_matrix(fe.space(1));
  Cochain zero{&fe.space(1), Vector::Zero(static_cast<Eigen::Index>(fe.space(1).size()))};
  CHECK(l2_norm(zero, m1) == 0.0);
  Cochain one{&fe.space(0), Vector::Ones(static_cast<Eigen::Index>(fe.space(0).size()))};
  CHECK(l2_norm(one, m0) == doctest::Approx(2.0));  // sqrt(area 4)
  const auto dx = canonical_interpolant(fe.space(1), const_one_form(1, 0));
  CHECK(l2_norm(dx, m1) == doctest::Approx(2.0));
  CHECK(linf_norm_sampled(dx) == doctest::Approx(1.0));
}

TEST_CASE("tangential traces vanish on the patch") {
  FEComplex fe(make_box_mesh(2, 4, PatchSpec::parse("left,bottom")));
  const auto& sp = fe.space(1);
  Cochain c{&sp, random_vector(static_cast<Eigen::Index>(sp.size()), 77)};
  Cochain c0{&fe.space(0), random_vector(static_cast<Eigen::Index>(fe.space(0).size()), 78)};
  const auto& mesh = sp.mesh();
  for (int e : sp.partition().gamma_T()) {
    const auto& s = mesh.simplex(1, static_cast<std::size_t>(e));
    const Point a = mesh.vertex(static_cast<std::size_t>(s[0])), b = mesh.vertex(static_cast<std::size_t>(s[1]));
    const int cell = mesh.cofaces(1, static_cast<std::size_t>(e))[0];
    for (double t : {0.1, 0.5, 0.8}) {
      const Point x = a + t * (b - a);
      CHECK(std::abs(whitney_evaluate(c, x, static_cast<std::size_t>(cell)).dot(b - a)) < 1e-13);
      CHECK(std::abs(whitney_evaluate(c0, x, static_cast<std::size_t>(cell))(0)) < 1e-13);
    }
  }
}

TEST_CASE("cochain JSON round trip") {
  FEComplex fe(make_box_mesh(2, 2, PatchSpec::parse("left")));
  Cochain c{&fe.space(1), random_vector(static_cast<Eigen::Index>(fe.space(1).size()), 4)};
  const auto doc = cochain_to_json(c);
  CHECK((cochain_from_json(fe.space(1), doc) - c.coeffs).norm() == 0.0);
}
