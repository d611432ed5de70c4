#include <doctest.h>

#include <cmath>

#include "feec/forms.hpp"
#include "feec/quadrature.hpp"

using namespace feec;

TEST_CASE("gauss-legendre integrates monomials exactly") {
  for (int q = 1; q <= 8; ++q) {
    const auto g = gauss_legendre(q);
    for (int p = 0; p <= 2 * q - 1; ++p) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("simplex rule matches the Dirichlet moment formula") {
  // int_{ref triangle} x^a y^b = a! b! / (a + b + 2)!
  auto fact = [](int m) { double f = 1; for (int i = 2; i <= m; ++i) f *= i; return f; };
  const auto& r = simplex_rule(2, 6);
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q](0), a) * std::pow(r.points[q](1), b);
      CHECK(s == doctest::Approx(fact(a) * fact(b) / fact(a + b + 2)).epsilon(1e-13));
    }
  const auto& r1 = simplex_rule(1, 6);
  double s = 0.0;
  for (std::size_t q = 0; q < r1.points.size(); ++q) s += r1.weights[q] * std::pow(r1.points[q](0), 6);
  CHECK(s == doctest::Approx(1.0 / 7.0).epsilon(1e-13));
}

TEST_CASE("pullback of dx^dy is the Jacobian determinant") {
  Jacobian j(2, 2);
  j << 2.0, 1.0, 0.5, 3.0;
  Coeffs u(1);
  u << 1.0;
  CHECK(pullback(j, u, 2)(0) == doctest::Approx(5.5));
  Coeffs w(2);
  w << 1.0, -2.0;  // dx - 2 dy
  const Coeffs p = pullback(j, w, 1);
  // (J^T w)
  CHECK(p(0) == doctest::Approx(2.0 - 1.0));
  CHECK(p(1) == doctest::Approx(1.0 - 6.0));
}

TEST_CASE("wedge and hodge star in 2D") {
  Coeffs dx(2), dy(2);
  dx << 1, 0;
  dy << 0, 1;
  CHECK(wedge(2, dx, 1, dy, 1)(0) == doctest::Approx(1.0));
  CHECK(wedge(2, dy, 1, dx, 1)(0) == doctest::Approx(-1.0));
  CHECK(wedge(2, dx, 1, dx, 1)(0) == doctest::Approx(0.0));
  const Coeffs s = hodge_star_2d(dx, 1);
  CHECK(s(0) == doctest::Approx(0.0));
  CHECK(s(1) == doctest::Approx(1.0));
  // star star = (-1)^{k(n-k)} on 1-forms
  const Coeffs ss = hodge_star_2d(s, 1);
  CHECK(ss(0) == doctest::Approx(-1.0));
}

TEST_CASE("finite-difference d of x dy is dx^dy") {
  auto f = [](const Point& x) { Coeffs c(2); c << 0.0, x(0); return c; };
  const Coeffs d = finite_difference_d(f, 2, 1, make_point(0.3, -0.2), 1e-5);
  CHECK(d(0) == doctest::Approx(1.0).epsilon(1e-8));
  auto g = [](const Point& x) { Coeffs c(1); c << x(0) * x(0) * x(1); return c; };
  const Coeffs dg = finite_difference_d(g, 2, 0, make_point(0.5, 2.0), 1e-5);
  CHECK(dg(0) == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(dg(1) == doctest::Approx(0.25).epsilon(1e-8));
}
