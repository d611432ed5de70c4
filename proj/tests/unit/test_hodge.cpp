#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "feec/hodge.hpp"

using namespace feec;

namespace {

Vector random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 g(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(g);
  return v;
}

double m_angle_deg(const Vector& a, const Vector& b, const SparseMatrix& m) {
  const double c = std::abs(a.dot(m * b)) / std::sqrt(a.dot(m * a) * b.dot(m * b));
  return std::acos(std::min(1.0, c)) * 180.0 / std::numbers::pi;
}

FormField sine_product(double scale) {
  FormField f;
  f.dim = 2;
  f.degree = 0;
  f.eval = [scale](const Point& x) {
    Coeffs c(1);
    c << scale * std::sin(std::numbers::pi * (x(0) + 1) / 2) * std::sin(std::numbers::pi * (x(1) + 1) / 2);
    return c;
  };
  return f;
}

}  // namespace

TEST_CASE("harmonic dimensions on the square") {
  FEComplex fe(make_box_mesh(2, 4, PatchSpec{}));
  HodgeComplex h0(fe, 0), h1(fe, 1);
  const auto b0 = harmonic_basis(h0);
  CHECK(b0.vectors.cols() == 1);
  const Vector v = b0.vectors.col(0);
  CHECK((v.array() - v(0)).abs().maxCoeff() < 1e-10);  // constant
  CHECK(harmonic_basis(h1).vectors.cols() == 0);
}

TEST_CASE("harmonic 1-form with opposite faces approaches dx") {
  double prev = 90.0;
  for (int div : {4, 8, 16}) {
    FEComplex fe(make_box_mesh(2, div, PatchSpec::parse("left,right")));
    HodgeComplex h(fe, 1);
    const auto hb = harmonic_basis(h);
    REQUIRE(hb.vectors.cols() == 1);
    const Vector q = hb.vectors.col(0);
    CHECK((h.d() * q).norm() < 1e-10);
    CHECK((h.d_prev().transpose() * (h.mass() * q)).norm() < 1e-10);
    Coeffs dx(2);
    dx << 1, 0;
    const auto idx = canonical_interpolant(fe.space(1), constant_form_field(2, 1, dx));
    const double ang = m_angle_deg(q, idx.coeffs, h.mass());
    if (div == 8) CHECK(ang < 10.0);
    CHECK(ang <= prev);
    prev = ang;
  }
}

TEST_CASE("Hodge decomposition") {
  FEComplex fe(make_box_mesh(2, 6, PatchSpec::parse("left,right")));
  for (int k = 0; k <= 2; ++k) {
    HodgeComplex h(fe, k);
    const auto hb = harmonic_basis(h);
    const SparseMatrix& m = h.mass();
    for (unsigned seed = 0; seed < 5; ++seed) {
      const Vector u = random_vector(static_cast<Eigen::Index>(h.space().size()), seed);
      const auto p = hodge_decompose(h, hb, u);
      const double un = std::sqrt(u.dot(m * u));
      CHECK((p.exact + p.harmonic + p.coexact - u).norm() <= 1e-9 * u.norm());
      CHECK(std::abs(p.exact.dot(m * p.harmonic)) <= 1e-9 * un * un);
      CHECK(std::abs(p.exact.dot(m * p.coexact)) <= 1e-9 * un * un);
      CHECK(std::abs(p.harmonic.dot(m * p.coexact)) <= 1e-9 * un * un);
      if (h.has_next()) CHECK((h.d() * p.harmonic).norm() <= 1e-9 * un);
    }
    if (h.has_prev()) {
      const Vector a = random_vector(static_cast<Eigen::Index>(h.prev_space().size()), 42);
      const Vector u = h.d_prev() * a;
      const auto p = hodge_decompose(h, hb, u);
      CHECK(p.harmonic.norm() <= 1e-9 * u.norm());
      CHECK(p.coexact.norm() <= 1e-9 * u.norm());
    }
  }
}

TEST_CASE("mixed solve with harmonic load") {
  FEComplex fe(make_box_mesh(2, 6, PatchSpec::parse("left,right")));
  HodgeComplex h(fe, 1);
  const auto hb = harmonic_basis(h);
  const Vector q = hb.vectors.col(0);
  const auto sol = solve_mixed_hodge(h, hb, h.mass() * q);
  CHECK(sol.u.norm() < 1e-8);
  CHECK(sol.sigma.norm() < 1e-8);
  CHECK((sol.p_cochain - q).norm() < 1e-8);
}

TEST_CASE("k=0 Dirichlet manufactured solution converges at second order") {
  std::vector<double> err;
  for (int div : {4, 8, 16}) {
    FEComplex fe(make_box_mesh(2, div, PatchSpec::parse("all")));
    HodgeComplex h(fe, 0);
    const auto hb = harmonic_basis(h);
    const double lam = std::numbers::pi * std::numbers::pi / 2.0;
    const auto sol = solve_mixed_hodge(h, hb, load_vector(fe.space(0), sine_product(lam)));
    CHECK(sol.residual_u <= 1e-9 * sol.rhs_norm);
    err.push_back(l2_error(Cochain{&fe.space(0), sol.u}, sine_product(1.0)));
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.15));
  CHECK(err[1] / err[2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("mixed Poisson at top degree conserves the load") {
  FEComplex fe(make_box_mesh(2, 6, PatchSpec{}));
  HodgeComplex h(fe, 2);
  const auto hb = harmonic_basis(h);
  CHECK(hb.betti == 0);
  const Vector f = random_vector(static_cast<Eigen::Index>(h.space().size()), 9);
  const auto sol = solve_mixed_hodge(h, hb, f);
  CHECK((h.mass() * (h.d_prev() * sol.sigma + sol.p_cochain) - f).norm() <= 1e-10 * f.norm());
}

TEST_CASE("Poincare constants of the square") {
  FEComplex fe(make_box_mesh(2, 16, PatchSpec::parse("all")));
  HodgeComplex h(fe, 0);
  const double cd = poincare_constant(h, harmonic_basis(h));
  CHECK(cd == doctest::Approx(std::sqrt(2.0) / std::numbers::pi).epsilon(0.02));
  FEComplex fn(make_box_mesh(2, 16, PatchSpec{}));
  HodgeComplex hn(fn, 0);
  const double cn = poincare_constant(hn, harmonic_basis(hn));
  CHECK(cn == doctest::Approx(2.0 / std::numbers::pi).epsilon(0.02));
  FEComplex fc(make_box_mesh(2, 8, PatchSpec::parse("all")));
  HodgeComplex hc(fc, 0);
  CHECK(cd >= poincare_constant(hc, harmonic_basis(hc)) - 1e-6);
}
