#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "feec/projection.hpp"
#include "feec/sample_fields.hpp"
#include "feec/smoothing_checks.hpp"

using namespace feec;

namespace {

void print_failures(const CheckReport& r) {
  for (const auto& m : r.items)
    if (!m.pass) MESSAGE(m.name << " = " << m.value << " (bound " << m.bound << ")");
}

}  // namespace

TEST_CASE("smoothed projection on a coarse mesh") {
  const BoxGeometry geo({BoxFace::Left});
  const FEComplex fe(make_box_mesh(2, 4, PatchSpec::parse("left")));
  const SmoothedProjection pi(fe, geo);
  CHECK(pi.epsilon() > 0.0);
  CHECK(pi.attempts().back().accepted);
  for (int k = 0; k <= 2; ++k) CHECK(pi.defect(k) < 1.0);

  // identity on the free DOFs
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 0; k <= 2; ++k) {
    Vector v(static_cast<Eigen::Index>(fe.space(k).size()));
    for (auto& x : v) x = g(rng);
    CHECK((pi.apply(k, v) - v).norm() <= 1e-8 * v.norm());
  }
}

TEST_CASE("projection check battery on a coarse mesh") {
  const BoxGeometry geo({BoxFace::Left});
  const FEComplex fe(make_box_mesh(2, 4, PatchSpec::parse("left")));
  const SmoothedProjection pi(fe, geo);
  ProjectionCheckOptions co;
  co.measure_norm = false;
  co.smooth_fields = 3;
  co.random_inputs = 2;
  const auto rep = check_projection(pi, geo, co);
  if (!rep.pass()) print_failures(rep);
  CHECK(rep.pass());
}

TEST_CASE("epsilon search rejects an inadmissible forced epsilon") {
  const FEComplex fe(make_box_mesh(2, 4, PatchSpec::parse("left")));
  ProjectionOptions po;
  po.epsilon = 5.0;
  po.max_halvings = 0;
  CHECK_THROWS_AS(SmoothedProjection(fe, BoxGeometry({BoxFace::Left}), po), ProjectionError);
}

namespace {

FormField sine_x_form() {
  constexpr double w = std::numbers::pi / 2.0;
  FormField u;
  u.dim = 2;
  u.degree = 0;
  u.eval = [](const Point& x) {
    Coeffs c(1);
    c << std::sin(w * (x(0) + 1.0));
    return c;
  };
  auto du = std::make_shared<FormField>();
  du->dim = 2;
  du->degree = 1;
  du->eval = [](const Point& x) {
    Coeffs c(2);
    c << w * std::cos(w * (x(0) + 1.0)), 0.0;
    return c;
  };
  du->derivative = std::make_shared<FormField>(zero_form_field(2, 2));
  u.derivative = du;
  return u;
}

}  // namespace

TEST_CASE("density table: zero and constant fields") {
  const auto h = std::make_shared<MeshSizeFunction>(make_box_mesh(2, 16, PatchSpec::parse("left")).mesh);
  for (const auto& r : density_table(BoxGeometry({BoxFace::Left}), h, zero_form_field(2, 0), {0.2, 0.1}))
    CHECK(r.total() == 0.0);
  Coeffs c(1);
  c << 0.7;
  for (const auto& r : density_table(BoxGeometry({}), h, constant_form_field(2, 0, c), {0.2, 0.1}))
    CHECK(r.total() <= 1e-6);
}

TEST_CASE("density table: sine with zero trace on the left face") {
  // du has a normal component on the right face; the reflected extension
  // jumps there and the derivative error only decays like sqrt(eps)
  const auto h = std::make_shared<MeshSizeFunction>(make_box_mesh(2, 16, PatchSpec::parse("left")).mesh);
  const auto rows = density_table(BoxGeometry({BoxFace::Left}), h, sine_x_form(), {0.2, 0.1, 0.05, 0.025});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    MESSAGE("eps " << rows[i].epsilon << " total " << rows[i].total());
    CHECK(rows[i - 1].error_u / rows[i].error_u >= 1.5);
    CHECK(rows[i - 1].total() / rows[i].total() >= 1.3);
  }
}
