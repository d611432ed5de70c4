#include "feec/sample_fields.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace feec {

namespace {

struct Wave {
  double a, b, c, amp;
};

struct Scalar {
  double v;
  double dx, dy;
};

Scalar face_factor(const std::vector<BoxFace>& faces, int order, const Point& x) {
  Scalar s{1.0, 0.0, 0.0};
  if (order == 0) return s;
  for (auto f : faces) {
    double g = 0.0, gx = 0.0, gy = 0.0;
    switch (f) {
      case BoxFace::Left: g = x(0) + 1.0; gx = 1.0; break;
      case BoxFace::Right: g = 1.0 - x(0); gx = -1.0; break;
      case BoxFace::Bottom: g = x(1) + 1.0; gy = 1.0; break;
      case BoxFace::Top: g = 1.0 - x(1); gy = -1.0; break;
    }
    const double p = std::pow(g, order), dp = order * std::pow(g, order - 1);
    s = {s.v * p, s.dx * p + s.v * dp * gx, s.dy * p + s.v * dp * gy};
  }
  return s;
}

Scalar coefficient(const Wave& w, const std::vector<BoxFace>& faces, int order, const Point& x) {
  const double arg = w.a * x(0) + w.b * x(1) + w.c;
  const double s = w.amp * std::sin(arg), c = w.amp * std::cos(arg);
  const Scalar phi = face_factor(faces, order, x);
  return {phi.v * s, phi.dx * s + phi.v * c * w.a, phi.dy * s + phi.v * c * w.b};
}

// uniform in [lo, hi) from the raw 64-bit engine output, independent of the
// standard library's distribution implementation
double draw(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace

FormField trig_form(int k, std::uint64_t seed, const std::vector<BoxFace>& vanish_on, int order) {
  if (k < 0 || k > 2) throw std::invalid_argument("trig_form: degree must be 0, 1 or 2");
  if (order < 0) throw std::invalid_argument("trig_form: negative order");
  std::mt19937_64 g(seed);
  std::array<Wave, 2> w{};
  for (auto& wi : w) wi = {draw(g, 0.5, 2.5), draw(g, -2.0, 2.0), draw(g, 0.0, 6.283185307179586), draw(g, 0.5, 1.5)};
  const auto faces = vanish_on;

  FormField u;
  u.dim = 2;
  u.degree = k;
  if (k == 0) {
    u.eval = [w, faces, order](const Point& x) {
      Coeffs c(1);
      c << coefficient(w[0], faces, order, x).v;
      return c;
    };
    auto du = std::make_shared<FormField>();
    du->dim = 2;
    du->degree = 1;
    du->eval = [w, faces, order](const Point& x) {
      const Scalar s = coefficient(w[0], faces, order, x);
      Coeffs c(2);
      c << s.dx, s.dy;
      return c;
    };
    du->derivative = std::make_shared<FormField>(zero_form_field(2, 2));
    u.derivative = du;
  } else if (k == 1) {
    u.eval = [w, faces, order](const Point& x) {
      Coeffs c(2);
      c << coefficient(w[0], faces, order, x).v, coefficient(w[1], faces, order, x).v;
      return c;
    };
    auto du = std::make_shared<FormField>();
    du->dim = 2;
    du->degree = 2;
    du->eval = [w, faces, order](const Point& x) {
      Coeffs c(1);
      c << coefficient(w[1], faces, order, x).dx - coefficient(w[0], faces, order, x).dy;
      return c;
    };
    u.derivative = du;
  } else {
    u.eval = [w, faces, order](const Point& x) {
      Coeffs c(1);
      c << coefficient(w[0], faces, order, x).v;
      return c;
    };
  }
  return u;
}

FormField x_dy_form() {
  FormField u;
  u.dim = 2;
  u.degree = 1;
  u.eval = [](const Point& x) {
    Coeffs c(2);
    c << 0.0, x(0);
    return c;
  };
  Coeffs one(1);
  one << 1.0;
  u.derivative = std::make_shared<FormField>(constant_form_field(2, 2, one));
  return u;
}

FormField sine_product_form(double scale) {
  constexpr double w = std::numbers::pi / 2.0;
  FormField u;
  u.dim = 2;
  u.degree = 0;
  u.eval = [scale](const Point& x) {
    Coeffs c(1);
    c << scale * std::sin(w * (x(0) + 1.0)) * std::sin(w * (x(1) + 1.0));
    return c;
  };
  auto du = std::make_shared<FormField>();
  du->dim = 2;
  du->degree = 1;
  du->eval = [scale](const Point& x) {
    const double sx = std::sin(w * (x(0) + 1.0)), sy = std::sin(w * (x(1) + 1.0));
    Coeffs c(2);
    c << scale * w * std::cos(w * (x(0) + 1.0)) * sy, scale * w * sx * std::cos(w * (x(1) + 1.0));
    return c;
  };
  du->derivative = std::make_shared<FormField>(zero_form_field(2, 2));
  u.derivative = du;
  return u;
}

}  // namespace feec
