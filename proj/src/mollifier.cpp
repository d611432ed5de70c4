#include "feec/mollifier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "feec/quadrature.hpp"

namespace feec {

namespace {

double bump(double s2) { return s2 < 1.0 ? std::exp(-1.0 / (1.0 - s2)) : 0.0; }

// integral_0^1 s^{n-1} exp(-1/(1-s^2)) ds by composite Gauss
double radial_moment(int n) {
  const auto g = gauss_legendre(20);
  const int pieces = 200;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double a = static_cast<double>(p) / pieces;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double s = a + g.nodes[q] / pieces;
      sum += g.weights[q] / pieces * std::pow(s, n - 1) * bump(s * s);
    }
  }
  return sum;
}

}  // namespace

Mollifier::Mollifier(int dim) : dim_(dim) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("Mollifier: dimension must be 1, 2 or 3");
  const double sphere = dim == 1 ? 2.0 : (dim == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi);
  c_mu_ = 1.0 / (sphere * radial_moment(dim));
}

double Mollifier::value(const Point& y) const { return c_mu_ * bump(y.squaredNorm()); }

Point Mollifier::gradient(const Point& y) const {
  const double s2 = y.squaredNorm();
  if (s2 >= 1.0) return Point::Zero(y.size());
  const double q = 1.0 - s2;
  // d/dy exp(-1/q) = exp(-1/q) * (-1/q^2) * 2y
  return c_mu_ * bump(s2) * (-2.0 / (q * q)) * y;
}

double Mollifier::value_scaled(const Point& y, double r) const {
  return std::pow(r, -dim_) * value(y / r);
}

Point Mollifier::gradient_scaled(const Point& y, double r) const {
  return std::pow(r, -dim_ - 1) * gradient(y / r);
}

BallRule Mollifier::ball_rule(int radial, int angular) const {
  if (radial < 1 || (dim_ == 2 && angular < 1)) throw std::invalid_argument("ball_rule: orders must be positive");
  if (dim_ == 3) throw std::invalid_argument("ball_rule: 3D rule not provided");
  BallRule rule;
  rule.radial = radial;
  rule.angular = angular;
  const auto g = gauss_legendre(radial);
  if (dim_ == 1) {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double y = 2.0 * g.nodes[q] - 1.0;
      rule.nodes.push_back(make_point(y));
      rule.weights.push_back(2.0 * g.weights[q] * value(make_point(y)));
    }
  } else {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double s = g.nodes[q];
      for (int a = 0; a < angular; ++a) {
        const double th = 2.0 * std::numbers::pi * (a + 0.5) / angular;
        const Point y = make_point(s * std::cos(th), s * std::sin(th));
        rule.nodes.push_back(y);
        rule.weights.push_back(g.weights[q] * s * (2.0 * std::numbers::pi / angular) * value(y));
      }
    }
  }
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

double Mollifier::mass_check(double r, int cells_per_axis) const {
  const auto g = gauss_legendre(8);
  const double h = 2.0 * r / cells_per_axis;
  double sum = 0.0;
  if (dim_ == 1) {
    for (int i = 0; i < cells_per_axis; ++i)
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double x = -r + h * (i + g.nodes[q]);
        sum += h * g.weights[q] * value_scaled(make_point(x), r);
      }
    return sum;
  }
  if (dim_ != 2) throw std::invalid_argument("mass_check: 1D and 2D only");
  for (int i = 0; i < cells_per_axis; ++i)
    for (int j = 0; j < cells_per_axis; ++j)
      for (std::size_t p = 0; p < g.nodes.size(); ++p)
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          const Point y = make_point(-r + h * (i + g.nodes[p]), -r + h * (j + g.nodes[q]));
          sum += h * h * g.weights[p] * g.weights[q] * value_scaled(y, r);
        }
  return sum;
}

}  // namespace feec
