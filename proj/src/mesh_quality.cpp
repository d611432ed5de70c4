#include "feec/mesh_quality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "feec/quadrature.hpp"

namespace feec {

std::vector<int> cell_patch(const SimplicialMesh& mesh, std::size_t cell) {
  std::set<int> out;
  for (int v : mesh.simplex(mesh.dim(), cell))
    for (int c : mesh.vertex_cells(static_cast<std::size_t>(v))) out.insert(c);
  return {out.begin(), out.end()};
}

bool ball_neighborhood_contained(const SimplicialMesh& mesh, const PointLocator& loc, std::size_t cell,
                                 const std::vector<int>& patch, double eps) {
  const int n = mesh.dim();
  const auto& s = mesh.simplex(n, cell);
  const double r = eps * mesh.diameter(n, cell);
  std::vector<Point> base;
  std::vector<Point> dirs;
  if (n == 1) {
    for (int v : s) base.push_back(mesh.vertex(static_cast<std::size_t>(v)));
    dirs = {make_point(-1.0), make_point(1.0)};
  } else {
    const int per_edge = 4;
    for (std::size_t a = 0; a < s.size(); ++a) {
      const Point& p = mesh.vertex(static_cast<std::size_t>(s[a]));
      const Point& q = mesh.vertex(static_cast<std::size_t>(s[(a + 1) % s.size()]));
      for (int t = 0; t < per_edge; ++t) base.push_back(p + (q - p) * (static_cast<double>(t) / per_edge));
    }
    const int angles = 16;
    for (int a = 0; a < angles; ++a) {
      const double th = 2.0 * std::numbers::pi * a / angles;
      dirs.push_back(make_point(std::cos(th), std::sin(th)));
    }
  }
  for (const auto& b : base)
    for (const auto& d : dirs) {
      const Point x = b + r * d;
      bool in_patch = false;
      for (int c : patch)
        if (loc.contains(static_cast<std::size_t>(c), x, 1e-10)) {
          in_patch = true;
          break;
        }
      if (in_patch) continue;
      if (loc.locate(x, 1e-10)) return false;
    }
  return true;
}

MeshQuality mesh_quality(const SimplicialMesh& mesh, bool with_epsilon_h) {
  const int n = mesh.dim();
  const std::size_t nc = mesh.num_simplices(n);
  MeshQuality q;
  q.h_cell.resize(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const double vol = mesh.volume(n, i);
    if (!(vol > 0.0)) throw MeshError("degenerate simplex: cell " + std::to_string(i));
    q.h_cell[i] = mesh.diameter(n, i);
  }
  q.h_min = *std::min_element(q.h_cell.begin(), q.h_cell.end());
  q.h_max = *std::max_element(q.h_cell.begin(), q.h_cell.end());
  q.h_vertex.assign(mesh.num_vertices(), 0.0);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto& cells = mesh.vertex_cells(v);
    double s = 0.0;
    for (int c : cells) s += q.h_cell[static_cast<std::size_t>(c)];
    q.h_vertex[v] = cells.empty() ? 0.0 : s / static_cast<double>(cells.size());
  }
  std::vector<std::vector<int>> patches(nc);
  q.shape_constant = 1.0;
  for (std::size_t i = 0; i < nc; ++i) {
    patches[i] = cell_patch(mesh, i);
    q.neighbor_bound = std::max(q.neighbor_bound, static_cast<int>(patches[i].size()));
    q.shape_constant = std::max(q.shape_constant, std::pow(q.h_cell[i], n) / mesh.volume(n, i));
    for (int c : patches[i]) q.shape_constant = std::max(q.shape_constant, q.h_cell[i] / q.h_cell[static_cast<std::size_t>(c)]);
  }
  if (with_epsilon_h) {
    PointLocator loc(mesh);
    auto all_pass = [&](double eps) {
      for (std::size_t i = 0; i < nc; ++i)
        if (!ball_neighborhood_contained(mesh, loc, i, patches[i], eps)) return false;
      return true;
    };
    double lo = 0.0, hi = 1.0;
    if (all_pass(hi)) {
      lo = hi;
    } else {
      for (int step = 0; step < 20; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (all_pass(mid))
          lo = mid;
        else
          hi = mid;
      }
    }
    q.epsilon_h = lo;
  }
  return q;
}

namespace {

// Sutherland-Hodgman clip of a polygon to an axis-aligned box.
/// G(u) = int_0^u mu(v) v dv for the 2D mollifier, so that the mass of mu_r
/// in the disc of radius R is 2 pi G(R / r). Cubic Hermite on a uniform grid
/// with the exact derivative mu(u) u.
class RadialPrimitive {
 public:
  explicit RadialPrimitive(const Mollifier& mu) : g_(kN + 1), d_(kN + 1) {
    const auto rule = gauss_legendre(8);
    const double h = 1.0 / kN;
    g_[0] = 0.0;
    for (int i = 0; i <= kN; ++i) {
      const double u0 = i * h;
      d_[static_cast<std::size_t>(i)] = mu.value(make_point(u0, 0.0)) * u0;
      if (i == kN) break;
      double acc = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = u0 + h * rule.nodes[q];
        acc += rule.weights[q] * mu.value(make_point(u, 0.0)) * u;
      }
      g_[static_cast<std::size_t>(i) + 1] = g_[static_cast<std::size_t>(i)] + h * acc;
    }
    mu0_half_ = 0.5 * mu.value(make_point(0.0, 0.0));
  }

  double operator()(double u) const {
    if (u >= 1.0) return g_[kN];
    const double x = u * kN;
    const int i = std::min(static_cast<int>(x), kN - 1);
    const double t = x - i, h = 1.0 / kN;
    const auto k = static_cast<std::size_t>(i);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * g_[k] + (t3 - 2 * t2 + t) * h * d_[k] + (-2 * t3 + 3 * t2) * g_[k + 1] +
           (t3 - t2) * h * d_[k + 1];
  }
  /// G(u) / u^2, continuous at 0.
  double over_square(double u) const { return u < 1e-6 ? mu0_half_ : (*this)(u) / (u * u); }
  double total() const { return g_[kN]; }

 private:
  static constexpr int kN = 4096;
  std::vector<double> g_, d_;
  double mu0_half_ = 0.0;
};

const RadialPrimitive& radial_primitive(const Mollifier& mu) {
  static const RadialPrimitive table(mu);
  return table;
}

/// Signed integral of mu_r(x - z) over the triangle (x, a, b), written as a
/// line integral along the edge a -> b.
double edge_weight(const RadialPrimitive& G, const Point& x, const Point& a, const Point& b, double r) {
  const Point e = b - a;
  const double len = e.norm();
  const Point t = e / len;
  const Point ax = a - x;
  const double sa = ax.dot(t), sb = sa + len;
  const double p = ax(0) * t(1) - ax(1) * t(0);
  if (p == 0.0) return 0.0;
  auto angle = [&](double s1, double s2) { return std::atan(s2 / p) - std::atan(s1 / p); };
  if (std::abs(p) >= r) return G.total() * angle(sa, sb);
  const double c = std::sqrt(r * r - p * p);
  double w = 0.0;
  if (sa < -c) w += G.total() * angle(sa, std::min(sb, -c));
  if (sb > c) w += G.total() * angle(std::max(sa, c), sb);
  const double lo = std::max(sa, -c), hi = std::min(sb, c);
  if (hi > lo) {
    static const QuadratureRule1D rule = gauss_legendre(24);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = lo + (hi - lo) * rule.nodes[q];
      acc += rule.weights[q] * G.over_square(std::sqrt(p * p + s * s) / r);
    }
    w += p * acc * (hi - lo) / (r * r);
  }
  return w;
}

/// -int_{a->b} mu_r(x - z) nu ds with nu the right-hand normal of a -> b.
Point edge_flux(const Mollifier& mu, const Point& x, const Point& a, const Point& b, double r) {
  const Point e = b - a;
  const double len = e.norm();
  const Point t = e / len;
  const Point ax = a - x;
  const double sa = ax.dot(t), sb = sa + len;
  const double p = ax(0) * t(1) - ax(1) * t(0);
  Point out = Point::Zero(2);
  if (std::abs(p) >= r) return out;
  const double c = std::sqrt(r * r - p * p);
  const double lo = std::max(sa, -c), hi = std::min(sb, c);
  if (!(hi > lo)) return out;
  static const QuadratureRule1D rule = gauss_legendre(32);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = lo + (hi - lo) * rule.nodes[q];
    const Point z = a + (s - sa) * t;
    acc += rule.weights[q] * mu.value_scaled(x - z, r);
  }
  acc *= hi - lo;
  out << -acc * t(1), acc * t(0);
  return out;
}

}  // namespace

MeshSizeFunction::MeshSizeFunction(std::shared_ptr<const SimplicialMesh> mesh, double smoothing_radius_factor)
    : mesh_(std::move(mesh)), mu_(mesh_->dim()) {
  const int n = mesh_->dim();
  if (n > 2) throw MeshError("mesh-size function: 1D and 2D only");
  if (!(smoothing_radius_factor > 0.0)) throw MeshError("smoothing radius factor must be positive");
  const std::size_t nc = mesh_->num_simplices(n);
  h_.resize(nc);
  double total_vol = 0.0;
  for (std::size_t i = 0; i < nc; ++i) {
    h_[i] = mesh_->diameter(n, i);
    total_vol += mesh_->volume(n, i);
  }
  h_min_ = *std::min_element(h_.begin(), h_.end());
  h_max_ = *std::max_element(h_.begin(), h_.end());
  radius_ = smoothing_radius_factor * h_min_;
  constant_ = (h_max_ - h_min_) <= 1e-12 * h_max_;
  if (!constant_) {
    const Point ext = mesh_->bbox_max() - mesh_->bbox_min();
    const double box_vol = n == 1 ? ext(0) : ext(0) * ext(1);
    if (std::abs(box_vol - total_vol) > 1e-9 * box_vol)
      throw MeshError("non-uniform mesh-size function requires a box-shaped mesh (reflection continuation)");
    locator_ = std::make_unique<PointLocator>(*mesh_);
  }

  // measured constants
  const Point lo = mesh_->bbox_min().array() - 0.5, hi = mesh_->bbox_max().array() + 0.5;
  const int grid = n == 1 ? 2000 : 60;
  double gmax = 0.0;
  if (!constant_) {
    if (n == 1) {
      for (int i = 0; i <= grid; ++i) gmax = std::max(gmax, gradient(make_point(lo(0) + (hi(0) - lo(0)) * i / grid)).norm());
    } else {
      for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j)
          gmax = std::max(gmax, gradient(make_point(lo(0) + (hi(0) - lo(0)) * i / grid, lo(1) + (hi(1) - lo(1)) * j / grid)).norm());
    }
  }
  lip_ = 1.05 * gmax;
  c_h_ = 1.0;
  for (int k = 1; k <= n; ++k)
    for (std::size_t i = 0; i < mesh_->num_simplices(k); ++i) {
      const auto& s = mesh_->simplex(k, i);
      const double hf = mesh_->diameter(k, i);
      Point bc = Point::Zero(n);
      for (int v : s) bc += mesh_->vertex(static_cast<std::size_t>(v));
      bc /= static_cast<double>(s.size());
      std::vector<Point> pts{bc};
      for (int v : s) pts.push_back(mesh_->vertex(static_cast<std::size_t>(v)));
      for (const auto& p : pts) {
        const double hv = value(p);
        c_h_ = std::max({c_h_, hv / hf, hf / hv});
      }
    }
}

template <class F>
void MeshSizeFunction::accumulate(const Point& x, F&& f) const {
  // f(cell, h_T, reflected x, reflection signs) for the cells near each reflection of x
  const int n = mesh_->dim();
  const Point bmin = mesh_->bbox_min(), bmax = mesh_->bbox_max();
  const int combos = n == 1 ? 3 : 9;
  for (int c = 0; c < combos; ++c) {
    Point xr = x;
    Point sign = Point::Ones(n);
    bool skip = false;
    for (int a = 0; a < n; ++a) {
      const int opt = a == 0 ? c % 3 : c / 3;
      if (opt == 1) { xr(a) = 2.0 * bmin(a) - x(a); sign(a) = -1.0; }
      if (opt == 2) { xr(a) = 2.0 * bmax(a) - x(a); sign(a) = -1.0; }
      if (xr(a) < bmin(a) - radius_ || xr(a) > bmax(a) + radius_) skip = true;
    }
    if (skip) continue;
    const Point blo = xr.array() - radius_, bhi = xr.array() + radius_;
    for (int cell : locator_->cells_near(blo, bhi)) f(cell, h_[static_cast<std::size_t>(cell)], xr, sign);
  }
}

double MeshSizeFunction::cell_weight(int cell, const Point& x) const {
  const int n = mesh_->dim();
  const auto& s = mesh_->simplex(n, static_cast<std::size_t>(cell));
  if (n == 1) {
    const double a = std::max(mesh_->vertex(static_cast<std::size_t>(s[0]))(0), x(0) - radius_);
    const double b = std::min(mesh_->vertex(static_cast<std::size_t>(s[1]))(0), x(0) + radius_);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (!(hi > lo)) return 0.0;
    static const QuadratureRule1D rule = gauss_legendre(32);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      acc += rule.weights[q] * mu_.value_scaled(make_point(x(0) - (lo + (hi - lo) * rule.nodes[q])), radius_);
    return acc * (hi - lo);
  }
  const auto& G = radial_primitive(mu_);
  double w = 0.0;
  for (int i = 0; i < 3; ++i)
    w += edge_weight(G, x, mesh_->vertex(static_cast<std::size_t>(s[static_cast<std::size_t>(i)])),
                     mesh_->vertex(static_cast<std::size_t>(s[static_cast<std::size_t>((i + 1) % 3)])), radius_);
  return mesh_->cell_orientation(static_cast<std::size_t>(cell)) * w;
}

Point MeshSizeFunction::cell_weight_gradient(int cell, const Point& x) const {
  const int n = mesh_->dim();
  const auto& s = mesh_->simplex(n, static_cast<std::size_t>(cell));
  if (n == 1) {
    const Point a = mesh_->vertex(static_cast<std::size_t>(s[0])), b = mesh_->vertex(static_cast<std::size_t>(s[1]));
    return make_point(mu_.value_scaled(x - a, radius_) - mu_.value_scaled(x - b, radius_));
  }
  Point g = Point::Zero(2);
  for (int i = 0; i < 3; ++i)
    g += edge_flux(mu_, x, mesh_->vertex(static_cast<std::size_t>(s[static_cast<std::size_t>(i)])),
                   mesh_->vertex(static_cast<std::size_t>(s[static_cast<std::size_t>((i + 1) % 3)])), radius_);
  return mesh_->cell_orientation(static_cast<std::size_t>(cell)) * g;
}

// Normalized by the total weight so that min h_T <= value <= max h_T.
double MeshSizeFunction::value(const Point& x) const {
  if (constant_) return h_min_;
  double num = 0.0, den = 0.0;
  accumulate(x, [&](int cell, double hT, const Point& xr, const Point&) {
    const double w = cell_weight(cell, xr);
    num += hT * w;
    den += w;
  });
  return num / den;
}

Point MeshSizeFunction::gradient(const Point& x) const {
  if (constant_) return Point::Zero(mesh_->dim());
  double num = 0.0, den = 0.0;
  Point gn = Point::Zero(mesh_->dim()), gd = Point::Zero(mesh_->dim());
  accumulate(x, [&](int cell, double hT, const Point& xr, const Point& sign) {
    const double w = cell_weight(cell, xr);
    const Point g = sign.cwiseProduct(cell_weight_gradient(cell, xr));
    num += hT * w;
    den += w;
    gn += hT * g;
    gd += g;
  });
  return (gn * den - num * gd) / (den * den);
}

}  // namespace feec
