#include "feec/affine_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "feec/parallel.hpp"
#include "feec/quadrature.hpp"

namespace feec {

namespace {

const QuadratureRule1D& gauss(int points) {
  static const std::array<QuadratureRule1D, 17> rules = [] {
    std::array<QuadratureRule1D, 17> r;
    for (int p = 1; p <= 16; ++p) r[static_cast<std::size_t>(p)] = gauss_legendre(p);
    return r;
  }();
  return rules.at(static_cast<std::size_t>(std::clamp(points, 1, 16)));
}

Point axis_normal(int a, double sign = 1.0) {
  Point n = Point::Zero(2);
  n(a) = sign;
  return n;
}

/// Splits a piece by the line n.z = c into the parts with n.z <= c and n.z > c.
/// Vertex order (orientation) is preserved on both sides.
std::pair<ChainPiece, ChainPiece> split(const ChainPiece& p, const Point& n, double c) {
  ChainPiece le{{}, p.weight}, gt{{}, p.weight};
  const std::size_t m = p.verts.size();
  if (m == 0) return {le, gt};
  std::vector<double> f(m);
  bool all_le = true, all_ge = true;
  for (std::size_t i = 0; i < m; ++i) {
    f[i] = n.dot(p.verts[i]) - c;
    if (f[i] > 0.0) all_le = false;
    if (f[i] < 0.0) all_ge = false;
  }
  if (all_le) return {p, gt};
  if (all_ge) return {le, p};
  if (m == 2) {
    const Point& a = p.verts[0];
    const Point& b = p.verts[1];
    const Point x = a + (f[0] / (f[0] - f[1])) * (b - a);
    if (f[0] < 0.0) {
      le.verts = {a, x};
      gt.verts = {x, b};
    } else {
      gt.verts = {a, x};
      le.verts = {x, b};
    }
    return {le, gt};
  }
  // Sutherland-Hodgman against both half-planes
  for (int side = 0; side < 2; ++side) {
    auto& out = side == 0 ? le.verts : gt.verts;
    auto inside = [&](double v) { return side == 0 ? v <= 0.0 : v >= 0.0; };
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + 1) % m;
      const bool ii = inside(f[i]), ij = inside(f[j]);
      if (ii) out.push_back(p.verts[i]);
      if (ii != ij && f[i] != 0.0 && f[j] != 0.0) out.push_back(p.verts[i] + (f[i] / (f[i] - f[j])) * (p.verts[j] - p.verts[i]));
    }
    if (out.size() < 3) out.clear();
  }
  return {le, gt};
}

double signed_area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    a += p(0) * q(1) - p(1) * q(0);
  }
  return 0.5 * a;
}

void merge_row(SparseRow& row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow out;
  for (const auto& e : row) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(e);
  }
  row = std::move(out);
}

}  // namespace

SmoothedInterpolant::SmoothedInterpolant(Regularizer m) : m_(std::move(m)) {
  if (!m_.rho().is_constant())
    throw GeometryError("exact smoothed interpolant needs a constant radius (uniform mesh size)");
}

void SmoothedInterpolant::sweep(int axis, ChainPiece piece, std::size_t seg, std::vector<ChainPiece>& out) const {
  if (piece.verts.empty()) return;
  const auto& segs = m_.distortion().segments(axis);
  if (seg == segs.size()) {
    out.push_back(std::move(piece));
    return;
  }
  const auto& s = segs[seg];
  const int o = 1 - axis;
  const double r = m_.rho()(piece.verts[0]);
  const double kappa = m_.distortion().constants().kappa;
  const Point eo = axis_normal(o);

  // alpha(x_o) = a0 + a1 x_o on one band; the zone lines t = -2 alpha, 0, 4 alpha
  // with t = inward (x_a - c) split the band into pieces with affine maps
  auto zone = [&](ChainPiece p, double a1, double a0) {
    if (p.verts.empty()) return;
    const double in = s.inward;
    Point n(2);
    n(axis) = in;
    n(o) = 2.0 * a1;
    auto [below, rest] = split(p, n, in * s.c - 2.0 * a0);
    sweep(axis, std::move(below), seg + 1, out);
    auto [steep, rest2] = split(rest, axis_normal(axis, in), in * s.c);
    n(o) = -4.0 * a1;
    auto [flat, above] = split(rest2, n, in * s.c + 4.0 * a0);
    sweep(axis, std::move(above), seg + 1, out);
    for (auto* q : {&steep, &flat}) {
      if (q->verts.empty()) continue;
      const double slope = q == &steep ? 2.0 : 0.5;
      for (auto& v : q->verts) {
        const double alpha = a0 + a1 * v(o);
        v(axis) = s.c + 2.0 * in * alpha + slope * (v(axis) - s.c);
      }
      out.push_back(std::move(*q));
    }
  };

  auto [left, rest] = split(piece, eo, s.s0 - r);
  sweep(axis, std::move(left), seg + 1, out);
  auto [b1, rest2] = split(rest, eo, s.s0);
  zone(std::move(b1), kappa, kappa * (r - s.s0));
  auto [b2, rest3] = split(rest2, eo, s.s1);
  zone(std::move(b2), 0.0, kappa * r);
  auto [b3, right] = split(rest3, eo, s.s1 + r);
  zone(std::move(b3), -kappa, kappa * (r + s.s1));
  sweep(axis, std::move(right), seg + 1, out);
}

void SmoothedInterpolant::extend(ChainPiece piece, std::vector<ChainPiece>& out) const {
  const auto& geo = m_.extension().geometry();
  for (const auto& v : piece.verts)
    if (!geo.in_extended(v)) {
      std::ostringstream os;
      os << "smoothed interpolant sample outside the extended domain at (" << v(0) << ", " << v(1) << ")";
      throw GeometryError(os.str());
    }
  std::vector<ChainPiece> cur{std::move(piece)}, next;
  // reflections across the faces of Omega^b
  for (int a = 0; a < 2; ++a) {
    next.clear();
    const double lo = geo.bulge_lo()(a), hi = geo.bulge_hi()(a);
    for (auto& p : cur) {
      auto [low, rest] = split(p, axis_normal(a), lo);
      auto [mid, high] = split(rest, axis_normal(a), hi);
      for (auto& v : low.verts) v(a) = 2.0 * lo - v(a);
      for (auto& v : high.verts) v(a) = 2.0 * hi - v(a);
      for (auto* q : {&low, &mid, &high})
        if (!q->verts.empty()) next.push_back(std::move(*q));
    }
    std::swap(cur, next);
  }
  // keep the closed box, drop the bulge
  for (auto& p : cur) {
    ChainPiece q = std::move(p);
    for (int a = 0; a < 2 && !q.verts.empty(); ++a) {
      q = split(q, axis_normal(a, -1.0), 1.0).first;
      q = split(q, axis_normal(a), 1.0).first;
    }
    if (!q.verts.empty()) out.push_back(std::move(q));
  }
}

std::vector<ChainPiece> SmoothedInterpolant::push(const std::vector<Point>& simplex) const {
  std::vector<ChainPiece> out, stage1, stage2;
  const auto& rule = m_.rule();
  const double r = m_.delta() * m_.rho()(simplex[0]);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    ChainPiece p{simplex, rule.weights[i]};
    for (auto& v : p.verts) v += r * rule.nodes[i];
    stage1.clear();
    stage2.clear();
    sweep(1, std::move(p), 0, stage1);
    for (auto& q : stage1) sweep(0, std::move(q), 0, stage2);
    for (auto& q : stage2) extend(std::move(q), out);
  }
  return out;
}

WhitneyIntegrator::WhitneyIntegrator(const FESpace& input) : space_(&input) {
  const auto& mesh = input.mesh();
  const auto& loc = input.locator();
  if (mesh.dim() != 2) throw std::invalid_argument("WhitneyIntegrator: 2D meshes only");
  const int k = input.degree();
  cells_.resize(mesh.num_simplices(2));
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    auto& cd = cells_[c];
    const auto& s = mesh.simplex(2, c);
    const auto& g = loc.barycentric_gradients(c);
    const Point v0 = mesh.vertex(static_cast<std::size_t>(s[0]));
    for (int i = 0; i < 3; ++i) {
      cd.grad.row(i) = g.row(i);
      cd.offset(i) = (i == 0 ? 1.0 : 0.0) - g.row(i).dot(v0);
    }
    cd.vertex_dof.fill(-1);
    cd.edge_dof.fill(-1);
    if (k == 0)
      for (int i = 0; i < 3; ++i) cd.vertex_dof[static_cast<std::size_t>(i)] = input.dof_of(static_cast<std::size_t>(s[static_cast<std::size_t>(i)]));
    if (k == 1) {
      const auto faces = local_faces(mesh, 1, c);
      const auto& local = subsets(3, 2);
      for (std::size_t j = 0; j < 3; ++j) {
        cd.edge_dof[j] = input.dof_of(static_cast<std::size_t>(faces[j]));
        cd.edge_local[j] = {local[j][0], local[j][1]};
      }
    }
    if (k == 2) {
      cd.cell_dof = input.dof_of(c);
      cd.density = 1.0 / mesh.volume(2, c);
    }
  }
}

void WhitneyIntegrator::integrate(const ChainPiece& piece, double scale, SparseRow& row) const {
  const auto& loc = space_->locator();
  const int k = space_->degree();
  const std::size_t m = piece.verts.size();
  auto add = [&](int dof, double v) {
    if (dof >= 0 && v != 0.0) row.emplace_back(dof, scale * v);
  };
  auto fail = [&](const Point& x) {
    std::ostringstream os;
    os << "point (" << x(0) << ", " << x(1) << ") lies outside the input mesh";
    throw GeometryError(os.str());
  };
  if ((k == 0) != (m == 1) || (k == 1) != (m == 2)) throw std::logic_error("WhitneyIntegrator: degree and piece dimension differ");

  Point lo = piece.verts[0], hi = piece.verts[0];
  for (const auto& v : piece.verts) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const auto cand = loc.cells_near((lo.array() - 1e-9).matrix(), (hi.array() + 1e-9).matrix());
  // the cell whose closure contains x most robustly
  auto best_cell = [&](const Point& x) {
    int best = -1;
    double best_min = -1e-9;
    for (int c : cand) {
      const double mn = lambda(cells_[static_cast<std::size_t>(c)], x).minCoeff();
      if (mn > best_min) {
        best_min = mn;
        best = c;
      }
    }
    return best;
  };

  if (k == 0) {
    const int c = best_cell(piece.verts[0]);
    if (c < 0) fail(piece.verts[0]);
    const auto& cd = cells_[static_cast<std::size_t>(c)];
    const Eigen::Vector3d lam = lambda(cd, piece.verts[0]);
    for (std::size_t i = 0; i < 3; ++i) add(cd.vertex_dof[i], lam(static_cast<Eigen::Index>(i)));
    return;
  }

  if (k == 1) {
    const Point& a = piece.verts[0];
    const Point tangent = piece.verts[1] - a;
    std::vector<double> breaks{0.0, 1.0};
    for (int c : cand) {
      const auto& cd = cells_[static_cast<std::size_t>(c)];
      const Eigen::Vector3d la = lambda(cd, a), lb = lambda(cd, piece.verts[1]);
      for (int i = 0; i < 3; ++i) {
        if ((la(i) < 0.0) == (lb(i) < 0.0) || la(i) == lb(i)) continue;
        const double t = la(i) / (la(i) - lb(i));
        if (t > 0.0 && t < 1.0) breaks.push_back(t);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double t0 = breaks[b], t1 = breaks[b + 1];
      if (!(t1 - t0 > 1e-15)) continue;
      const Point mid = a + 0.5 * (t0 + t1) * tangent;
      const int c = best_cell(mid);
      if (c < 0) fail(mid);
      const auto& cd = cells_[static_cast<std::size_t>(c)];
      // lambda_i grad lambda_j - lambda_j grad lambda_i is linear: exact by the midpoint
      const Eigen::Vector3d lam = lambda(cd, mid);
      const Eigen::Vector3d gt = cd.grad * (tangent * (t1 - t0));
      for (std::size_t j = 0; j < 3; ++j) {
        const int p = cd.edge_local[j][0], q = cd.edge_local[j][1];
        add(cd.edge_dof[j], lam(p) * gt(q) - lam(q) * gt(p));
      }
    }
    return;
  }

  for (int c : cand) {
    const auto& cd = cells_[static_cast<std::size_t>(c)];
    if (cd.cell_dof < 0) continue;
    ChainPiece clipped = piece;
    for (int i = 0; i < 3 && !clipped.verts.empty(); ++i) {
      const Point g = cd.grad.row(i).transpose();
      clipped = split(clipped, Point(-g), cd.offset(i)).first;
    }
    if (clipped.verts.size() < 3) continue;
    add(cd.cell_dof, signed_area(clipped.verts) * cd.density);
  }
}

double integrate_field(const FormField& u, const ChainPiece& piece, int degree) {
  const std::size_t m = piece.verts.size();
  if (m == 1) return u(piece.verts[0])(0);
  if (m == 2) {
    const auto& g = gauss(degree / 2 + 1);
    const Point& a = piece.verts[0];
    VectorFrame frame(2, 1);
    frame.col(0) = piece.verts[1] - a;
    double s = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q)
      s += g.weights[q] * evaluate_on_frame(u(Point(a + g.nodes[q] * frame.col(0))), 2, 1, frame);
    return s;
  }
  const auto& rule = simplex_rule(2, degree);
  double s = 0.0;
  const Point& p0 = piece.verts[0];
  for (std::size_t t = 1; t + 1 < m; ++t) {
    VectorFrame frame(2, 2);
    frame.col(0) = piece.verts[t] - p0;
    frame.col(1) = piece.verts[t + 1] - p0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
      s += rule.weights[q] * evaluate_on_frame(u(Point(p0 + frame * rule.points[q])), 2, 2, frame);
  }
  return s;
}

SparseRow SmoothedInterpolant::row(const std::vector<Point>& verts, double top_sign, const WhitneyIntegrator& input) const {
  SparseRow r;
  for (const auto& p : push(verts)) input.integrate(p, p.weight * top_sign, r);
  merge_row(r);
  return r;
}

namespace {

std::vector<Point> simplex_points(const SimplicialMesh& mesh, int k, std::size_t i) {
  std::vector<Point> v;
  for (int id : mesh.simplex(k, i)) v.push_back(mesh.vertex(static_cast<std::size_t>(id)));
  return v;
}

}  // namespace

SparseMatrix SmoothedInterpolant::matrix(const FESpace& target, const FESpace& input) const {
  if (target.degree() != input.degree()) throw std::invalid_argument("smoothed interpolant: degrees differ");
  const auto& mesh = target.mesh();
  const int k = target.degree();
  const auto& dofs = target.dofs();
  const WhitneyIntegrator integ(input);
  std::vector<SparseRow> rows(dofs.size());
  parallel_for(dofs.size(), [&](std::size_t a) {
    const auto s = static_cast<std::size_t>(dofs[a]);
    const double sign = k == mesh.dim() ? mesh.cell_orientation(s) : 1.0;
    rows[a] = row(simplex_points(mesh, k, s), sign, integ);
  });
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (const auto& [j, v] : rows[a]) trip.emplace_back(static_cast<int>(a), j, v);
  SparseMatrix q(static_cast<Eigen::Index>(dofs.size()), static_cast<Eigen::Index>(input.size()));
  q.setFromTriplets(trip.begin(), trip.end());
  return q;
}

Vector SmoothedInterpolant::apply(const FESpace& target, const FormField& u, int degree) const {
  if (u.degree != target.degree()) throw std::invalid_argument("smoothed interpolant: degrees differ");
  const auto& mesh = target.mesh();
  const int k = target.degree();
  const auto& dofs = target.dofs();
  Vector out(static_cast<Eigen::Index>(dofs.size()));
  parallel_for(dofs.size(), [&](std::size_t a) {
    const auto s = static_cast<std::size_t>(dofs[a]);
    const double sign = k == mesh.dim() ? mesh.cell_orientation(s) : 1.0;
    double acc = 0.0;
    for (const auto& p : push(simplex_points(mesh, k, s))) acc += p.weight * integrate_field(u, p, degree);
    out(static_cast<Eigen::Index>(a)) = sign * acc;
  });
  return out;
}

}  // namespace feec
