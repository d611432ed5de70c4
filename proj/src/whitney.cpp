#include "feec/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "feec/quadrature.hpp"

namespace feec {

FEContext::FEContext(MeshedDomain d)
    : domain(std::move(d)), locator(*domain.mesh), relative(*domain.mesh, *domain.partition) {}

FESpace::FESpace(std::shared_ptr<const FEContext> ctx, int k) : ctx_(std::move(ctx)), k_(k) {
  if (k < 0 || k > ctx_->domain.mesh->dim()) throw std::out_of_range("FESpace: degree out of range");
}

FEComplex::FEComplex(MeshedDomain domain) : ctx_(std::make_shared<const FEContext>(std::move(domain))) {
  for (int k = 0; k <= ctx_->domain.mesh->dim(); ++k) spaces_.emplace_back(ctx_, k);
}

std::vector<int> local_faces(const SimplicialMesh& mesh, int k, std::size_t cell) {
  const int n = mesh.dim();
  const auto& s = mesh.simplex(n, cell);
  std::vector<int> out;
  for (const auto& sub : subsets(n + 1, k + 1)) {
    Simplex f;
    for (int j : sub) f.push_back(s[static_cast<std::size_t>(j)]);
    out.push_back(mesh.index_of(f));
  }
  return out;
}

std::vector<Coeffs> whitney_local(const PointLocator& loc, int k, std::size_t cell, const Eigen::VectorXd& lambda) {
  const auto& mesh = loc.mesh();
  const int n = mesh.dim();
  const Eigen::MatrixXd& g = loc.barycentric_gradients(cell);
  const auto& out_idx = subsets(n, k);
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  const double orient = (k == n) ? mesh.cell_orientation(cell) : 1.0;

  // dlambda_J for a list J of local vertices, as coefficients over dx^I
  auto wedge_grads = [&](const std::vector<int>& J) {
    Coeffs c(static_cast<Eigen::Index>(out_idx.size()));
    for (std::size_t i = 0; i < out_idx.size(); ++i) {
      Jacobian m(k, k);
      for (int r = 0; r < k; ++r)
        for (int q = 0; q < k; ++q) m(r, q) = g(J[static_cast<std::size_t>(r)], out_idx[i][static_cast<std::size_t>(q)]);
      c(static_cast<Eigen::Index>(i)) = k == 0 ? 1.0 : (k == 1 ? m(0, 0) : m.determinant());
    }
    return c;
  };

  std::vector<Coeffs> out;
  for (const auto& sub : subsets(n + 1, k + 1)) {
    Coeffs v = Coeffs::Zero(static_cast<Eigen::Index>(out_idx.size()));
    for (std::size_t i = 0; i < sub.size(); ++i) {
      std::vector<int> rest;
      for (std::size_t q = 0; q < sub.size(); ++q)
        if (q != i) rest.push_back(sub[q]);
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      v += sign * lambda(sub[i]) * wedge_grads(rest);
    }
    out.push_back(fact * orient * v);
  }
  return out;
}

Coeffs whitney_evaluate_global(const PointLocator& loc, int k, const Vector& global, const Point& x, std::size_t cell) {
  const auto lam = loc.barycentric(cell, x);
  const auto faces = local_faces(loc.mesh(), k, cell);
  const auto vals = whitney_local(loc, k, cell, lam);
  Coeffs out = Coeffs::Zero(num_components(loc.mesh().dim(), k));
  for (std::size_t a = 0; a < faces.size(); ++a) out += global(faces[a]) * vals[a];
  return out;
}

namespace {

Coeffs evaluate_in_cell(const Cochain& c, const Point& x, std::size_t cell) {
  const FESpace& sp = *c.space;
  const auto& loc = sp.locator();
  const auto faces = local_faces(sp.mesh(), sp.degree(), cell);
  const auto vals = whitney_local(loc, sp.degree(), cell, loc.barycentric(cell, x));
  Coeffs out = Coeffs::Zero(num_components(sp.dim(), sp.degree()));
  for (std::size_t a = 0; a < faces.size(); ++a) {
    const int dof = sp.dof_of(static_cast<std::size_t>(faces[a]));
    if (dof >= 0) out += c.coeffs(dof) * vals[a];
  }
  return out;
}

}  // namespace

Coeffs whitney_evaluate(const Cochain& c, const Point& x, std::size_t cell) {
  if (!c.space->locator().contains(cell, x, 1e-12)) throw std::invalid_argument("whitney_evaluate: point outside the given cell");
  return evaluate_in_cell(c, x, cell);
}

Coeffs whitney_evaluate(const Cochain& c, const Point& x) {
  auto cell = c.space->locator().locate(x, 1e-10);
  if (!cell) throw std::invalid_argument("whitney_evaluate: point outside the mesh");
  return evaluate_in_cell(c, x, static_cast<std::size_t>(*cell));
}

double simplex_integral(const SimplicialMesh& mesh, int k, std::size_t i, const FormField& field, int degree) {
  const auto& s = mesh.simplex(k, i);
  const Point& v0 = mesh.vertex(static_cast<std::size_t>(s[0]));
  if (k == 0) return field(v0)(0);
  const VectorFrame frame = mesh.edge_frame(k, i);
  const auto& rule = simplex_rule(k, degree);
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = v0 + frame * rule.points[q];
    sum += rule.weights[q] * evaluate_on_frame(field(x), mesh.dim(), k, frame);
  }
  if (k == mesh.dim()) sum *= mesh.cell_orientation(i);
  return sum;
}

Cochain canonical_interpolant(const FESpace& space, const FormField& field, int degree) {
  Cochain c{&space, Vector::Zero(static_cast<Eigen::Index>(space.size()))};
  const auto& dofs = space.dofs();
  for (std::size_t a = 0; a < dofs.size(); ++a)
    c.coeffs(static_cast<Eigen::Index>(a)) = simplex_integral(space.mesh(), space.degree(), static_cast<std::size_t>(dofs[a]), field, degree);
  return c;
}

SparseMatrix exterior_derivative(const FESpace& from, const FESpace& to) {
  if (from.context() != to.context() || to.degree() != from.degree() + 1)
    throw std::invalid_argument("exterior_derivative: spaces must be consecutive degrees on one mesh");
  return from.context()->relative.d(from.degree()).cast<double>();
}

namespace {

// Loop over quadrature points of every cell: f(cell, lambda, weight, x).
template <class F>
void for_each_cell_point(const SimplicialMesh& mesh, int degree, F&& f) {
  const int n = mesh.dim();
  const auto& rule = simplex_rule(n, degree);
  double fact = 1.0;
  for (int j = 2; j <= n; ++j) fact *= j;
  for (std::size_t c = 0; c < mesh.num_simplices(n); ++c) {
    const auto& s = mesh.simplex(n, c);
    const Point& v0 = mesh.vertex(static_cast<std::size_t>(s[0]));
    const VectorFrame frame = mesh.edge_frame(n, c);
    const double jac = mesh.volume(n, c) * fact;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      Eigen::VectorXd lam(n + 1);
      lam.tail(n) = rule.points[q];
      lam(0) = 1.0 - rule.points[q].sum();
      f(c, lam, rule.weights[q] * jac, Point(v0 + frame * rule.points[q]));
    }
  }
}

}  // namespace

SparseMatrix mass_matrix(const FESpace& space) {
  const auto& mesh = space.mesh();
  const int k = space.degree();
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<std::vector<int>> faces(mesh.num_simplices(mesh.dim()));
  for (std::size_t c = 0; c < faces.size(); ++c) faces[c] = local_faces(mesh, k, c);
  for_each_cell_point(mesh, 2, [&](std::size_t c, const Eigen::VectorXd& lam, double w, const Point&) {
    const auto vals = whitney_local(space.locator(), k, c, lam);
    for (std::size_t a = 0; a < vals.size(); ++a) {
      const int da = space.dof_of(static_cast<std::size_t>(faces[c][a]));
      if (da < 0) continue;
      for (std::size_t b = 0; b < vals.size(); ++b) {
        const int db = space.dof_of(static_cast<std::size_t>(faces[c][b]));
        if (db < 0) continue;
        trip.emplace_back(da, db, w * vals[a].dot(vals[b]));
      }
    }
  });
  SparseMatrix m(static_cast<Eigen::Index>(space.size()), static_cast<Eigen::Index>(space.size()));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

Vector load_vector(const FESpace& space, const FormField& f, int degree) {
  const auto& mesh = space.mesh();
  const int k = space.degree();
  Vector b = Vector::Zero(static_cast<Eigen::Index>(space.size()));
  std::vector<int> faces;
  std::size_t last = static_cast<std::size_t>(-1);
  for_each_cell_point(mesh, degree, [&](std::size_t c, const Eigen::VectorXd& lam, double w, const Point& x) {
    if (c != last) {
      faces = local_faces(mesh, k, c);
      last = c;
    }
    const Coeffs fx = f(x);
    const auto vals = whitney_local(space.locator(), k, c, lam);
    for (std::size_t a = 0; a < vals.size(); ++a) {
      const int da = space.dof_of(static_cast<std::size_t>(faces[a]));
      if (da >= 0) b(da) += w * fx.dot(vals[a]);
    }
  });
  return b;
}

double l2_inner(const Cochain& a, const Cochain& b, const SparseMatrix& mass) { return a.coeffs.dot(mass * b.coeffs); }

double l2_norm(const Cochain& a, const SparseMatrix& mass) { return std::sqrt(std::max(0.0, l2_inner(a, a, mass))); }

double linf_norm_sampled(const Cochain& a, int lattice) {
  const FESpace& sp = *a.space;
  const auto& mesh = sp.mesh();
  const int n = mesh.dim();
  if (n != 2 && n != 1) throw std::invalid_argument("linf_norm_sampled: 1D and 2D only");
  double best = 0.0;
  for (std::size_t c = 0; c < mesh.num_simplices(n); ++c) {
    const auto faces = local_faces(mesh, sp.degree(), c);
    for (int i = 0; i <= lattice; ++i)
      for (int j = 0; j <= (n == 2 ? lattice - i : 0); ++j) {
        Eigen::VectorXd lam(n + 1);
        if (n == 1) {
          lam << 1.0 - static_cast<double>(i) / lattice, static_cast<double>(i) / lattice;
        } else {
          lam << 1.0 - static_cast<double>(i + j) / lattice, static_cast<double>(i) / lattice, static_cast<double>(j) / lattice;
        }
        const auto vals = whitney_local(sp.locator(), sp.degree(), c, lam);
        Coeffs v = Coeffs::Zero(num_components(n, sp.degree()));
        for (std::size_t q = 0; q < faces.size(); ++q) {
          const int d = sp.dof_of(static_cast<std::size_t>(faces[q]));
          if (d >= 0) v += a.coeffs(d) * vals[q];
        }
        best = std::max(best, v.norm());
      }
  }
  return best;
}

double l2_error(const Cochain& uh, const FormField& u, int degree) {
  const FESpace& sp = *uh.space;
  const auto& mesh = sp.mesh();
  double sum = 0.0;
  std::vector<int> faces;
  std::size_t last = static_cast<std::size_t>(-1);
  for_each_cell_point(mesh, degree, [&](std::size_t c, const Eigen::VectorXd& lam, double w, const Point& x) {
    if (c != last) {
      faces = local_faces(mesh, sp.degree(), c);
      last = c;
    }
    const auto vals = whitney_local(sp.locator(), sp.degree(), c, lam);
    Coeffs v = -u(x);
    for (std::size_t q = 0; q < faces.size(); ++q) {
      const int d = sp.dof_of(static_cast<std::size_t>(faces[q]));
      if (d >= 0) v += uh.coeffs(d) * vals[q];
    }
    sum += w * v.squaredNorm();
  });
  return std::sqrt(sum);
}

double hd_seminorm_error(const Cochain& uh, const FESpace& next, const SparseMatrix& d, const FormField& u, int degree) {
  Cochain du{&next, d * uh.coeffs};
  return l2_error(du, u.d(), degree);
}

nlohmann::json cochain_to_json(const Cochain& c) {
  nlohmann::json doc;
  doc["k"] = c.space->degree();
  doc["coeffs"] = std::vector<double>(c.coeffs.data(), c.coeffs.data() + c.coeffs.size());
  doc["simplex_ids"] = c.space->dofs();
  return doc;
}

Vector cochain_from_json(const FESpace& space, const nlohmann::json& doc) {
  try {
    if (doc.at("k").get<int>() != space.degree()) throw std::invalid_argument("cochain degree does not match the space");
    const auto coeffs = doc.at("coeffs").get<std::vector<double>>();
    const auto ids = doc.at("simplex_ids").get<std::vector<int>>();
    if (coeffs.size() != ids.size()) throw std::invalid_argument("cochain coeffs and simplex_ids differ in length");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.size()));
    for (std::size_t a = 0; a < ids.size(); ++a) {
      if (ids[a] < 0 || static_cast<std::size_t>(ids[a]) >= space.mesh().num_simplices(space.degree()))
        throw std::invalid_argument("cochain simplex id out of range");
      const int d = space.dof_of(static_cast<std::size_t>(ids[a]));
      if (d < 0) {
        if (coeffs[a] != 0.0) throw std::invalid_argument("cochain has a nonzero value on a constrained simplex");
        continue;
      }
      v(d) = coeffs[a];
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed cochain document: ") + e.what());
  }
}

}  // namespace feec
