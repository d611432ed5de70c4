#include "feec/projection.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace feec {

double mass_operator_norm(const std::function<Vector(const Vector&)>& a, const std::function<Vector(const Vector&)>& at,
                          const SparseMatrix& mass_out, const SparseMatrix& mass_in, int max_iterations,
                          double tolerance) {
  const Eigen::Index n = mass_in.rows();
  if (n == 0) return 0.0;
  Eigen::SimplicialLDLT<SparseMatrix> in_solver(mass_in);
  if (in_solver.info() != Eigen::Success) throw std::runtime_error("mass matrix factorization failed");
  std::mt19937_64 g(20240601);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = static_cast<double>(g() >> 11) * 0x1.0p-53 - 0.5;
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    x /= std::sqrt(x.dot(mass_in * x));
    const Vector ax = a(x);
    const double next = ax.dot(mass_out * ax);
    const bool done = it > 0 && std::abs(next - lambda) <= tolerance * next;
    lambda = next;
    if (done) break;
    x = in_solver.solve(at(mass_out * ax));
  }
  return std::sqrt(lambda);
}

SmoothedProjection::SmoothedProjection(const FEComplex& fe, BoxGeometry geometry, ProjectionOptions options,
                                       std::ostream* log)
    : fe_(&fe), options_(options) {
  const auto& mesh = *fe.domain().mesh;
  if (mesh.dim() != 2) throw GeometryError("smoothed projection: 2D box meshes only");
  const Point lo = mesh.bbox_min(), hi = mesh.bbox_max();
  if ((lo - make_point(-1.0, -1.0)).norm() > 1e-12 || (hi - make_point(1.0, 1.0)).norm() > 1e-12)
    throw GeometryError("smoothed projection: mesh must cover the box (-1,1)^2");

  double eps = options.epsilon;
  double best = std::numeric_limits<double>::quiet_NaN();
  for (int attempt = 0; attempt <= options.max_halvings; ++attempt, eps *= 0.5) {
    std::string reason;
    double defect = std::numeric_limits<double>::quiet_NaN();
    const bool ok = try_epsilon(eps, geometry, reason, defect);
    attempts_.push_back({eps, ok, reason, defect});
    if (log) *log << "epsilon " << eps << ": " << (ok ? "accepted" : "rejected, " + reason) << "\n";
    if (!std::isnan(defect) && (std::isnan(best) || defect < best)) best = defect;
    if (ok) {
      epsilon_ = eps;
      return;
    }
  }
  std::ostringstream os;
  os << "no admissible epsilon after " << options.max_halvings << " halvings; achieved ||I - Q|_P||_M = ";
  if (std::isnan(best))
    os << "not computed (every candidate rejected before assembly)";
  else
    os << best;
  throw ProjectionError(os.str(), best);
}

bool SmoothedProjection::try_epsilon(double eps, const BoxGeometry& geometry, std::string& reason, double& defect) {
  auto h = std::make_shared<MeshSizeFunction>(fe_->domain().mesh);
  if (!h->is_constant()) throw GeometryError("smoothed projection: mesh cells must have uniform size");
  std::unique_ptr<SmoothedInterpolant> interp;
  try {
    interp = std::make_unique<SmoothedInterpolant>(
        Regularizer(geometry, RadiusFunction::scaled(h, eps), options_.delta, options_.radial, options_.angular));
  } catch (const GeometryError& e) {
    reason = e.what();
    return false;
  }
  std::vector<Degree> data(static_cast<std::size_t>(fe_->dim() + 1));
  defect = 0.0;
  for (int k = 0; k <= fe_->dim(); ++k) {
    const FESpace& space = fe_->space(k);
    auto& d = data[static_cast<std::size_t>(k)];
    d.q = interp->matrix(space, space);
    d.mass = mass_matrix(space);
    const SparseMatrix id = [&] {
      SparseMatrix m(d.q.rows(), d.q.cols());
      m.setIdentity();
      return m;
    }();
    const SparseMatrix diff = id - d.q;
    const SparseMatrix diff_t = diff.transpose();
    d.defect = mass_operator_norm([&](const Vector& x) { return Vector(diff * x); },
                                  [&](const Vector& y) { return Vector(diff_t * y); }, d.mass, d.mass, 300, 1e-6);
    defect = std::max(defect, d.defect);
  }
  if (!(defect < 1.0)) {
    std::ostringstream os;
    os << "||I - Q|_P||_M = " << defect << " >= 1";
    reason = os.str();
    return false;
  }
  for (auto& d : data) {
    d.lu = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    d.lu->compute(d.q);
    d.lu_t = std::make_shared<Eigen::SparseLU<SparseMatrix>>();
    d.lu_t->compute(SparseMatrix(d.q.transpose()));
    if (d.lu->info() != Eigen::Success || d.lu_t->info() != Eigen::Success) {
      reason = "Q|_P is singular";
      return false;
    }
  }
  interp_ = std::move(interp);
  data_ = std::move(data);
  return true;
}

SparseMatrix SmoothedProjection::q_matrix(int k, const FESpace& input) const {
  return interp_->matrix(fe_->space(k), input);
}

Vector SmoothedProjection::solve(int k, const Vector& b) const {
  const auto& d = data_.at(static_cast<std::size_t>(k));
  if (d.q.rows() == 0) return b;
  return d.lu->solve(b);
}

Vector SmoothedProjection::solve_transpose(int k, const Vector& b) const {
  const auto& d = data_.at(static_cast<std::size_t>(k));
  if (d.q.rows() == 0) return b;
  return d.lu_t->solve(b);
}

Vector SmoothedProjection::apply(int k, const Vector& fe_coeffs) const { return solve(k, q_square(k) * fe_coeffs); }

Vector SmoothedProjection::apply(int k, const FormField& u, int degree) const {
  return solve(k, interp_->apply(fe_->space(k), u, degree));
}

double projection_norm(const SmoothedProjection& pi, int k, const FESpace& input) {
  const SparseMatrix q = pi.q_matrix(k, input);
  const SparseMatrix qt = q.transpose();
  return mass_operator_norm([&](const Vector& x) { return pi.solve(k, q * x); },
                            [&](const Vector& y) { return Vector(qt * pi.solve_transpose(k, y)); }, pi.mass(k),
                            mass_matrix(input), 300, 1e-6);
}

}  // namespace feec
