#include "feec/hodge.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SparseLU>

namespace feec {

namespace {

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  return qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

Eigen::MatrixXd seeded_block(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) x(i, j) = dist(gen);
  return x;
}

}  // namespace

HodgeComplex::HodgeComplex(const FEComplex& fe, int k) : fe_(&fe), k_(k), n_(fe.dim()) {
  if (k < 0 || k > n_) throw std::out_of_range("HodgeComplex: degree out of range");
  m_ = mass_matrix(space());
  if (has_prev()) {
    m_prev_ = mass_matrix(prev_space());
    d_prev_ = exterior_derivative(prev_space(), space());
    prev_stiffness_ = SparseMatrix(d_prev_.transpose() * m_ * d_prev_);
    double scale = 0.0, mscale = 0.0;
    for (Eigen::Index i = 0; i < prev_stiffness_.rows(); ++i) {
      scale = std::max(scale, prev_stiffness_.coeff(i, i));
      mscale = std::max(mscale, m_prev_.coeff(i, i));
    }
    const double eta = 1e-8 * (mscale > 0.0 ? scale / mscale : 1.0);
    prev_shifted_ = SparseMatrix(prev_stiffness_ + eta * m_prev_);
    prev_solver_ = std::make_shared<Eigen::SimplicialLDLT<SparseMatrix>>(prev_shifted_);
    if (prev_solver_->info() != Eigen::Success) throw SolverError("HodgeComplex: factorization of the exact-part system failed");
  }
  if (has_next()) {
    m_next_ = mass_matrix(next_space());
    d_ = exterior_derivative(space(), next_space());
  }
}

Vector HodgeComplex::exact_part(const Vector& u) const {
  if (!has_prev() || d_prev_.cols() == 0) return Vector::Zero(u.size());
  const Vector b = d_prev_.transpose() * (m_ * u);
  const double bn = b.norm();
  if (bn == 0.0) return Vector::Zero(u.size());
  Vector a = Vector::Zero(d_prev_.cols());
  // regularized solve of the singular consistent system, refined iteratively
  for (int it = 0; it < 30; ++it) {
    const Vector r = b - prev_stiffness_ * a;
    if (r.norm() <= 1e-15 * bn) break;
    a += prev_solver_->solve(r);
  }
  return d_prev_ * a;
}

HarmonicBasis harmonic_basis(const HodgeComplex& hc) {
  HarmonicBasis hb;
  hb.k = hc.k();
  const auto betti = betti_relative(hc.space().context()->relative);
  hb.betti = betti[static_cast<std::size_t>(hc.k())];
  const Eigen::Index nsz = static_cast<Eigen::Index>(hc.space().size());
  if (nsz == 0) {
    if (hb.betti != 0) throw SolverError("harmonic_basis: empty space but nonzero Betti number");
    hb.vectors.resize(0, 0);
    return hb;
  }

  SparseMatrix btb(nsz, nsz);
  if (hc.has_next()) btb += SparseMatrix(hc.d().transpose() * hc.d());
  if (hc.has_prev() && hc.d_prev().cols() > 0) {
    double diag = 0.0;
    for (Eigen::Index i = 0; i < nsz; ++i) diag += hc.mass().coeff(i, i);
    const double s = static_cast<double>(nsz) / diag;
    const SparseMatrix c = s * SparseMatrix(hc.d_prev().transpose() * hc.mass());
    btb += SparseMatrix(c.transpose() * c);
  }

  // largest eigenvalue of B^T B by power iteration
  Vector v = Vector::Ones(nsz) + 0.1 * seeded_block(nsz, 1, 7).col(0);
  double lam_max = 0.0;
  for (int it = 0; it < 200; ++it) {
    const Vector w = btb * v;
    const double nw = w.norm();
    if (nw == 0.0) break;
    const double next = v.dot(w) / v.squaredNorm();
    v = w / nw;
    if (std::abs(next - lam_max) <= 1e-6 * next) {
      lam_max = next;
      break;
    }
    lam_max = next;
  }
  if (lam_max <= 0.0) lam_max = 1.0;  // B = 0: whole space is harmonic
  const double sigma_max = std::sqrt(lam_max);
  hb.threshold = 1e-8 * sigma_max;

  const Eigen::Index p = std::min<Eigen::Index>(nsz, hb.betti + 2);
  const double shift = 1e-10 * lam_max;
  SparseMatrix shifted = btb;
  for (Eigen::Index i = 0; i < nsz; ++i) shifted.coeffRef(i, i) += shift;
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) throw SolverError("harmonic_basis: factorization failed");
  Eigen::MatrixXd x = orthonormalize(seeded_block(nsz, p, 20240601u));
  for (int it = 0; it < 8; ++it) x = orthonormalize(solver.solve(x));

  const Eigen::MatrixXd t = x.transpose() * (btb * x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (t + t.transpose()));
  const Eigen::VectorXd theta = es.eigenvalues();
  long count = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i)
    if (std::sqrt(std::max(0.0, theta(i))) < hb.threshold) ++count;
  if (count != hb.betti)
    throw SolverError("harmonic_basis: numerical kernel dimension " + std::to_string(count) +
                      " differs from the Betti number " + std::to_string(hb.betti) + " for k = " + std::to_string(hc.k()));
  hb.gap = p > hb.betti ? std::sqrt(std::max(0.0, theta(hb.betti))) : 0.0;

  Eigen::MatrixXd h = x * es.eigenvectors().leftCols(hb.betti);
  if (hb.betti > 0) {
    const Eigen::MatrixXd g = h.transpose() * (hc.mass() * h);
    Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (g + g.transpose()));
    h = llt.matrixL().solve(h.transpose()).transpose();
    for (Eigen::Index j = 0; j < h.cols(); ++j) {
      Eigen::Index arg;
      h.col(j).cwiseAbs().maxCoeff(&arg);
      if (h(arg, j) < 0.0) h.col(j) = -h.col(j);
    }
  }
  hb.vectors = h;
  return hb;
}


HodgeParts hodge_decompose(const HodgeComplex& hc, const HarmonicBasis& hb, const Vector& u) {
  HodgeParts parts;
  parts.exact = hc.exact_part(u);
  const Vector rest = u - parts.exact;
  if (hb.betti > 0)
    parts.harmonic = hb.vectors * (hb.vectors.transpose() * (hc.mass() * rest));
  else
    parts.harmonic = Vector::Zero(u.size());
  parts.coexact = rest - parts.harmonic;
  return parts;
}

SaddleSolution solve_mixed_hodge(const HodgeComplex& hc, const HarmonicBasis& hb, const Vector& load) {
  const Eigen::Index ns = hc.has_prev() ? hc.d_prev().cols() : 0;
  const Eigen::Index nu = static_cast<Eigen::Index>(hc.space().size());
  const Eigen::Index np = hb.betti;
  if (load.size() != nu) throw SolverError("solve_mixed_hodge: load vector has the wrong length");
  const Eigen::Index total = ns + nu + np;
  std::vector<Eigen::Triplet<double>> trip;
  auto add_block = [&](const SparseMatrix& b, Eigen::Index r0, Eigen::Index c0, double scale) {
    for (Eigen::Index c = 0; c < b.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(b, c); it; ++it)
        trip.emplace_back(static_cast<int>(r0 + it.row()), static_cast<int>(c0 + it.col()), scale * it.value());
  };
  SparseMatrix mdp, stiff;
  if (ns > 0) {
    mdp = SparseMatrix(hc.mass() * hc.d_prev());
    add_block(hc.mass_prev(), 0, 0, -1.0);
    add_block(SparseMatrix(mdp.transpose()), 0, ns, 1.0);
    add_block(mdp, ns, 0, 1.0);
  }
  if (hc.has_next()) {
    stiff = SparseMatrix(hc.d().transpose() * hc.mass_next() * hc.d());
    add_block(stiff, ns, ns, 1.0);
  }
  Eigen::MatrixXd mh;
  if (np > 0) {
    mh = hc.mass() * hb.vectors;
    for (Eigen::Index i = 0; i < nu; ++i)
      for (Eigen::Index j = 0; j < np; ++j)
        if (mh(i, j) != 0.0) {
          trip.emplace_back(static_cast<int>(ns + i), static_cast<int>(ns + nu + j), mh(i, j));
          trip.emplace_back(static_cast<int>(ns + nu + j), static_cast<int>(ns + i), mh(i, j));
        }
  }
  SparseMatrix a(total, total);
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  Vector rhs = Vector::Zero(total);
  rhs.segment(ns, nu) = load;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw SolverError("solve_mixed_hodge: saddle-point matrix is singular");
  Vector x = lu.solve(rhs);
  // one refinement step
  x += lu.solve(Vector(rhs - a * x));

  SaddleSolution sol;
  sol.sigma = x.head(ns);
  sol.u = x.segment(ns, nu);
  sol.p = x.tail(np);
  sol.p_cochain = np > 0 ? Vector(hb.vectors * sol.p) : Vector::Zero(nu);
  const Vector r = rhs - a * x;
  sol.residual_sigma = r.head(ns).norm();
  sol.residual_u = r.segment(ns, nu).norm();
  sol.residual_p = r.tail(np).norm();
  sol.rhs_norm = load.norm();
  sol.norm_sigma = ns > 0 ? std::sqrt(std::max(0.0, sol.sigma.dot(hc.mass_prev() * sol.sigma))) : 0.0;
  double hd2 = sol.u.dot(hc.mass() * sol.u);
  if (hc.has_next()) {
    const Vector du = hc.d() * sol.u;
    hd2 += du.dot(hc.mass_next() * du);
  }
  sol.norm_u_hd = std::sqrt(std::max(0.0, hd2));
  sol.norm_p = sol.p.norm();
  return sol;
}

double poincare_constant(const HodgeComplex& hc, const HarmonicBasis& hb) {
  if (!hc.has_next()) throw SolverError("poincare_constant: d vanishes on top-degree forms");
  const Eigen::Index nsz = static_cast<Eigen::Index>(hc.space().size());
  if (nsz == 0) throw SolverError("poincare_constant: empty space");
  const SparseMatrix& m = hc.mass();
  const SparseMatrix kmat = SparseMatrix(hc.d().transpose() * hc.mass_next() * hc.d());
  const SparseMatrix shifted = SparseMatrix(kmat + m);
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) throw SolverError("poincare_constant: factorization failed");

  auto deflate = [&](const Vector& x) {
    Vector y = x - hc.exact_part(x);
    if (hb.betti > 0) y -= hb.vectors * (hb.vectors.transpose() * (m * y));
    return y;
  };
  Vector x = deflate(seeded_block(nsz, 1, 99u).col(0));
  x /= std::sqrt(x.dot(m * x));
  double lam = x.dot(kmat * x);
  for (int it = 0; it < 5000; ++it) {
    Vector y = deflate(solver.solve(Vector(m * x)));
    const double ny = std::sqrt(y.dot(m * y));
    if (!(ny > 0.0)) throw SolverError("poincare_constant: iteration collapsed onto the kernel");
    x = y / ny;
    const double next = x.dot(kmat * x);
    if (std::abs(next - lam) <= 1e-14 * next) {
      lam = next;
      return 1.0 / std::sqrt(lam);
    }
    lam = next;
  }
  throw SolverError("poincare_constant: inverse iteration did not converge");
}

}  // namespace feec
