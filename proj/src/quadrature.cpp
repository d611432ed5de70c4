#include "feec/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <map>
#include <stdexcept>

namespace feec {

QuadratureRule1D gauss_legendre(int points) {
  if (points < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix of the Legendre recurrence.
  const int n = points;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule1D rule;
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    rule.nodes.push_back(0.5 * (1.0 + eig.eigenvalues()(i)));
    rule.weights.push_back(v0 * v0);  // 2 v0^2 on [-1,1], halved
  }
  return rule;
}

namespace {

SimplexRule build_simplex_rule(int dim, int degree) {
  SimplexRule rule;
  rule.dim = dim;
  if (dim == 0) {
    rule.points.push_back(Point(0));
    rule.weights.push_back(1.0);
    return rule;
  }
  // Collapsed coordinates x_j = s_j * prod_{i<j}(1 - s_i), Jacobian
  // prod_i (1 - s_i)^{dim-1-i}; q points per direction cover degree + dim - 1.
  const int q = std::max(1, (degree + dim + 2) / 2);
  const QuadratureRule1D g = gauss_legendre(q);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  while (true) {
    Point p(dim);
    double w = 1.0;
    double scale = 1.0;
    for (int j = 0; j < dim; ++j) {
      const double s = g.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
      p(j) = scale * s;
      w *= g.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] * scale;
      scale *= (1.0 - s);
    }
    rule.points.push_back(p);
    rule.weights.push_back(w);
    int j = dim - 1;
    while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == q) {
      idx[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
  }
  return rule;
}

}  // namespace

const SimplexRule& simplex_rule(int dim, int degree) {
  if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("simplex_rule: bad dimension");
  static thread_local std::map<std::pair<int, int>, SimplexRule> cache;
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_simplex_rule(dim, degree)).first;
  return it->second;
}

}  // namespace feec
