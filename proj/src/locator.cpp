#include "feec/locator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace feec {

PointLocator::PointLocator(const SimplicialMesh& mesh) : mesh_(&mesh), n_(mesh.dim()) {
  const std::size_t nc = mesh.num_simplices(n_);
  lo_ = mesh.bbox_min();
  hi_ = mesh.bbox_max();
  const double per_axis = std::max(1.0, std::floor(std::pow(static_cast<double>(nc), 1.0 / n_)));
  counts_.assign(static_cast<std::size_t>(n_), static_cast<int>(per_axis));
  std::size_t total = 1;
  for (int c : counts_) total *= static_cast<std::size_t>(c);
  buckets_.assign(total, {});

  grads_.resize(nc);
  cell_lo_.resize(nc);
  cell_hi_.resize(nc);
  for (std::size_t i = 0; i < nc; ++i) {
    const auto& s = mesh.simplex(n_, i);
    const VectorFrame f = mesh.edge_frame(n_, i);
    const Eigen::MatrixXd inv = Eigen::MatrixXd(f).inverse();  // rows: grad lambda_1..n
    Eigen::MatrixXd g(n_ + 1, n_);
    g.bottomRows(n_) = inv;
    g.row(0) = -inv.colwise().sum();
    grads_[i] = g;
    Point a = mesh.vertex(static_cast<std::size_t>(s[0])), b = a;
    for (int v : s) {
      a = a.cwiseMin(mesh.vertex(static_cast<std::size_t>(v)));
      b = b.cwiseMax(mesh.vertex(static_cast<std::size_t>(v)));
    }
    cell_lo_[i] = a;
    cell_hi_[i] = b;
    for (int bi : bucket_range(a, b)) buckets_[static_cast<std::size_t>(bi)].push_back(static_cast<int>(i));
  }
}

std::vector<int> PointLocator::bucket_range(const Point& lo, const Point& hi) const {
  std::vector<int> first(static_cast<std::size_t>(n_)), last(static_cast<std::size_t>(n_));
  for (int c = 0; c < n_; ++c) {
    const double w = (hi_(c) - lo_(c)) / counts_[static_cast<std::size_t>(c)];
    auto clampi = [&](double t) {
      return std::clamp(static_cast<int>(std::floor(t)), 0, counts_[static_cast<std::size_t>(c)] - 1);
    };
    first[static_cast<std::size_t>(c)] = clampi((lo(c) - lo_(c)) / w - 1e-9);
    last[static_cast<std::size_t>(c)] = clampi((hi(c) - lo_(c)) / w + 1e-9);
    if (hi(c) < lo_(c) - 1e-9 || lo(c) > hi_(c) + 1e-9) return {};
  }
  std::vector<int> out;
  if (n_ == 1) {
    for (int i = first[0]; i <= last[0]; ++i) out.push_back(i);
  } else if (n_ == 2) {
    for (int j = first[1]; j <= last[1]; ++j)
      for (int i = first[0]; i <= last[0]; ++i) out.push_back(i + counts_[0] * j);
  } else {
    for (int k = first[2]; k <= last[2]; ++k)
      for (int j = first[1]; j <= last[1]; ++j)
        for (int i = first[0]; i <= last[0]; ++i) out.push_back(i + counts_[0] * (j + counts_[1] * k));
  }
  return out;
}

Eigen::VectorXd PointLocator::barycentric(std::size_t cell, const Point& x) const {
  const auto& g = grads_[cell];
  const Point& v0 = mesh_->vertex(static_cast<std::size_t>(mesh_->simplex(n_, cell)[0]));
  Eigen::VectorXd lam(n_ + 1);
  lam.tail(n_) = g.bottomRows(n_) * (x - v0);
  lam(0) = 1.0 - lam.tail(n_).sum();
  return lam;
}

bool PointLocator::contains(std::size_t cell, const Point& x, double tol) const {
  return barycentric(cell, x).minCoeff() >= -tol;
}

std::optional<int> PointLocator::locate(const Point& x, double tol) const {
  const auto bs = bucket_range(x, x);
  std::optional<int> best;
  double best_min = -1e300;
  for (int b : bs)
    for (int c : buckets_[static_cast<std::size_t>(b)]) {
      const double m = barycentric(static_cast<std::size_t>(c), x).minCoeff();
      if (m >= -tol && m > best_min) {
        best_min = m;
        best = c;
      }
    }
  return best;
}

std::vector<int> PointLocator::cells_near(const Point& lo, const Point& hi) const {
  std::vector<int> out;
  for (int b : bucket_range(lo, hi))
    for (int c : buckets_[static_cast<std::size_t>(b)]) {
      const auto ci = static_cast<std::size_t>(c);
      bool overlap = true;
      for (int d = 0; d < n_; ++d)
        if (cell_hi_[ci](d) < lo(d) - 1e-12 || cell_lo_[ci](d) > hi(d) + 1e-12) overlap = false;
      if (overlap) out.push_back(c);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace feec
