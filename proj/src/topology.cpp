#include "feec/topology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace feec {

IncidenceMatrix incidence_matrix(const SimplicialMesh& mesh, int k) {
  const int n = mesh.dim();
  if (k < 0 || k >= n) throw std::out_of_range("incidence_matrix: k must be in [0, n-1]");
  std::vector<Eigen::Triplet<int>> trip;
  for (std::size_t i = 0; i < mesh.num_simplices(k + 1); ++i) {
    const int o = (k + 1 == n) ? mesh.cell_orientation(i) : 1;
    const auto& f = mesh.faces(k + 1, i);
    for (std::size_t j = 0; j < f.size(); ++j)
      trip.emplace_back(static_cast<int>(i), f[j], (j % 2 == 0 ? 1 : -1) * o);
  }
  IncidenceMatrix d(static_cast<Eigen::Index>(mesh.num_simplices(k + 1)), static_cast<Eigen::Index>(mesh.num_simplices(k)));
  d.setFromTriplets(trip.begin(), trip.end());
  return d;
}

std::vector<IncidenceMatrix> incidence_matrices(const SimplicialMesh& mesh) {
  std::vector<IncidenceMatrix> out;
  for (int k = 0; k < mesh.dim(); ++k) out.push_back(incidence_matrix(mesh, k));
  return out;
}

RelativeComplex::RelativeComplex(const SimplicialMesh& mesh, const BoundaryPartition& partition) : n_(mesh.dim()) {
  free_.resize(static_cast<std::size_t>(n_) + 1);
  local_.resize(static_cast<std::size_t>(n_) + 1);
  for (int k = 0; k <= n_; ++k) {
    auto& loc = local_[static_cast<std::size_t>(k)];
    loc.assign(mesh.num_simplices(k), -1);
    for (std::size_t i = 0; i < mesh.num_simplices(k); ++i) {
      if (k < n_ && partition.in_closure_T(k, i)) continue;
      loc[i] = static_cast<int>(free_[static_cast<std::size_t>(k)].size());
      free_[static_cast<std::size_t>(k)].push_back(static_cast<int>(i));
    }
  }
  for (int k = 0; k < n_; ++k) {
    const IncidenceMatrix full = incidence_matrix(mesh, k);
    std::vector<Eigen::Triplet<int>> trip;
    for (Eigen::Index c = 0; c < full.outerSize(); ++c)
      for (IncidenceMatrix::InnerIterator it(full, c); it; ++it) {
        const int r = local_[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(it.row())];
        const int cc = local_[static_cast<std::size_t>(k)][static_cast<std::size_t>(it.col())];
        if (r >= 0 && cc >= 0) trip.emplace_back(r, cc, it.value());
      }
    IncidenceMatrix d(static_cast<Eigen::Index>(num_free(k + 1)), static_cast<Eigen::Index>(num_free(k)));
    d.setFromTriplets(trip.begin(), trip.end());
    d_.push_back(std::move(d));
  }
}

namespace {

using SparseRow = std::vector<std::pair<int, std::int64_t>>;  // sorted by column

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("exact_rank: integer overflow");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("exact_rank: integer overflow");
  return r;
}

void normalize(SparseRow& row) {
  std::int64_t g = 0;
  for (const auto& [c, v] : row) g = std::gcd(g, v);
  if (g > 1)
    for (auto& e : row) e.second /= g;
}

// a*r - b*p for two sorted rows
SparseRow combine(const SparseRow& r, std::int64_t a, const SparseRow& p, std::int64_t b) {
  SparseRow out;
  out.reserve(r.size() + p.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.emplace_back(r[i].first, checked_mul(a, r[i].second));
      ++i;
    } else if (i == r.size() || p[j].first < r[i].first) {
      out.emplace_back(p[j].first, checked_sub(0, checked_mul(b, p[j].second)));
      ++j;
    } else {
      const std::int64_t v = checked_sub(checked_mul(a, r[i].second), checked_mul(b, p[j].second));
      if (v != 0) out.emplace_back(r[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

long exact_rank(const IncidenceMatrix& m) {
  // rows of m as sparse integer rows
  std::vector<SparseRow> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index c = 0; c < m.outerSize(); ++c)
    for (IncidenceMatrix::InnerIterator it(m, c); it; ++it)
      if (it.value() != 0) rows[static_cast<std::size_t>(it.row())].emplace_back(static_cast<int>(it.col()), it.value());
  for (auto& r : rows) std::sort(r.begin(), r.end());

  std::map<int, SparseRow> pivots;  // leading column -> reduced row
  for (auto& row : rows) {
    while (!row.empty()) {
      const int lead = row.front().first;
      auto it = pivots.find(lead);
      if (it == pivots.end()) {
        normalize(row);
        pivots.emplace(lead, std::move(row));
        break;
      }
      const std::int64_t a = it->second.front().second, b = row.front().second;
      const std::int64_t g = std::gcd(a, b);
      row = combine(row, a / g, it->second, b / g);
      normalize(row);
    }
  }
  return static_cast<long>(pivots.size());
}

std::vector<long> betti_relative(const RelativeComplex& complex) {
  const int n = complex.dim();
  std::vector<long> rank(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k) rank[static_cast<std::size_t>(k)] = exact_rank(complex.d(k));
  std::vector<long> b(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    long v = static_cast<long>(complex.num_free(k));
    if (k < n) v -= rank[static_cast<std::size_t>(k)];
    if (k > 0) v -= rank[static_cast<std::size_t>(k) - 1];
    b[static_cast<std::size_t>(k)] = v;
  }
  return b;
}

std::vector<long> betti_relative(const SimplicialMesh& mesh, const BoundaryPartition& partition) {
  return betti_relative(RelativeComplex(mesh, partition));
}

DualityReport verify_poincare_lefschetz(const SimplicialMesh& mesh, const BoundaryPartition& partition) {
  DualityReport rep;
  rep.b_T = betti_relative(mesh, partition);
  rep.b_N = betti_relative(mesh, partition.complement(mesh));
  const int n = mesh.dim();
  rep.holds = true;
  for (int k = 0; k <= n; ++k)
    if (rep.b_T[static_cast<std::size_t>(k)] != rep.b_N[static_cast<std::size_t>(n - k)]) rep.holds = false;
  return rep;
}

long relative_euler_characteristic(const RelativeComplex& complex) {
  long chi = 0;
  for (int k = 0; k <= complex.dim(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(complex.num_free(k));
  return chi;
}

}  // namespace feec
