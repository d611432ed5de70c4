#include "feec/forms.hpp"

#include <array>
#include <algorithm>

namespace feec {

Point make_point(double x) {
  Point p(1);
  p << x;
  return p;
}

Point make_point(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

int num_components(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

namespace {

std::vector<std::vector<int>> build_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

struct SubsetTable {
  std::array<std::array<std::vector<std::vector<int>>, kMaxDim + 1>, kMaxDim + 1> table;
  SubsetTable() {
    for (int n = 0; n <= kMaxDim; ++n)
      for (int k = 0; k <= n; ++k) table[n][k] = build_subsets(n, k);
  }
};

const SubsetTable& subset_table() {
  static const SubsetTable t;
  return t;
}

double small_det(const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>& m) {
  switch (m.rows()) {
    case 0: return 1.0;
    case 1: return m(0, 0);
    case 2: return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    default: return m.determinant();
  }
}

}  // namespace

const std::vector<std::vector<int>>& subsets(int n, int k) {
  if (n < 0 || n > kMaxDim || k < 0 || k > n) throw std::out_of_range("subsets: bad (n,k)");
  return subset_table().table[n][k];
}

int subset_index(int n, const std::vector<int>& subset) {
  const auto& all = subsets(n, static_cast<int>(subset.size()));
  for (std::size_t i = 0; i < all.size(); ++i)
    if (all[i] == subset) return static_cast<int>(i);
  throw std::invalid_argument("subset_index: not a sorted subset");
}

double evaluate_on_frame(const Coeffs& u, int n, int k, const VectorFrame& frame) {
  if (k == 0) return u(0);
  const auto& idx = subsets(n, k);
  double s = 0.0;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> minor(k, k);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) minor(r, c) = frame(idx[a][r], c);
    s += u(static_cast<Eigen::Index>(a)) * small_det(minor);
  }
  return s;
}

Coeffs pullback(const Jacobian& jac, const Coeffs& u, int k) {
  const int n = static_cast<int>(jac.cols());
  const int m = static_cast<int>(jac.rows());
  if (k == 0) return u;
  const auto& out_idx = subsets(n, k);
  const auto& in_idx = subsets(m, k);
  Coeffs out = Coeffs::Zero(static_cast<Eigen::Index>(out_idx.size()));
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim> minor(k, k);
  for (std::size_t i = 0; i < out_idx.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < in_idx.size(); ++j) {
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) minor(r, c) = jac(in_idx[j][r], out_idx[i][c]);
      s += u(static_cast<Eigen::Index>(j)) * small_det(minor);
    }
    out(static_cast<Eigen::Index>(i)) = s;
  }
  return out;
}

Coeffs wedge(int n, const Coeffs& a, int ka, const Coeffs& b, int kb) {
  const int k = ka + kb;
  if (k > n) return Coeffs::Zero(0);
  const auto& ia = subsets(n, ka);
  const auto& ib = subsets(n, kb);
  Coeffs out = Coeffs::Zero(num_components(n, k));
  for (std::size_t i = 0; i < ia.size(); ++i) {
    for (std::size_t j = 0; j < ib.size(); ++j) {
      std::vector<int> merged = ia[i];
      merged.insert(merged.end(), ib[j].begin(), ib[j].end());
      // sign of the sorting permutation; zero on repeated index
      int sign = 1;
      bool repeated = false;
      for (std::size_t p = 0; p < merged.size(); ++p)
        for (std::size_t q = p + 1; q < merged.size(); ++q) {
          if (merged[p] == merged[q]) repeated = true;
          if (merged[p] > merged[q]) sign = -sign;
        }
      if (repeated) continue;
      std::sort(merged.begin(), merged.end());
      out(subset_index(n, merged)) += sign * a(static_cast<Eigen::Index>(i)) * b(static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

Coeffs hodge_star_2d(const Coeffs& u, int k) {
  Coeffs out;
  switch (k) {
    case 0: out.resize(1); out(0) = u(0); break;
    case 1: out.resize(2); out(0) = -u(1); out(1) = u(0); break;
    case 2: out.resize(1); out(0) = u(0); break;
    default: throw std::invalid_argument("hodge_star_2d: degree out of range");
  }
  return out;
}

FormField zero_form_field(int dim, int degree) {
  return constant_form_field(dim, degree, Coeffs::Zero(num_components(dim, degree)));
}

FormField constant_form_field(int dim, int degree, const Coeffs& value) {
  FormField f;
  f.dim = dim;
  f.degree = degree;
  f.eval = [value](const Point&) { return value; };
  if (degree < dim) {
    auto d = std::make_shared<FormField>();
    d->dim = dim;
    d->degree = degree + 1;
    const int nc = num_components(dim, degree + 1);
    d->eval = [nc](const Point&) { return Coeffs(Coeffs::Zero(nc)); };
    f.derivative = d;
  }
  return f;
}

Coeffs finite_difference_d(const std::function<Coeffs(const Point&)>& field, int dim, int degree,
                           const Point& x, double h) {
  // (du)_I = sum_j (-1)^j d_{i_j} u_{I \ i_j}
  const auto& out_idx = subsets(dim, degree + 1);
  std::vector<Coeffs> partial(static_cast<std::size_t>(dim));
  for (int c = 0; c < dim; ++c) {
    Point xp = x, xm = x;
    xp(c) += h;
    xm(c) -= h;
    partial[static_cast<std::size_t>(c)] = (field(xp) - field(xm)) / (2.0 * h);
  }
  Coeffs out = Coeffs::Zero(static_cast<Eigen::Index>(out_idx.size()));
  for (std::size_t i = 0; i < out_idx.size(); ++i) {
    const auto& I = out_idx[i];
    for (std::size_t j = 0; j < I.size(); ++j) {
      std::vector<int> rest;
      for (std::size_t q = 0; q < I.size(); ++q)
        if (q != j) rest.push_back(I[q]);
      const int sign = (j % 2 == 0) ? 1 : -1;
      const int comp = degree == 0 ? 0 : subset_index(dim, rest);
      out(static_cast<Eigen::Index>(i)) += sign * partial[static_cast<std::size_t>(I[j])](comp);
    }
  }
  return out;
}

}  // namespace feec
