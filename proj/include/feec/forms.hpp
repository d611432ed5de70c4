#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SparseCore>

namespace feec {

constexpr int kMaxDim = 3;

/// Point in R^n, n <= 3, stored inline.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
/// Coefficients of an alternating k-tensor over the basis dx^I, I a sorted
/// k-subset in lexicographic order. C(n,k) <= 3 for n <= 3.
using Coeffs = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Jacobian = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
/// Columns are vectors in R^n.
using VectorFrame = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

Point make_point(double x);
Point make_point(double x, double y);

/// Number of basis alternants, C(n,k).
int num_components(int n, int k);

/// Sorted k-subsets of {0..n-1} in lexicographic order.
const std::vector<std::vector<int>>& subsets(int n, int k);

/// Index of a sorted subset within subsets(n, k).
int subset_index(int n, const std::vector<int>& subset);

/// u(v_1, ..., v_k) for the k vectors stored as the columns of `frame`.
double evaluate_on_frame(const Coeffs& u, int n, int k, const VectorFrame& frame);

/// Pullback of the covector u at the image point along a map with Jacobian `jac`:
/// (F^* u)(v_1..v_k) = u(J v_1, ..., J v_k).
Coeffs pullback(const Jacobian& jac, const Coeffs& u, int k);

Coeffs wedge(int n, const Coeffs& a, int ka, const Coeffs& b, int kb);

/// Hodge star in 2D, k -> 2 - k, for the Euclidean metric.
Coeffs hodge_star_2d(const Coeffs& u, int k);

/// A smooth differential k-form given by evaluation, with an optional
/// analytic exterior derivative.
struct FormField {
  int dim = 2;
  int degree = 0;
  std::function<Coeffs(const Point&)> eval;
  std::shared_ptr<const FormField> derivative;

  Coeffs operator()(const Point& x) const { return eval(x); }
  bool has_derivative() const { return static_cast<bool>(derivative); }
  const FormField& d() const {
    if (!derivative) throw std::logic_error("FormField: no analytic exterior derivative");
    return *derivative;
  }
};

FormField zero_form_field(int dim, int degree);

/// Constant k-form.
FormField constant_form_field(int dim, int degree, const Coeffs& value);

/// Exterior derivative of `field` at x by central differences with step h.
/// Verification tool only.
Coeffs finite_difference_d(const std::function<Coeffs(const Point&)>& field, int dim, int degree,
                           const Point& x, double h);

}  // namespace feec
