#include "feec/radius.hpp"

#include <stdexcept>

namespace feec {

RadiusFunction RadiusFunction::constant(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  RadiusFunction f;
  f.factor_ = r;
  return f;
}

RadiusFunction RadiusFunction::scaled(std::shared_ptr<const MeshSizeFunction> h, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("radius scale must be positive");
  RadiusFunction f;
  f.factor_ = eps;
  f.h_ = std::move(h);
  return f;
}

double RadiusFunction::operator()(const Point& x) const { return h_ ? factor_ * h_->value(x) : factor_; }

Point RadiusFunction::gradient(const Point& x) const {
  return h_ ? Point(factor_ * h_->gradient(x)) : Point(Point::Zero(x.size()));
}

RadiusFunction RadiusFunction::scaled_by(double f) const {
  RadiusFunction r = *this;
  r.factor_ *= f;
  return r;
}

bool RadiusFunction::is_constant() const { return !h_ || h_->is_constant(); }
double RadiusFunction::sup() const { return h_ ? factor_ * h_->h_max() : factor_; }
double RadiusFunction::inf() const { return h_ ? factor_ * h_->h_min() : factor_; }
double RadiusFunction::lipschitz() const { return h_ ? factor_ * h_->lipschitz() : 0.0; }

}  // namespace feec
