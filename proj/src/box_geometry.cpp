#include "feec/box_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace feec {

BoxGeometry::BoxGeometry(std::vector<BoxFace> gamma_T, double tau_b, double tau_e)
    : faces_(std::move(gamma_T)), tau_b_(tau_b), tau_e_(tau_e) {
  if (!(tau_b > 0.0) || !(tau_e > 0.0)) throw GeometryError("bulge and collar widths must be positive");
  if (tau_e > tau_b + 1e-15) throw GeometryError("collar width must not exceed the bulge thickness");
  std::sort(faces_.begin(), faces_.end());
  faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());
  lo_ = make_point(has_face(BoxFace::Left) ? -1.0 - tau_b : -1.0, has_face(BoxFace::Bottom) ? -1.0 - tau_b : -1.0);
  hi_ = make_point(has_face(BoxFace::Right) ? 1.0 + tau_b : 1.0, has_face(BoxFace::Top) ? 1.0 + tau_b : 1.0);

  // 3x3 grid of Omega^b; the centre cell is Omega, every other cell of
  // positive size belongs to the bulge.
  std::array<std::array<double, 4>, 2> br{};
  for (int a = 0; a < 2; ++a) br[static_cast<std::size_t>(a)] = {lo_(a), -1.0, 1.0, hi_(a)};
  auto width = [&](int a, int i) { return br[static_cast<std::size_t>(a)][static_cast<std::size_t>(i) + 1] - br[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]; };
  auto is_bulge = [&](int i, int j) {
    if (i < 0 || i > 2 || j < 0 || j > 2) return false;
    if (i == 1 && j == 1) return false;
    return width(0, i) > 0.0 && width(1, j) > 0.0;
  };
  std::vector<BulgeSegment> raw;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (!is_bulge(i, j)) continue;
      const double x0 = br[0][static_cast<std::size_t>(i)], x1 = br[0][static_cast<std::size_t>(i) + 1];
      const double y0 = br[1][static_cast<std::size_t>(j)], y1 = br[1][static_cast<std::size_t>(j) + 1];
      if (!is_bulge(i - 1, j)) raw.push_back({0, x0, y0, y1, +1});
      if (!is_bulge(i + 1, j)) raw.push_back({0, x1, y0, y1, -1});
      if (!is_bulge(i, j - 1)) raw.push_back({1, y0, x0, x1, +1});
      if (!is_bulge(i, j + 1)) raw.push_back({1, y1, x0, x1, -1});
    }
  std::sort(raw.begin(), raw.end(), [](const BulgeSegment& a, const BulgeSegment& b) {
    return std::tie(a.axis, a.c, a.inward, a.s0) < std::tie(b.axis, b.c, b.inward, b.s0);
  });
  for (const auto& s : raw) {
    if (!segments_.empty()) {
      auto& last = segments_.back();
      if (last.axis == s.axis && last.c == s.c && last.inward == s.inward && std::abs(last.s1 - s.s0) < 1e-14) {
        last.s1 = s.s1;
        continue;
      }
    }
    segments_.push_back(s);
  }
}

bool BoxGeometry::has_face(BoxFace f) const { return std::find(faces_.begin(), faces_.end(), f) != faces_.end(); }

bool BoxGeometry::in_closed_omega(const Point& x, double tol) const {
  return std::abs(x(0)) <= 1.0 + tol && std::abs(x(1)) <= 1.0 + tol;
}

bool BoxGeometry::in_bulge(const Point& x) const {
  const bool in_b = x(0) > lo_(0) && x(0) < hi_(0) && x(1) > lo_(1) && x(1) < hi_(1);
  return in_b && !in_closed_omega(x);
}

bool BoxGeometry::in_extended(const Point& x, double tol) const {
  const Point a = extended_lo(), b = extended_hi();
  return x(0) >= a(0) - tol && x(0) <= b(0) + tol && x(1) >= a(1) - tol && x(1) <= b(1) + tol;
}

double dist_to_segment(const Point& x, const BulgeSegment& s) {
  const int o = 1 - s.axis;
  const double dn = x(s.axis) - s.c;
  const double dt = x(o) < s.s0 ? s.s0 - x(o) : (x(o) > s.s1 ? x(o) - s.s1 : 0.0);
  return std::hypot(dn, dt);
}

double BoxGeometry::dist_to_bulge_boundary(const Point& x) const {
  double d = 1e300;
  for (const auto& s : segments_) d = std::min(d, dist_to_segment(x, s));
  return d;
}

double BoxGeometry::dist_to_gamma_T(const Point& x) const {
  double d = 1e300;
  for (BoxFace f : faces_) {
    BulgeSegment s;
    s.axis = (f == BoxFace::Left || f == BoxFace::Right) ? 0 : 1;
    s.c = (f == BoxFace::Left || f == BoxFace::Bottom) ? -1.0 : 1.0;
    s.s0 = -1.0;
    s.s1 = 1.0;
    d = std::min(d, dist_to_segment(x, s));
  }
  return d;
}

BoxGeometry BoxGeometry::from_patch(const PatchSpec& patch, double tau_b, double tau_e) {
  if (!patch.whole_faces_only())
    throw GeometryError("the smoothing pipeline requires Gamma_T to be a union of whole faces");
  return BoxGeometry(patch.whole_faces(), tau_b, tau_e);
}

}  // namespace feec
