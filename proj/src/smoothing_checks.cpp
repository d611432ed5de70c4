#include "feec/smoothing_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/SVD>

#include "feec/parallel.hpp"
#include "feec/quadrature.hpp"
#include "feec/sample_fields.hpp"

namespace feec {

bool CheckReport::pass() const {
  for (const auto& m : items)
    if (!m.pass) return false;
  return true;
}

void CheckReport::at_most(const std::string& what, double value, double bound) {
  items.push_back({what, value, bound, value <= bound});
}

void CheckReport::at_least(const std::string& what, double value, double bound) {
  items.push_back({what, value, bound, value >= bound});
}

void CheckReport::report(const std::string& what, double value) {
  items.push_back({what, value, std::numeric_limits<double>::quiet_NaN(), true});
}

void CheckReport::require(const std::string& what, bool ok) {
  items.push_back({what, ok ? 1.0 : 0.0, 1.0, ok});
}

namespace {

/// Points of the extended domain, half uniform and half concentrated within
/// a few radii of the bulge boundary.
std::vector<Point> distortion_samples(const DistortionMap& map, int count, std::mt19937_64& g) {
  const auto& geo = map.geometry();
  const Point lo = geo.extended_lo(), hi = geo.extended_hi();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto& segs = geo.bulge_boundary();
  const double band = 3.0 * map.constants().L_D * map.rho().sup();
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Point x(2);
    if (i % 2 == 0 || segs.empty()) {
      x << lo(0) + (hi(0) - lo(0)) * u01(g), lo(1) + (hi(1) - lo(1)) * u01(g);
    } else {
      const auto& s = segs[static_cast<std::size_t>(g() % segs.size())];
      x(s.axis) = s.c + band * (2.0 * u01(g) - 1.0);
      x(1 - s.axis) = s.s0 - band + (s.s1 - s.s0 + 2.0 * band) * u01(g);
    }
    pts.push_back(x);
  }
  return pts;
}

}  // namespace

CheckReport check_distortion(const DistortionMap& map, int samples, std::uint64_t seed) {
  CheckReport r;
  r.name = "distortion";
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto& geo = map.geometry();
  const auto& c = map.constants();
  const double lip_bound = c.L_D * (1.0 + map.rho().lipschitz());
  const auto pts = distortion_samples(map, samples, g);

  double inv_defect = 0.0, lip_fwd = 0.0, lip_inv = 0.0;
  int displacement_violations = 0, identity_violations = 0, identity_tested = 0;
  double max_disp_ratio = 0.0;
  for (const auto& x : pts) {
    inv_defect = std::max(inv_defect, (map.forward(map.inverse(x)) - x).norm());
    inv_defect = std::max(inv_defect, (map.inverse(map.forward(x)) - x).norm());
    // partner point at a random scale between 1e-6 and the radius
    const double th = 2.0 * std::numbers::pi * u01(g);
    const double len = std::max(1e-6, map.rho().sup()) * std::pow(10.0, -4.0 * u01(g));
    Point y = x;
    y(0) += len * std::cos(th);
    y(1) += len * std::sin(th);
    lip_fwd = std::max(lip_fwd, (map.forward(x) - map.forward(y)).norm() / len);
    lip_inv = std::max(lip_inv, (map.inverse(x) - map.inverse(y)).norm() / len);

    const double rho = map.rho()(x);
    const double disp = (x - map.forward(x)).norm();
    if (disp > c.L_D * rho) ++displacement_violations;
    if (rho > 0.0) max_disp_ratio = std::max(max_disp_ratio, disp / rho);
    if (geo.dist_to_bulge_boundary(x) >= c.L_D * rho) {
      ++identity_tested;
      if (map.forward(x) != x) ++identity_violations;
    }
  }

  // balls around bulge boundary points
  int ball_violations = 0, ball_tested = 0;
  const auto& segs = geo.bulge_boundary();
  const int centres = segs.empty() ? 0 : std::max(1, samples / 100);
  for (int i = 0; i < centres; ++i) {
    const auto& s = segs[static_cast<std::size_t>(g() % segs.size())];
    Point x0(2);
    x0(s.axis) = s.c;
    x0(1 - s.axis) = s.s0 + (s.s1 - s.s0) * u01(g);
    const double rad = map.rho()(x0) / c.L_D;
    for (int j = 0; j < 100; ++j) {
      const double rr = rad * std::sqrt(u01(g)) * (1.0 - 1e-12);
      const double th = 2.0 * std::numbers::pi * u01(g);
      Point p = x0;
      p(0) += rr * std::cos(th);
      p(1) += rr * std::sin(th);
      ++ball_tested;
      if (!geo.in_bulge(map.forward(p))) ++ball_violations;
    }
  }

  r.report("samples", static_cast<double>(pts.size()));
  r.report("eps_D", c.eps_D);
  r.report("L_D", c.L_D);
  r.report("rho_sup", map.rho().sup());
  r.report("rho_lipschitz", map.rho().lipschitz());
  r.at_most("inverse_defect", inv_defect, 1e-10);
  r.at_most("lipschitz_forward", lip_fwd, lip_bound);
  r.at_most("lipschitz_inverse", lip_inv, lip_bound);
  r.report("displacement_over_rho_max", max_disp_ratio);
  r.at_most("displacement_violations", displacement_violations, 0);
  r.report("identity_points_tested", identity_tested);
  r.at_most("identity_violations", identity_violations, 0);
  r.report("ball_points_tested", ball_tested);
  r.at_most("ball_violations", ball_violations, 0);
  return r;
}

namespace {

Point uniform_point(const Point& lo, const Point& hi, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  return make_point(lo(0) + (hi(0) - lo(0)) * u01(g), lo(1) + (hi(1) - lo(1)) * u01(g));
}

Point box_point(std::mt19937_64& g) { return uniform_point(make_point(-1.0, -1.0), make_point(1.0, 1.0), g); }

FormField combine(double a, const FormField& u, double b, const FormField& v) {
  FormField w;
  w.dim = u.dim;
  w.degree = u.degree;
  w.eval = [=](const Point& x) { return Coeffs(a * u(x) + b * v(x)); };
  if (u.has_derivative() && v.has_derivative())
    w.derivative = std::make_shared<FormField>(combine(a, u.d(), b, v.d()));
  return w;
}

double fd_commutation_error(const FormField& mu, int k, const Point& x, double h) {
  const Coeffs fd = finite_difference_d([&](const Point& p) { return mu(p); }, 2, k, x, h);
  return (fd - mu.d()(x)).norm();
}

}  // namespace

BoxQuadrature box_quadrature(int cells, double finest, int gauss_points) {
  if (cells < 1 || finest <= 0.0 || gauss_points < 1) throw std::invalid_argument("box_quadrature: bad parameters");
  const double hc = 2.0 / cells;
  std::vector<double> layer{0.0};
  for (double t = finest; t < hc; t *= 2.0) layer.push_back(t);
  std::vector<double> br;
  for (double t : layer) br.push_back(-1.0 + t);
  for (int i = 1; i < cells; ++i) br.push_back(-1.0 + i * hc);
  for (auto it = layer.rbegin(); it != layer.rend(); ++it) br.push_back(1.0 - *it);

  const auto gl = gauss_legendre(gauss_points);
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      nodes.push_back(br[i] + (br[i + 1] - br[i]) * gl.nodes[q]);
      weights.push_back((br[i + 1] - br[i]) * gl.weights[q]);
    }
  BoxQuadrature out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      out.points.push_back(make_point(nodes[i], nodes[j]));
      out.weights.push_back(weights[i] * weights[j]);
    }
  return out;
}

double field_l2_norm(const FormField& u, const BoxQuadrature& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) s += q.weights[i] * u(q.points[i]).squaredNorm();
  return std::sqrt(s);
}

CheckReport check_mollifier(const RadiusFunction& rho, int samples, std::uint64_t seed) {
  CheckReport r;
  r.name = "mollifier";
  std::mt19937_64 g(seed);
  const Mollifier mu(2);
  const BallRule rule = mu.ball_rule();
  const double lip = rho.lipschitz();
  r.report("rho_sup", rho.sup());
  r.report("rho_lipschitz", lip);

  for (double rad : {0.1, 1.0, 10.0})
    r.at_most("mass_defect_r" + std::to_string(rad).substr(0, 4), std::abs(mu.mass_check(rad) - 1.0), 1e-8);
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  r.at_most("ball_rule_mass_defect", std::abs(wsum - 1.0), 1e-12);

  std::vector<Point> pts;
  for (int i = 0; i < samples; ++i) pts.push_back(box_point(g));

  // constants of every degree and affine functions are reproduced
  double const_err = 0.0;
  for (int k = 0; k <= 2; ++k) {
    Coeffs c(num_components(2, k));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = 0.5 + 0.25 * static_cast<double>(i);
    const FormField cf = constant_form_field(2, k, c);
    for (std::size_t i = 0; i < pts.size(); i += 5) const_err = std::max(const_err, (mollify(cf, rho, rule, pts[i]) - c).norm());
  }
  r.at_most("constant_defect", const_err, 1e-12);
  FormField affine;
  affine.degree = 0;
  affine.eval = [](const Point& x) {
    Coeffs c(1);
    c << 0.3 + 1.5 * x(0) - 0.7 * x(1);
    return c;
  };
  double affine_err = 0.0;
  for (std::size_t i = 0; i < pts.size(); i += 5)
    affine_err = std::max(affine_err, (mollify(affine, rho, rule, pts[i]) - affine(pts[i])).norm());
  r.at_most("affine_defect", affine_err, 1e-12);

  // commutation with d
  const std::vector<FormField> forms{trig_form(0, seed + 1), trig_form(1, seed + 2), trig_form(1, seed + 3)};
  double comm = 0.0;
  for (const auto& u : forms) {
    const FormField ru = mollify(u, rho, rule);
    for (const auto& x : pts) comm = std::max(comm, fd_commutation_error(ru, u.degree, x, 1e-5 * rho(x)));
  }
  r.at_most("commutation_max", comm, 5e-5);

  // R(d phi) is closed
  const FormField rdphi = mollify(trig_form(0, seed + 4).d(), rho, rule);
  double closed = 0.0;
  for (std::size_t i = 0; i < pts.size(); i += 5)
    closed = std::max(closed, finite_difference_d([&](const Point& p) { return rdphi(p); }, 2, 1, pts[i], 1e-5 * rho(pts[i])).norm());
  r.at_most("closedness_of_exact_input", closed, 1e-6);

  // |R u(x)| <= (1 + Lip)^k sup_{x + rho(x) B} |u|; the sampled sup includes
  // every quadrature node, so the discrete operator obeys the bound exactly.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k <= 2; ++k) {
    const FormField u = trig_form(k, seed + 10 + static_cast<std::uint64_t>(k));
    for (const auto& x : pts) {
      const double rx = rho(x);
      double sup = 0.0;
      for (const auto& y : rule.nodes) sup = std::max(sup, u(x + rx * y).norm());
      for (int j = 0; j < 200; ++j) {
        const double s = std::sqrt(u01(g)), th = 2.0 * std::numbers::pi * u01(g);
        sup = std::max(sup, u(x + rx * make_point(s * std::cos(th), s * std::sin(th))).norm());
      }
      const double lhs = mollify(u, rho, rule, x).norm();
      const double rhs = std::pow(1.0 + lip, k) * sup;
      if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
  }
  r.at_most("sup_bound_ratio", worst, 1.0 + 1e-12);
  return r;
}

CheckReport check_extension(const BoxGeometry& geometry, int samples, std::uint64_t seed) {
  CheckReport r;
  r.name = "extension";
  std::mt19937_64 g(seed);
  const ExtensionOperator e(geometry);
  const Point blo = geometry.bulge_lo(), bhi = geometry.bulge_hi();
  const Point elo = geometry.extended_lo(), ehi = geometry.extended_hi();
  const FormField u1 = trig_form(1, seed);

  int bulge_points = 0;
  double bulge_max = 0.0;
  if (!geometry.gamma_T().empty()) {
    for (int tries = 0; bulge_points < samples && tries < 1000 * samples; ++tries) {
      const Point x = uniform_point(blo, bhi, g);
      if (!geometry.in_bulge(x)) continue;
      ++bulge_points;
      bulge_max = std::max(bulge_max, e.apply(u1, x).norm());
    }
  }
  r.report("bulge_points", bulge_points);
  r.at_most("bulge_value_max", bulge_max, 0.0);

  double restrict_err = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point x = box_point(g);
    restrict_err = std::max(restrict_err, (e.apply(u1, x) - u1(x)).norm());
  }
  r.at_most("restriction_defect", restrict_err, 0.0);

  // d E u = E du away from the seams for traces vanishing on Gamma_T
  const double h = 1e-5;
  auto near_seam = [&](const Point& x) {
    for (int a = 0; a < 2; ++a)
      for (double c : {-1.0, 1.0, blo(a), bhi(a)})
        if (std::abs(x(a) - c) < 4.0 * h) return true;
    return false;
  };
  double comm = 0.0;
  for (int k = 0; k <= 1; ++k) {
    const FormField eu = e.apply(trig_form(k, seed + 1 + static_cast<std::uint64_t>(k), geometry.gamma_T(), 1));
    for (int i = 0; i < samples; ++i) {
      const Point x = uniform_point(elo, ehi, g);
      if (near_seam(x)) continue;
      comm = std::max(comm, fd_commutation_error(eu, k, x, h));
    }
  }
  r.at_most("commutation_max", comm, 1e-4);

  // measured constants: ||E u||_{L2(Omega^e)} / ||u||_{L2(Omega)} and the
  // Lipschitz constant of the source map
  const int grid = 200;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const Point x = make_point(elo(0) + (ehi(0) - elo(0)) * (i + 0.5) / grid, elo(1) + (ehi(1) - elo(1)) * (j + 0.5) / grid);
      num += e.apply(u1, x).squaredNorm() * (ehi(0) - elo(0)) * (ehi(1) - elo(1));
      const Point y = make_point(-1.0 + 2.0 * (i + 0.5) / grid, -1.0 + 2.0 * (j + 0.5) / grid);
      den += u1(y).squaredNorm() * 4.0;
    }
  r.report("C_E_measured", std::sqrt(num / den));
  double lip = 0.0;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    const Point x = uniform_point(elo, ehi, g);
    const double th = 2.0 * std::numbers::pi * u01(g), len = 1e-3 * u01(g) + 1e-9;
    const Point y = x + len * make_point(std::cos(th), std::sin(th));
    if (!geometry.in_extended(y)) continue;
    const auto sx = e.locate(x), sy = e.locate(y);
    if (sx.zero || sy.zero) continue;
    lip = std::max(lip, (sx.source - sy.source).norm() / (x - y).norm());
  }
  r.at_most("L_E_measured", lip, 1.0 + 1e-9);
  return r;
}

CheckReport check_regularizer(const Regularizer& m, int samples, std::uint64_t seed) {
  CheckReport r;
  r.name = "regularizer";
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const auto& geo = m.distortion().geometry();
  const auto& rho = m.rho();
  const double band = m.vanishing_distance();
  r.report("delta", m.delta());
  r.report("vanishing_distance", band);

  // vanishing next to Gamma_T
  const FormField u1 = trig_form(1, seed);
  double vanish = 0.0;
  int tested = 0;
  if (!geo.gamma_T().empty() && band > 0.0) {
    for (int i = 0; i < samples; ++i) {
      const BoxFace f = geo.gamma_T()[static_cast<std::size_t>(g() % geo.gamma_T().size())];
      const double d = band * u01(g) * (1.0 - 1e-9), t = 2.0 * u01(g) - 1.0;
      Point x(2);
      switch (f) {
        case BoxFace::Left: x << -1.0 + d, t; break;
        case BoxFace::Right: x << 1.0 - d, t; break;
        case BoxFace::Bottom: x << t, -1.0 + d; break;
        case BoxFace::Top: x << t, 1.0 - d; break;
      }
      ++tested;
      vanish = std::max(vanish, m.apply(u1, x).norm());
    }
  }
  r.report("vanishing_points", tested);
  r.at_most("vanishing_value_max", vanish, 0.0);

  std::vector<Point> pts;
  for (int i = 0; i < samples; ++i) pts.push_back(box_point(g));

  double comm = 0.0;
  for (int k = 0; k <= 1; ++k) {
    const FormField mu = m.apply(trig_form(k, seed + 1 + static_cast<std::uint64_t>(k), geo.gamma_T(), 2));
    for (const auto& x : pts) comm = std::max(comm, fd_commutation_error(mu, k, x, 1e-5 * m.delta() * rho(x)));
  }
  r.at_most("commutation_max", comm, 5e-5);

  // constants without a Gamma_T; 1- and 2-forms change sign under the
  // reflection, so those are tested where the ball stays inside the box
  const Regularizer plain(BoxGeometry({}, geo.tau_b(), geo.tau_e()), rho, m.delta(), m.rule().radial, m.rule().angular);
  double const_err = 0.0;
  for (int k = 0; k <= 2; ++k) {
    Coeffs c(num_components(2, k));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = 0.5 + 0.25 * static_cast<double>(i);
    const FormField cf = constant_form_field(2, k, c);
    for (const auto& x : pts) {
      const double margin = 1.0 - std::max(std::abs(x(0)), std::abs(x(1)));
      if (k > 0 && margin <= 2.0 * m.delta() * rho.sup()) continue;
      const_err = std::max(const_err, (plain.apply(cf, x) - c).norm());
    }
  }
  r.at_most("constant_defect_without_gamma_T", const_err, 1e-12);

  const FormField a = trig_form(1, seed + 5), b = trig_form(1, seed + 6);
  const FormField ab = combine(2.0, a, -3.0, b);
  double lin = 0.0;
  for (std::size_t i = 0; i < pts.size(); i += 4)
    lin = std::max(lin, (m.apply(ab, pts[i]) - (2.0 * m.apply(a, pts[i]) - 3.0 * m.apply(b, pts[i]))).norm());
  r.at_most("linearity_defect", lin, 1e-9);

  // local bound |M u(x)| <= C sup |u|; C measured
  double sup = 0.0;
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; j <= 60; ++j) sup = std::max(sup, u1(make_point(-1.0 + i / 30.0, -1.0 + j / 30.0)).norm());
  double ratio = 0.0;
  for (const auto& x : pts) ratio = std::max(ratio, m.apply(u1, x).norm() / sup);
  r.report("local_bound_constant_measured", ratio);
  return r;
}

CheckReport check_pullback_estimate(const DistortionMap& map, std::uint64_t seed) {
  CheckReport r;
  r.name = "pullback_estimate";
  const auto& geo = map.geometry();
  if (geo.bulge_boundary().empty()) {
    r.report("windows", 0);
    return r;
  }
  const auto gl = gauss_legendre(3);
  double worst = 0.0;
  int windows = 0;
  for (const auto& s : geo.bulge_boundary()) {
    ++windows;
    const double mid = 0.5 * (s.s0 + s.s1);
    Point x0(2);
    x0(s.axis) = s.c;
    x0(1 - s.axis) = mid;
    const double w = std::min(3.0 * map.constants().L_D * map.rho()(x0), 0.5 * geo.tau_b());
    const int cells = 20;
    std::vector<Point> pts;
    std::vector<double> wts;
    for (int i = 0; i < cells; ++i)
      for (int j = 0; j < cells; ++j)
        for (std::size_t p = 0; p < gl.nodes.size(); ++p)
          for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double h = 2.0 * w / cells;
            pts.push_back(make_point(x0(0) - w + h * (i + gl.nodes[p]), x0(1) - w + h * (j + gl.nodes[q])));
            wts.push_back(h * h * gl.weights[p] * gl.weights[q]);
          }
    double jn = 0.0, jin = 0.0;
    for (const auto& x : pts) {
      const Jacobian jac = map.jacobian(x);
      const Eigen::MatrixXd jm = jac;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(jm);
      jn = std::max(jn, svd.singularValues()(0));
      jin = std::max(jin, 1.0 / svd.singularValues()(1));
    }
    for (int k = 0; k <= 2; ++k) {
      const FormField u = trig_form(k, seed + static_cast<std::uint64_t>(k));
      double lhs = 0.0, image = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Jacobian jac = map.jacobian(pts[i]);
        const Coeffs v = u(map.forward(pts[i]));
        lhs += wts[i] * pullback(jac, v, k).squaredNorm();
        image += wts[i] * v.squaredNorm() * std::abs(jac.determinant());
      }
      const double bound = std::pow(jn, k) * jin * std::sqrt(image);
      worst = std::max(worst, std::sqrt(lhs) / bound);
    }
  }
  r.report("windows", windows);
  r.at_most("estimate_ratio_max", worst, 1.0 + 1e-6);
  return r;
}

CheckReport check_projection(const SmoothedProjection& pi, const BoxGeometry& geometry,
                             const ProjectionCheckOptions& options) {
  CheckReport r;
  r.name = "projection";
  const FEComplex& fe = pi.complex();
  const int n = fe.dim();
  r.report("epsilon", pi.epsilon());
  r.report("epsilon_attempts", static_cast<double>(pi.attempts().size()));
  for (int k = 0; k <= n; ++k) r.at_most("defect_k" + std::to_string(k), pi.defect(k), 1.0);

  // pi e_j = e_j for every basis function
  for (int k = 0; k <= n; ++k) {
    const auto sz = static_cast<Eigen::Index>(fe.space(k).size());
    const SparseMatrix& mass = pi.mass(k);
    std::vector<double> errs(static_cast<std::size_t>(sz), 0.0);
    parallel_for(static_cast<std::size_t>(sz), [&](std::size_t j) {
      Vector e = Vector::Zero(sz);
      e(static_cast<Eigen::Index>(j)) = 1.0;
      const Vector diff = pi.apply(k, e) - e;
      errs[j] = std::sqrt(diff.dot(mass * diff) / e.dot(mass * e));
    });
    double worst = 0.0;
    for (double v : errs) worst = std::max(worst, v);
    r.at_most("idempotence_k" + std::to_string(k), worst, 1e-8);
  }

  // inputs from the refined mesh: constrained ones for commutation, unconstrained for the norm
  const MeshedDomain fine = refine_uniform(fe.domain());
  const FEComplex ff(fine);
  std::vector<SparseMatrix> qf;
  for (int k = 0; k <= n; ++k) qf.push_back(pi.q_matrix(k, ff.space(k)));
  std::mt19937_64 g(options.seed);
  std::normal_distribution<double> nd;
  auto random_vector = [&](Eigen::Index sz) {
    Vector v(sz);
    for (Eigen::Index i = 0; i < sz; ++i) v(i) = nd(g);
    return v;
  };
  double repeat = 0.0, comm_fe = 0.0;
  for (int k = 0; k <= n; ++k) {
    const SparseMatrix& mass = pi.mass(k);
    for (int t = 0; t < options.random_inputs; ++t) {
      const Vector v = random_vector(static_cast<Eigen::Index>(ff.space(k).size()));
      const Vector pv = pi.solve(k, qf[static_cast<std::size_t>(k)] * v);
      const Vector diff = pi.apply(k, pv) - pv;
      repeat = std::max(repeat, std::sqrt(diff.dot(mass * diff) / pv.dot(mass * pv)));
      if (k < n) {
        const SparseMatrix dc = exterior_derivative(fe.space(k), fe.space(k + 1));
        const SparseMatrix df = exterior_derivative(ff.space(k), ff.space(k + 1));
        const Vector a = dc * pv;
        const Vector b = pi.solve(k + 1, qf[static_cast<std::size_t>(k + 1)] * (df * v));
        const SparseMatrix& m1 = pi.mass(k + 1);
        const Vector c = a - b;
        comm_fe = std::max(comm_fe, std::sqrt(c.dot(m1 * c) / std::max(b.dot(m1 * b), pv.dot(mass * pv))));
      }
    }
  }
  r.at_most("pi_squared_defect", repeat, 1e-7);
  r.at_most("commutation_fe_inputs", comm_fe, 1e-8);

  // smooth inputs with vanishing trace on Gamma_T
  const BoxQuadrature quad = box_quadrature();
  double comm_smooth = 0.0;
  for (int k = 0; k < n; ++k) {
    const SparseMatrix dc = exterior_derivative(fe.space(k), fe.space(k + 1));
    const SparseMatrix& m1 = pi.mass(k + 1);
    for (int i = 0; i < options.smooth_fields; ++i) {
      const FormField u = trig_form(k, options.seed + 100 * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(i),
                                    geometry.gamma_T(), 1);
      const Vector c = dc * pi.apply(k, u) - pi.apply(k + 1, u.d());
      const double scale = field_l2_norm(u, quad) + field_l2_norm(u.d(), quad);
      comm_smooth = std::max(comm_smooth, std::sqrt(c.dot(m1 * c)) / scale);
    }
  }
  r.at_most("commutation_smooth_fields", comm_smooth, 1e-6);

  // no coefficient on simplices of the closure of Gamma_T
  int bc_nonzero = 0;
  for (int k = 0; k <= n; ++k) {
    const FESpace& sp = fe.space(k);
    const Vector pv = pi.apply(k, trig_form(k, options.seed + 7));
    Vector global = Vector::Zero(static_cast<Eigen::Index>(sp.mesh().num_simplices(k)));
    for (std::size_t a = 0; a < sp.size(); ++a) global(sp.dofs()[a]) = pv(static_cast<Eigen::Index>(a));
    for (std::size_t s = 0; s < sp.mesh().num_simplices(k); ++s)
      if (sp.partition().in_closure_T(k, s) && global(static_cast<Eigen::Index>(s)) != 0.0) ++bc_nonzero;
  }
  r.at_most("gamma_T_nonzero_dofs", bc_nonzero, 0);

  const FormField a = trig_form(1, options.seed + 11), b = trig_form(1, options.seed + 12);
  const Vector lhs = pi.apply(1, combine(1.5, a, -0.5, b));
  const Vector rhs = 1.5 * pi.apply(1, a) - 0.5 * pi.apply(1, b);
  r.at_most("linearity_defect", (lhs - rhs).norm() / rhs.norm(), 1e-9);

  if (options.measure_norm) {
    MeshedDomain open_fine{fine.mesh, std::make_shared<BoundaryPartition>(*fine.mesh, std::vector<int>{})};
    const FEComplex fu(open_fine);
    for (int k = 0; k <= n; ++k) r.report("norm_k" + std::to_string(k), projection_norm(pi, k, fu.space(k)));
  }
  return r;
}

std::vector<DensityRow> density_table(const BoxGeometry& geometry, std::shared_ptr<const MeshSizeFunction> h,
                                      const FormField& u, const std::vector<double>& epsilons, double delta,
                                      int radial, int angular) {
  if (!u.has_derivative()) throw std::invalid_argument("density_table: field needs an analytic derivative");
  const int k = u.degree;
  std::vector<DensityRow> rows;
  for (double eps : epsilons) {
    const RadiusFunction rho = RadiusFunction::scaled(h, eps);
    const Regularizer m(geometry, rho, delta, radial, angular);
    const BoxQuadrature q = box_quadrature(16, 0.1 * m.vanishing_distance(), 3);
    std::vector<double> eu(q.points.size()), edu(q.points.size());
    parallel_for(q.points.size(), [&](std::size_t i) {
      const Point& x = q.points[i];
      Coeffs mu = Coeffs::Zero(num_components(2, k)), mdu = Coeffs::Zero(num_components(2, k + 1));
      m.visit(x, [&](double w, const Point& src, const Jacobian& jac) {
        mu += w * pullback(jac, u(src), k);
        mdu += w * pullback(jac, u.d()(src), k + 1);
      });
      eu[i] = q.weights[i] * (u(x) - mu).squaredNorm();
      edu[i] = q.weights[i] * (u.d()(x) - mdu).squaredNorm();
    });
    DensityRow row;
    row.epsilon = eps;
    for (std::size_t i = 0; i < eu.size(); ++i) {
      row.error_u += eu[i];
      row.error_du += edu[i];
    }
    row.error_u = std::sqrt(row.error_u);
    row.error_du = std::sqrt(row.error_du);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace feec
