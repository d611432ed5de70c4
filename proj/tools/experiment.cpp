#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "feec/hodge.hpp"
#include "feec/mesh_io.hpp"
#include "feec/mesh_quality.hpp"
#include "feec/projection.hpp"
#include "feec/sample_fields.hpp"
#include "feec/smoothing_checks.hpp"
#include "feec/topology.hpp"

namespace feec::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kChecks{"distortion", "mollify", "extension", "projection", "density"};
const std::set<std::string> kRhs{"sine", "harmonic", "dx", "random"};

// NaN has no JSON literal; it is written as null
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const std::vector<long>& v) { return json(v); }

json check_json(const CheckReport& r) {
  json items = json::array();
  for (const auto& m : r.items) items.push_back({{"name", m.name}, {"value", number(m.value)}, {"bound", number(m.bound)}, {"pass", m.pass}});
  return {{"name", r.name}, {"pass", r.pass()}, {"measurements", items}};
}

double m_norm(const Vector& v, const SparseMatrix& m) { return std::sqrt(std::max(0.0, v.dot(m * v))); }

Vector random_vector(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = static_cast<double>(g() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  return v;
}

/// Whole box faces carried by gamma_T; a partially covered face is an error.
std::vector<BoxFace> box_faces(const MeshedDomain& d) {
  const auto& mesh = *d.mesh;
  std::vector<BoxFace> faces;
  const std::set<int> in_t(d.partition->gamma_T().begin(), d.partition->gamma_T().end());
  for (BoxFace f : {BoxFace::Left, BoxFace::Right, BoxFace::Bottom, BoxFace::Top}) {
    const int axis = (f == BoxFace::Left || f == BoxFace::Right) ? 0 : 1;
    const double c = (f == BoxFace::Left || f == BoxFace::Bottom) ? -1.0 : 1.0;
    int on = 0, covered = 0;
    for (int e : mesh.boundary_facets()) {
      bool all = true;
      for (int v : mesh.simplex(1, static_cast<std::size_t>(e)))
        if (std::abs(mesh.vertex(static_cast<std::size_t>(v))(axis) - c) > 1e-12) all = false;
      if (!all) continue;
      ++on;
      if (in_t.count(e)) ++covered;
    }
    if (covered > 0 && covered < on)
      throw ConfigError("gamma_T covers part of the " + face_name(f) + " face; the smoothing pipeline needs whole faces");
    if (on > 0 && covered == on) faces.push_back(f);
  }
  return faces;
}

const FormField& require_derivative(const FormField& u) {
  if (!u.has_derivative()) throw ConfigError("field has no analytic derivative");
  return u;
}

}  // namespace

json ExperimentConfig::to_json() const {
  json m;
  if (!mesh.file.empty()) {
    m = {{"file", mesh.file}};
  } else {
    m = {{"dim", mesh.dim}, {"divisions", mesh.divisions}, {"grading", mesh.grading}};
  }
  return {{"mesh", m},
          {"patch", patch ? json(*patch) : json(nullptr)},
          {"k", k},
          {"epsilon", epsilon},
          {"delta", delta},
          {"max_halvings", max_halvings},
          {"levels", levels},
          {"rhs", rhs},
          {"quadrature_degree", quadrature_degree},
          {"ball_radial", ball_radial},
          {"ball_angular", ball_angular},
          {"tolerance", tolerance},
          {"seed", seed},
          {"checks", checks},
          {"density_epsilons", density_epsilons}};
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"mesh", "patch", "k", "epsilon", "delta", "max_halvings", "levels", "rhs",
                                           "quadrature_degree", "ball_radial", "ball_angular", "tolerance", "seed",
                                           "checks", "density_epsilons", "schema"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    if (doc.contains("schema") && doc.at("schema").get<int>() != 1) throw ConfigError("unsupported config schema");
    if (doc.contains("mesh")) {
      const auto& m = doc.at("mesh");
      if (m.contains("file")) {
        c.mesh.file = m.at("file").get<std::string>();
        c.patch.reset();
      }
      if (m.contains("dim")) c.mesh.dim = m.at("dim").get<int>();
      if (m.contains("divisions")) c.mesh.divisions = m.at("divisions").get<int>();
      if (m.contains("grading")) c.mesh.grading = m.at("grading").get<double>();
    }
    if (doc.contains("patch")) {
      if (doc.at("patch").is_null())
        c.patch.reset();
      else
        c.patch = doc.at("patch").get<std::string>();
    }
    auto read = [&](const char* key, auto& field) {
      if (doc.contains(key)) field = doc.at(key).get<std::decay_t<decltype(field)>>();
    };
    read("k", c.k);
    read("epsilon", c.epsilon);
    read("delta", c.delta);
    read("max_halvings", c.max_halvings);
    read("levels", c.levels);
    read("rhs", c.rhs);
    read("quadrature_degree", c.quadrature_degree);
    read("ball_radial", c.ball_radial);
    read("ball_angular", c.ball_angular);
    read("tolerance", c.tolerance);
    read("seed", c.seed);
    read("checks", c.checks);
    read("density_epsilons", c.density_epsilons);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (mesh.file.empty()) {
    if (mesh.dim != 1 && mesh.dim != 2) throw ConfigError("mesh dim must be 1 or 2");
    if (mesh.divisions < 1 || mesh.divisions > 512) throw ConfigError("divisions must be in [1, 512]");
    if (std::abs(mesh.grading) * std::numbers::pi >= 1.0) throw ConfigError("grading amplitude must satisfy |a| < 1/pi");
    if (mesh.grading != 0.0 && mesh.dim != 2) throw ConfigError("grading applies to 2D meshes only");
    if (!patch) throw ConfigError("a generated mesh needs a patch");
  } else if (patch) {
    throw ConfigError("gamma_T of a mesh file is read from the file; do not pass a patch");
  }
  if (k < 0 || k > 2) throw ConfigError("degree k must be 0, 1 or 2");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(delta > 0.0) || delta >= 1.0) throw ConfigError("delta must be in (0, 1)");
  if (max_halvings < 0 || max_halvings > 30) throw ConfigError("max_halvings must be in [0, 30]");
  if (levels < 2 || levels > 8) throw ConfigError("levels must be in [2, 8]");
  if (!kRhs.count(rhs)) throw ConfigError("unknown rhs '" + rhs + "' (sine, harmonic, dx, random)");
  if (quadrature_degree < 1 || quadrature_degree > 20) throw ConfigError("quadrature_degree must be in [1, 20]");
  if (ball_radial < 1 || ball_angular < 1) throw ConfigError("ball rule orders must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  for (const auto& c : checks)
    if (!kChecks.count(c)) throw ConfigError("unknown check '" + c + "'");
  if (density_epsilons.empty()) throw ConfigError("density_epsilons is empty");
  for (double e : density_epsilons)
    if (!(e > 0.0)) throw ConfigError("density epsilons must be positive");
  for (std::size_t i = 1; i < density_epsilons.size(); ++i)
    if (!(density_epsilons[i] < density_epsilons[i - 1])) throw ConfigError("density epsilons must be decreasing");
}

MeshedDomain build_domain(const ExperimentConfig& config) {
  if (!config.mesh.file.empty()) {
    const MeshedDomain d = read_mesh_file(config.mesh.file);
    if (d.mesh->dim() == 2) check_partition_admissible(*d.mesh, *d.partition);
    return d;
  }
  MeshedDomain d = make_box_mesh(config.mesh.dim, config.mesh.divisions, PatchSpec::parse(*config.patch));
  if (config.mesh.grading != 0.0) d = grade_box_mesh(d, config.mesh.grading);
  return d;
}

CommandResult cmd_betti(const ExperimentConfig& config) {
  const MeshedDomain d = build_domain(config);
  const auto dual = verify_poincare_lefschetz(*d.mesh, *d.partition);
  const RelativeComplex rc(*d.mesh, *d.partition);
  CommandResult out;
  out.report["result"] = {{"b", vector_json(dual.b_T)},
                          {"b_complement", vector_json(dual.b_N)},
                          {"dual_check", dual.holds},
                          {"euler_characteristic", euler_characteristic(*d.mesh)},
                          {"relative_euler_characteristic", relative_euler_characteristic(rc)}};
  out.exit_code = dual.holds ? 0 : 1;
  return out;
}

CommandResult cmd_harmonic(const ExperimentConfig& config) {
  const MeshedDomain d = build_domain(config);
  if (config.k > d.mesh->dim()) throw ConfigError("degree k exceeds the mesh dimension");
  const FEComplex fe(d);
  const HodgeComplex hc(fe, config.k);
  const long betti = betti_relative(*d.mesh, *d.partition).at(static_cast<std::size_t>(config.k));
  CommandResult out;
  json r{{"k", config.k}, {"betti", betti}};
  HarmonicBasis hb;
  try {
    hb = harmonic_basis(hc);
  } catch (const SolverError& e) {
    r["error"] = e.what();
    out.report["result"] = r;
    out.exit_code = 1;
    return out;
  }
  const auto& q = hb.vectors;
  const long dim = static_cast<long>(q.cols());
  double closed = 0.0, coclosed = 0.0;
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Vector v = q.col(j);
    if (hc.has_next()) closed = std::max(closed, (hc.d() * v).norm());
    if (hc.has_prev()) coclosed = std::max(coclosed, (hc.d_prev().transpose() * (hc.mass() * v)).norm());
  }
  const double ortho =
      dim > 0 ? (Eigen::MatrixXd(q.transpose() * (hc.mass() * q)) - Eigen::MatrixXd::Identity(dim, dim)).norm() : 0.0;
  r["dimension"] = dim;
  r["gap"] = number(hb.gap);
  r["threshold"] = number(hb.threshold);
  r["closed_residual"] = closed;
  r["coclosed_residual"] = coclosed;
  r["orthonormality_defect"] = ortho;
  if (config.k == 1 && d.mesh->dim() == 2 && dim > 0) {
    // angle between I(dx), I(dy) and the harmonic space
    json angles;
    for (int axis = 0; axis < 2; ++axis) {
      Coeffs c = Coeffs::Zero(2);
      c(axis) = 1.0;
      const Vector v = canonical_interpolant(fe.space(1), constant_form_field(2, 1, c), config.quadrature_degree).coeffs;
      const double vn = m_norm(v, hc.mass());
      if (vn == 0.0) {
        angles[axis == 0 ? "dx" : "dy"] = nullptr;
        continue;
      }
      const Vector proj = q * (q.transpose() * (hc.mass() * v));
      const double cosine = std::min(1.0, m_norm(proj, hc.mass()) / vn);
      angles[axis == 0 ? "dx" : "dy"] = std::acos(cosine) * 180.0 / std::numbers::pi;
    }
    r["angle_to_interpolant_deg"] = angles;
  }
  const bool ok = dim == betti && closed <= config.tolerance && coclosed <= config.tolerance && ortho <= config.tolerance;
  r["pass"] = ok;
  out.report["result"] = r;
  out.exit_code = ok ? 0 : 1;
  return out;
}

namespace {

struct SolveOutcome {
  json result;
  bool pass = true;
  double l2_error = std::numeric_limits<double>::quiet_NaN();
  double hd_error = std::numeric_limits<double>::quiet_NaN();
};

SolveOutcome solve_once(const ExperimentConfig& config, const MeshedDomain& d) {
  if (config.k > d.mesh->dim()) throw ConfigError("degree k exceeds the mesh dimension");
  const FEComplex fe(d);
  const HodgeComplex hc(fe, config.k);
  const HarmonicBasis hb = harmonic_basis(hc);
  const FESpace& space = fe.space(config.k);
  const SparseMatrix& m = hc.mass();
  const int qd = config.quadrature_degree;

  Vector load;
  Vector f_cochain;  // when the right-hand side is a cochain
  SolveOutcome o;
  if (config.rhs == "sine") {
    if (config.k != 0 || d.mesh->dim() != 2) throw ConfigError("rhs 'sine' is the k = 0 manufactured case on the square");
    load = load_vector(space, sine_product_form(std::numbers::pi * std::numbers::pi / 2.0), qd);
  } else if (config.rhs == "harmonic") {
    if (hb.vectors.cols() == 0) throw ConfigError("rhs 'harmonic' needs a nontrivial harmonic space");
    f_cochain = hb.vectors.col(0);
    load = m * f_cochain;
  } else if (config.rhs == "dx") {
    if (config.k != 1 || d.mesh->dim() != 2) throw ConfigError("rhs 'dx' is a 2D 1-form");
    Coeffs c(2);
    c << 1.0, 0.0;
    f_cochain = canonical_interpolant(space, constant_form_field(2, 1, c), qd).coeffs;
    load = m * f_cochain;
  } else {
    f_cochain = random_vector(static_cast<Eigen::Index>(space.size()), config.seed);
    load = m * f_cochain;
  }

  const SaddleSolution sol = solve_mixed_hodge(hc, hb, load);
  const double resid = std::max({sol.residual_sigma, sol.residual_u, sol.residual_p});
  const bool resid_ok = resid <= 1e-9 * std::max(sol.rhs_norm, 1e-300);
  json r{{"k", config.k},
         {"rhs", config.rhs},
         {"dofs", space.size()},
         {"harmonic_dimension", hb.vectors.cols()},
         {"residual_max", resid},
         {"rhs_norm", sol.rhs_norm},
         {"norm_sigma", sol.norm_sigma},
         {"norm_u_hd", sol.norm_u_hd},
         {"norm_p", sol.norm_p}};
  bool ok = resid_ok;
  if (f_cochain.size() > 0) {
    const double fn = m_norm(f_cochain, m);
    r["f_l2_norm"] = fn;
    r["stability"] = std::sqrt(sol.norm_sigma * sol.norm_sigma + sol.norm_u_hd * sol.norm_u_hd + sol.norm_p * sol.norm_p) / fn;
    const double un = m_norm(sol.u, m);
    const double sn = sol.sigma.size() > 0 ? m_norm(sol.sigma, hc.mass_prev()) : 0.0;
    r["u_l2_norm"] = un;
    r["sigma_l2_norm"] = sn;
    if (config.rhs == "harmonic") {
      const bool h_ok = un <= config.tolerance * fn && sn <= config.tolerance * fn;
      r["harmonic_load_annihilated"] = h_ok;
      ok = ok && h_ok;
    }
    if (config.rhs == "dx") r["p_minus_f_relative"] = m_norm(sol.p_cochain - f_cochain, m) / fn;
  }
  if (config.rhs == "sine") {
    const FormField exact = sine_product_form(1.0);
    o.l2_error = l2_error(Cochain{&space, sol.u}, exact, qd);
    o.hd_error = hd_seminorm_error(Cochain{&space, sol.u}, fe.space(1), hc.d(), require_derivative(exact), qd);
    r["l2_error"] = o.l2_error;
    r["hd_error"] = o.hd_error;
  }
  r["pass"] = ok;
  o.result = r;
  o.pass = ok;
  return o;
}

double max_diameter(const SimplicialMesh& mesh) {
  double h = 0.0;
  for (std::size_t c = 0; c < mesh.num_simplices(mesh.dim()); ++c) h = std::max(h, mesh.diameter(mesh.dim(), c));
  return h;
}

}  // namespace

CommandResult cmd_solve(const ExperimentConfig& config) {
  const SolveOutcome o = solve_once(config, build_domain(config));
  CommandResult out;
  out.report["result"] = o.result;
  out.exit_code = o.pass ? 0 : 1;
  return out;
}

CommandResult cmd_converge(const ExperimentConfig& config) {
  if (config.rhs != "sine") throw ConfigError("converge runs the manufactured 'sine' case");
  MeshedDomain d = build_domain(config);
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(17);
  csv << "level,h,l2_error,hd_error,l2_rate,hd_rate\n";
  double prev_l2 = 0.0, prev_hd = 0.0, prev_h = 0.0, last_rate = 0.0;
  bool ok = true;
  for (int level = 0; level < config.levels; ++level) {
    if (level > 0) d = refine_uniform(d);
    const SolveOutcome o = solve_once(config, d);
    ok = ok && o.pass;
    const double h = max_diameter(*d.mesh);
    json row{{"level", level}, {"h", h}, {"l2_error", o.l2_error}, {"hd_error", o.hd_error}};
    double rl2 = std::numeric_limits<double>::quiet_NaN(), rhd = rl2;
    if (level > 0) {
      rl2 = std::log(prev_l2 / o.l2_error) / std::log(prev_h / h);
      rhd = std::log(prev_hd / o.hd_error) / std::log(prev_h / h);
      last_rate = rl2;
    }
    row["l2_rate"] = number(rl2);
    row["hd_rate"] = number(rhd);
    rows.push_back(row);
    csv << level << ',' << h << ',' << o.l2_error << ',' << o.hd_error << ',';
    if (level > 0) csv << rl2 << ',' << rhd;
    else csv << ',';
    csv << '\n';
    prev_l2 = o.l2_error;
    prev_hd = o.hd_error;
    prev_h = h;
  }
  const bool rate_ok = last_rate >= 1.7 && last_rate <= 2.2;
  CommandResult out;
  out.report["result"] = {{"rows", rows}, {"final_l2_rate", last_rate}, {"final_rate_in_range", rate_ok}, {"pass", ok && rate_ok}};
  out.csv = csv.str();
  out.exit_code = ok && rate_ok ? 0 : 1;
  return out;
}

CommandResult cmd_project_verify(const ExperimentConfig& config) {
  const MeshedDomain d = build_domain(config);
  if (d.mesh->dim() != 2) throw ConfigError("project-verify needs a 2D box mesh");
  const BoxGeometry geo(box_faces(d));
  const std::set<std::string> wanted(config.checks.begin(), config.checks.end());
  const auto h = std::make_shared<MeshSizeFunction>(d.mesh);
  json r;
  json faces = json::array();
  for (auto f : geo.gamma_T()) faces.push_back(face_name(f));
  r["gamma_T_faces"] = faces;
  r["mesh_size"] = {{"h_min", h->h_min()}, {"h_max", h->h_max()}, {"lipschitz", h->lipschitz()}, {"comparability", h->comparability()}};
  json checks = json::array();
  bool ok = true;

  double eps = config.epsilon;
  const FEComplex fe(d);
  if (wanted.count("projection")) {
    ProjectionOptions po;
    po.epsilon = config.epsilon;
    po.delta = config.delta;
    po.max_halvings = config.max_halvings;
    po.radial = config.ball_radial;
    po.angular = config.ball_angular;
    std::unique_ptr<SmoothedProjection> pi;
    json attempts = json::array();
    try {
      pi = std::make_unique<SmoothedProjection>(fe, geo, po);
    } catch (const ProjectionError& e) {
      r["projection_error"] = {{"message", e.what()}, {"defect", number(e.defect())}};
      r["pass"] = false;
      CommandResult out;
      out.report["result"] = r;
      out.exit_code = 1;
      return out;
    }
    for (const auto& a : pi->attempts())
      attempts.push_back({{"epsilon", a.epsilon}, {"accepted", a.accepted}, {"reason", a.reason}, {"defect", number(a.defect)}});
    eps = pi->epsilon();
    r["epsilon"] = eps;
    r["epsilon_attempts"] = attempts;
    ProjectionCheckOptions co;
    co.seed = config.seed;
    const CheckReport cr = check_projection(*pi, geo, co);
    ok = ok && cr.pass();
    checks.push_back(check_json(cr));
  } else {
    r["epsilon"] = eps;
  }

  const RadiusFunction rho = RadiusFunction::scaled(h, eps);
  auto guarded = [&](const std::string& name, auto&& f) {
    try {
      f();
    } catch (const GeometryError& e) {
      checks.push_back({{"name", name}, {"pass", false}, {"error", e.what()}});
      ok = false;
    }
  };
  if (wanted.count("distortion")) {
    guarded("distortion", [&] {
      const DistortionMap map(geo, rho);
      const CheckReport cr = check_distortion(map, 10000, config.seed);
      ok = ok && cr.pass();
      checks.push_back(check_json(cr));
    });
  }
  if (wanted.count("mollify")) {
    guarded("mollify", [&] {
      const CheckReport a = check_mollifier(rho.scaled_by(config.delta), 100, config.seed);
      const Regularizer m(geo, rho, config.delta, config.ball_radial, config.ball_angular);
      const CheckReport b = check_regularizer(m, 100, config.seed);
      ok = ok && a.pass() && b.pass();
      checks.push_back(check_json(a));
      checks.push_back(check_json(b));
    });
  }
  if (wanted.count("extension")) {
    guarded("extension", [&] {
      const CheckReport a = check_extension(geo, 100, config.seed);
      const CheckReport b = check_pullback_estimate(DistortionMap(geo, rho), config.seed);
      ok = ok && a.pass() && b.pass();
      checks.push_back(check_json(a));
      checks.push_back(check_json(b));
    });
  }
  if (wanted.count("density")) {
    guarded("density", [&] {
      // the mechanism (monotone decay) is checked; the final level is reported
      json fields = json::array();
      bool all = true;
      const std::vector<FormField> us{trig_form(0, config.seed + 1, geo.gamma_T(), 2),
                                      trig_form(1, config.seed + 2, geo.gamma_T(), 2),
                                      trig_form(1, config.seed + 3, geo.gamma_T(), 2)};
      for (std::size_t i = 0; i < us.size(); ++i) {
        // an epsilon whose radius the distortion rejects is listed and skipped
        json jr = json::array();
        std::vector<double> totals;
        for (double e : config.density_epsilons) {
          try {
            const auto row = density_table(geo, h, us[i], {e}, config.delta, config.ball_radial, config.ball_angular).front();
            jr.push_back({{"epsilon", e}, {"admissible", true}, {"error_u", row.error_u}, {"error_du", row.error_du},
                          {"total", row.total()}});
            totals.push_back(row.total());
          } catch (const GeometryError& err) {
            jr.push_back({{"epsilon", e}, {"admissible", false}, {"reason", err.what()}});
          }
        }
        bool mono = totals.size() >= 2;
        for (std::size_t j = 1; j < totals.size(); ++j)
          if (!(totals[j] < totals[j - 1])) mono = false;
        all = all && mono;
        fields.push_back({{"field", i}, {"degree", us[i].degree}, {"rows", jr}, {"monotone", mono},
                          {"final_total", totals.empty() ? json(nullptr) : json(totals.back())}});
      }
      ok = ok && all;
      checks.push_back({{"name", "density"}, {"pass", all}, {"fields", fields}});
    });
  }
  r["checks"] = checks;
  r["pass"] = ok;
  CommandResult out;
  out.report["result"] = r;
  out.exit_code = ok ? 0 : 1;
  return out;
}

namespace {

json mesh_summary(const MeshedDomain& d) {
  const auto& mesh = *d.mesh;
  json counts = json::array();
  for (int k = 0; k <= mesh.dim(); ++k) counts.push_back(mesh.num_simplices(k));
  const MeshQuality q = mesh_quality(mesh);
  json s{{"dim", mesh.dim()},
         {"simplex_counts", counts},
         {"boundary_facets", mesh.boundary_facets().size()},
         {"gamma_T_facets", d.partition->gamma_T().size()},
         {"euler_characteristic", euler_characteristic(mesh)},
         {"h_min", q.h_min},
         {"h_max", q.h_max},
         {"shape_constant", q.shape_constant},
         {"neighbor_bound", q.neighbor_bound},
         {"epsilon_h", q.epsilon_h}};
  s["betti_relative"] = vector_json(betti_relative(mesh, *d.partition));
  return s;
}

}  // namespace

CommandResult cmd_mesh_generate(const ExperimentConfig& config, const std::string& mesh_output) {
  if (!config.mesh.file.empty()) throw ConfigError("mesh generate builds a box mesh; do not pass a mesh file");
  const MeshedDomain d = build_domain(config);
  if (!mesh_output.empty()) write_mesh_file(d, mesh_output);
  CommandResult out;
  out.report["result"] = mesh_summary(d);
  return out;
}

CommandResult cmd_mesh_inspect(const ExperimentConfig& config) {
  CommandResult out;
  MeshedDomain d;
  if (!config.mesh.file.empty()) {
    d = read_mesh_file(config.mesh.file);
    json r = mesh_summary(d);
    if (d.mesh->dim() == 2) {
      try {
        check_partition_admissible(*d.mesh, *d.partition);
        r["partition_admissible"] = true;
      } catch (const MeshError& e) {
        r["partition_admissible"] = false;
        r["admissibility_error"] = e.what();
        out.exit_code = 1;
      }
    }
    out.report["result"] = r;
    return out;
  }
  d = build_domain(config);
  out.report["result"] = mesh_summary(d);
  out.report["result"]["partition_admissible"] = true;
  return out;
}

CommandResult run_guarded(const std::string& command, const ExperimentConfig& config,
                          const std::function<CommandResult(const ExperimentConfig&)>& f) {
  CommandResult out;
  try {
    out = f(config);
  } catch (const ConfigError& e) {
    out.report["error"] = {{"kind", "config"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const MeshError& e) {
    out.report["error"] = {{"kind", "mesh"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const GeometryError& e) {
    out.report["error"] = {{"kind", "geometry"}, {"message", e.what()}};
    out.exit_code = 2;
  } catch (const SolverError& e) {
    out.report["error"] = {{"kind", "solver"}, {"message", e.what()}};
    out.exit_code = 1;
  } catch (const std::ios_base::failure& e) {
    out.report["error"] = {{"kind", "io"}, {"message", e.what()}};
    out.exit_code = 2;
  }
  json full{{"schema", 1}, {"command", command}, {"config", config.to_json()}};
  for (auto& [key, value] : out.report.items()) full[key] = value;
  out.report = full;
  return out;
}

}  // namespace feec::cli
