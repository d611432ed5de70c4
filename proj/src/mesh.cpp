#include "feec/mesh.hpp"

#include <numbers>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include <Eigen/LU>

namespace feec {

namespace {

double signed_volume(const std::vector<Point>& verts, const Simplex& s, int dim) {
  Eigen::MatrixXd m(dim, dim);
  for (int j = 1; j <= dim; ++j)
    m.col(j - 1) = verts[static_cast<std::size_t>(s[static_cast<std::size_t>(j)])] - verts[static_cast<std::size_t>(s[0])];
  double f = 1.0;
  for (int j = 2; j <= dim; ++j) f *= j;
  return m.determinant() / f;
}

std::string simplex_string(const Simplex& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << "]";
  return os.str();
}

}  // namespace

SimplicialMesh::SimplicialMesh(int dim, std::vector<Point> vertices, std::vector<Simplex> cells)
    : dim_(dim), vertices_(std::move(vertices)) {
  if (dim < 1 || dim > kMaxDim) throw MeshError("mesh dimension must be in [1,3]");
  if (cells.empty()) throw MeshError("mesh has no cells");
  for (const auto& v : vertices_)
    if (v.size() != dim) throw MeshError("vertex coordinate count does not match dimension");

  const auto nd = static_cast<std::size_t>(dim);
  simplices_.assign(nd + 1, {});
  lookup_.assign(nd + 1, {});
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    simplices_[0].push_back({static_cast<int>(v)});
    lookup_[0][{static_cast<int>(v)}] = static_cast<int>(v);
  }

  for (auto c : cells) {
    if (c.size() != nd + 1) throw MeshError("cell " + simplex_string(c) + " has wrong vertex count");
    std::sort(c.begin(), c.end());
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] < 0 || static_cast<std::size_t>(c[i]) >= vertices_.size())
        throw MeshError("cell " + simplex_string(c) + " references a missing vertex");
      if (i > 0 && c[i] == c[i - 1]) throw MeshError("cell " + simplex_string(c) + " repeats a vertex");
    }
    if (lookup_[nd].count(c)) throw MeshError("duplicate cell " + simplex_string(c));
    lookup_[nd][c] = static_cast<int>(simplices_[nd].size());
    simplices_[nd].push_back(c);
  }

  // face closure, top down
  for (int k = dim; k >= 2; --k) {
    const auto kk = static_cast<std::size_t>(k);
    for (const auto& s : simplices_[kk]) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        Simplex f;
        for (std::size_t q = 0; q < s.size(); ++q)
          if (q != j) f.push_back(s[q]);
        if (!lookup_[kk - 1].count(f)) {
          lookup_[kk - 1][f] = static_cast<int>(simplices_[kk - 1].size());
          simplices_[kk - 1].push_back(f);
        }
      }
    }
  }
  // deterministic numbering: sort lower-dimensional simplices lexicographically
  for (int k = 1; k < dim; ++k) {
    auto& list = simplices_[static_cast<std::size_t>(k)];
    std::sort(list.begin(), list.end());
    lookup_[static_cast<std::size_t>(k)].clear();
    for (std::size_t i = 0; i < list.size(); ++i) lookup_[static_cast<std::size_t>(k)][list[i]] = static_cast<int>(i);
  }

  faces_.assign(nd + 1, {});
  cofaces_.assign(nd + 1, {});
  for (int k = 0; k <= dim; ++k) cofaces_[static_cast<std::size_t>(k)].assign(num_simplices(k), {});
  for (int k = 1; k <= dim; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    faces_[kk].resize(simplices_[kk].size());
    for (std::size_t i = 0; i < simplices_[kk].size(); ++i) {
      const auto& s = simplices_[kk][i];
      for (std::size_t j = 0; j < s.size(); ++j) {
        Simplex f;
        for (std::size_t q = 0; q < s.size(); ++q)
          if (q != j) f.push_back(s[q]);
        const int fi = lookup_[kk - 1].at(f);
        faces_[kk][i].push_back(fi);
        cofaces_[kk - 1][static_cast<std::size_t>(fi)].push_back(static_cast<int>(i));
      }
    }
  }

  vertex_cells_.assign(vertices_.size(), {});
  orientation_.resize(simplices_[nd].size());
  for (std::size_t i = 0; i < simplices_[nd].size(); ++i) {
    const auto& c = simplices_[nd][i];
    for (int v : c) vertex_cells_[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
    const double vol = signed_volume(vertices_, c, dim);
    double scale = 0.0;
    for (std::size_t a = 1; a < c.size(); ++a)
      scale = std::max(scale, (vertices_[static_cast<std::size_t>(c[a])] - vertices_[static_cast<std::size_t>(c[0])]).norm());
    if (std::abs(vol) <= 1e-14 * std::pow(scale, dim))
      throw MeshError("degenerate (zero-volume) cell " + simplex_string(c));
    orientation_[i] = vol > 0 ? 1 : -1;
  }

  on_boundary_.assign(simplices_[nd - 1].size(), 0);
  for (std::size_t i = 0; i < simplices_[nd - 1].size(); ++i) {
    const auto nc = cofaces_[nd - 1][i].size();
    if (nc > 2) throw MeshError("facet " + simplex_string(simplices_[nd - 1][i]) + " has more than two cells");
    if (nc == 1) {
      boundary_facets_.push_back(static_cast<int>(i));
      on_boundary_[i] = 1;
    }
  }

  bbox_min_ = vertices_.front();
  bbox_max_ = vertices_.front();
  for (const auto& v : vertices_) {
    bbox_min_ = bbox_min_.cwiseMin(v);
    bbox_max_ = bbox_max_.cwiseMax(v);
  }
}

std::optional<int> SimplicialMesh::find(const Simplex& sorted) const {
  if (sorted.empty() || sorted.size() > static_cast<std::size_t>(dim_) + 1) return std::nullopt;
  const auto& m = lookup_[sorted.size() - 1];
  auto it = m.find(sorted);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

int SimplicialMesh::index_of(const Simplex& sorted) const {
  auto r = find(sorted);
  if (!r) throw MeshError("simplex " + simplex_string(sorted) + " not in mesh");
  return *r;
}

VectorFrame SimplicialMesh::edge_frame(int k, std::size_t i) const {
  const auto& s = simplex(k, i);
  VectorFrame f(dim_, k);
  for (int j = 1; j <= k; ++j)
    f.col(j - 1) = vertices_[static_cast<std::size_t>(s[static_cast<std::size_t>(j)])] - vertices_[static_cast<std::size_t>(s[0])];
  return f;
}

double SimplicialMesh::volume(int k, std::size_t i) const {
  if (k == 0) return 1.0;
  const VectorFrame f = edge_frame(k, i);
  const Eigen::MatrixXd gram = f.transpose() * f;
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  return std::sqrt(std::max(0.0, gram.determinant())) / fact;
}

double SimplicialMesh::diameter(int k, std::size_t i) const {
  const auto& s = simplex(k, i);
  double d = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b)
      d = std::max(d, (vertices_[static_cast<std::size_t>(s[a])] - vertices_[static_cast<std::size_t>(s[b])]).norm());
  return d;
}

BoundaryPartition::BoundaryPartition(const SimplicialMesh& mesh, std::vector<int> gamma_T_facets)
    : dim_(mesh.dim()) {
  const int n = mesh.dim();
  std::sort(gamma_T_facets.begin(), gamma_T_facets.end());
  gamma_T_facets.erase(std::unique(gamma_T_facets.begin(), gamma_T_facets.end()), gamma_T_facets.end());
  for (int f : gamma_T_facets) {
    if (f < 0 || static_cast<std::size_t>(f) >= mesh.num_simplices(n - 1) || !mesh.is_boundary_facet(static_cast<std::size_t>(f)))
      throw MeshError("gamma_T entry " + std::to_string(f) + " is not a boundary facet");
  }
  gamma_T_ = gamma_T_facets;
  std::set<int> in_t(gamma_T_.begin(), gamma_T_.end());
  for (int f : mesh.boundary_facets())
    if (!in_t.count(f)) gamma_N_.push_back(f);

  auto closure = [&](const std::vector<int>& facets) {
    std::vector<std::vector<char>> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)].assign(mesh.num_simplices(k), 0);
    std::function<void(int, int)> mark = [&](int k, int i) {
      auto& flag = c[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
      if (flag) return;
      flag = 1;
      if (k > 0)
        for (int f : mesh.faces(k, static_cast<std::size_t>(i))) mark(k - 1, f);
    };
    for (int f : facets) mark(n - 1, f);
    return c;
  };
  closure_T_ = closure(gamma_T_);
  closure_N_ = closure(gamma_N_);
  gamma_I_.assign(static_cast<std::size_t>(std::max(0, n - 1)), {});
  for (int k = 0; k <= n - 2; ++k)
    for (std::size_t i = 0; i < mesh.num_simplices(k); ++i)
      if (closure_T_[static_cast<std::size_t>(k)][i] && closure_N_[static_cast<std::size_t>(k)][i])
        gamma_I_[static_cast<std::size_t>(k)].push_back(static_cast<int>(i));
}

BoundaryPartition BoundaryPartition::complement(const SimplicialMesh& mesh) const {
  return BoundaryPartition(mesh, gamma_N_);
}

std::string face_name(BoxFace f) {
  switch (f) {
    case BoxFace::Left: return "left";
    case BoxFace::Right: return "right";
    case BoxFace::Bottom: return "bottom";
    case BoxFace::Top: return "top";
  }
  return "?";
}

namespace {

BoxFace parse_face(const std::string& name) {
  if (name == "left") return BoxFace::Left;
  if (name == "right") return BoxFace::Right;
  if (name == "bottom") return BoxFace::Bottom;
  if (name == "top") return BoxFace::Top;
  throw MeshError("unknown box face '" + name + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

PatchSpec PatchSpec::parse(const std::string& text) {
  PatchSpec spec;
  const std::string t = trim(text);
  if (t.empty() || t == "none") return spec;
  if (t == "all") {
    for (auto f : {BoxFace::Left, BoxFace::Right, BoxFace::Bottom, BoxFace::Top}) spec.segments.push_back({f, -1.0, 1.0});
    return spec;
  }
  std::size_t pos = 0;
  while (pos <= t.size()) {
    // split on commas outside brackets
    std::size_t end = pos;
    int depth = 0;
    while (end < t.size() && (t[end] != ',' || depth > 0)) {
      if (t[end] == '[') ++depth;
      if (t[end] == ']') --depth;
      ++end;
    }
    const std::string tok = trim(t.substr(pos, end - pos));
    if (!tok.empty()) {
      PatchSegment seg{};
      const auto br = tok.find('[');
      if (br == std::string::npos) {
        seg.face = parse_face(tok);
      } else {
        seg.face = parse_face(trim(tok.substr(0, br)));
        const auto close = tok.find(']', br);
        const auto colon = tok.find(':', br);
        if (close == std::string::npos || colon == std::string::npos || colon > close)
          throw MeshError("malformed patch segment '" + tok + "'; expected face[lo:hi]");
        try {
          seg.lo = std::stod(tok.substr(br + 1, colon - br - 1));
          seg.hi = std::stod(tok.substr(colon + 1, close - colon - 1));
        } catch (const std::exception&) {
          throw MeshError("malformed patch bounds in '" + tok + "'");
        }
        if (!(seg.lo < seg.hi) || seg.lo < -1.0 || seg.hi > 1.0)
          throw MeshError("patch segment '" + tok + "' must satisfy -1 <= lo < hi <= 1");
      }
      spec.segments.push_back(seg);
    }
    if (end >= t.size()) break;
    pos = end + 1;
  }
  return spec;
}

std::string PatchSpec::to_string() const {
  if (segments.empty()) return "none";
  std::ostringstream os;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    os << (i ? "," : "") << face_name(s.face);
    if (s.lo != -1.0 || s.hi != 1.0) os << "[" << s.lo << ":" << s.hi << "]";
  }
  return os.str();
}

bool PatchSpec::whole_faces_only() const {
  for (const auto& s : segments)
    if (s.lo != -1.0 || s.hi != 1.0) return false;
  return true;
}

std::vector<BoxFace> PatchSpec::whole_faces() const {
  std::vector<BoxFace> out;
  for (const auto& s : segments)
    if (s.lo == -1.0 && s.hi == 1.0 && std::find(out.begin(), out.end(), s.face) == out.end()) out.push_back(s.face);
  return out;
}

namespace {

// Axis normal to a face and the face's coordinate.
std::pair<int, double> face_plane(BoxFace f) {
  switch (f) {
    case BoxFace::Left: return {0, -1.0};
    case BoxFace::Right: return {0, 1.0};
    case BoxFace::Bottom: return {1, -1.0};
    case BoxFace::Top: return {1, 1.0};
  }
  return {0, 0.0};
}

bool on_grid(double c, int divisions) {
  const double s = (c + 1.0) * divisions / 2.0;
  return std::abs(s - std::round(s)) < 1e-9;
}

}  // namespace

MeshedDomain make_box_mesh(int dim, int divisions, const PatchSpec& patch) {
  if (dim != 1 && dim != 2) throw MeshError("box meshes are generated in 1D and 2D only");
  if (divisions < 1) throw MeshError("divisions must be >= 1");
  const int m = divisions;
  std::vector<Point> verts;
  std::vector<Simplex> cells;
  auto coord = [m](int i) { return -1.0 + 2.0 * i / m; };
  if (dim == 1) {
    for (int i = 0; i <= m; ++i) verts.push_back(make_point(coord(i)));
    for (int i = 0; i < m; ++i) cells.push_back({i, i + 1});
  } else {
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= m; ++i) verts.push_back(make_point(coord(i), coord(j)));
    auto id = [m](int i, int j) { return i + (m + 1) * j; };
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
  }
  auto mesh = std::make_shared<SimplicialMesh>(dim, std::move(verts), std::move(cells));

  for (const auto& seg : patch.segments) {
    const auto [axis, c] = face_plane(seg.face);
    if (dim == 1 && axis != 0) throw MeshError("face '" + face_name(seg.face) + "' does not exist in 1D");
    if (dim == 2 && (!on_grid(seg.lo, m) || !on_grid(seg.hi, m))) {
      std::ostringstream os;
      os << "patch segment " << face_name(seg.face) << "[" << seg.lo << ":" << seg.hi
         << "] has endpoints off the grid nodes -1 + 2i/" << m;
      throw MeshError(os.str());
    }
    (void)c;
  }

  std::vector<int> gamma_T;
  for (int f : mesh->boundary_facets()) {
    const auto& s = mesh->simplex(dim - 1, static_cast<std::size_t>(f));
    for (const auto& seg : patch.segments) {
      const auto [axis, c] = face_plane(seg.face);
      bool on_face = true;
      for (int v : s)
        if (std::abs(mesh->vertex(static_cast<std::size_t>(v))(axis) - c) > 1e-12) on_face = false;
      if (!on_face) continue;
      if (dim == 1) {
        gamma_T.push_back(f);
        break;
      }
      const int tang = 1 - axis;
      const double a = std::min(mesh->vertex(static_cast<std::size_t>(s[0]))(tang), mesh->vertex(static_cast<std::size_t>(s[1]))(tang));
      const double b = std::max(mesh->vertex(static_cast<std::size_t>(s[0]))(tang), mesh->vertex(static_cast<std::size_t>(s[1]))(tang));
      if (a >= seg.lo - 1e-12 && b <= seg.hi + 1e-12) {
        gamma_T.push_back(f);
        break;
      }
    }
  }
  auto part = std::make_shared<BoundaryPartition>(*mesh, gamma_T);
  return {mesh, part};
}

MeshedDomain refine_uniform(const MeshedDomain& domain) {
  const auto& mesh = *domain.mesh;
  if (mesh.dim() != 2) throw MeshError("uniform refinement is implemented for 2D meshes");
  std::vector<Point> verts = mesh.vertices();
  const auto nv = static_cast<int>(verts.size());
  for (const auto& e : mesh.simplices(1))
    verts.push_back(0.5 * (mesh.vertex(static_cast<std::size_t>(e[0])) + mesh.vertex(static_cast<std::size_t>(e[1]))));
  auto mid = [&](int a, int b) { return nv + mesh.index_of({std::min(a, b), std::max(a, b)}); };
  std::vector<Simplex> cells;
  for (const auto& t : mesh.simplices(2)) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), ac = mid(a, c), bc = mid(b, c);
    cells.push_back({a, ab, ac});
    cells.push_back({b, ab, bc});
    cells.push_back({c, ac, bc});
    cells.push_back({ab, bc, ac});
  }
  auto fine = std::make_shared<SimplicialMesh>(2, std::move(verts), std::move(cells));
  std::vector<int> gamma_T;
  for (int f : domain.partition->gamma_T()) {
    const auto& e = mesh.simplex(1, static_cast<std::size_t>(f));
    const int m = mid(e[0], e[1]);
    gamma_T.push_back(fine->index_of({std::min(e[0], m), std::max(e[0], m)}));
    gamma_T.push_back(fine->index_of({std::min(e[1], m), std::max(e[1], m)}));
  }
  auto part = std::make_shared<BoundaryPartition>(*fine, gamma_T);
  return {fine, part};
}

MeshedDomain grade_box_mesh(const MeshedDomain& domain, double amplitude) {
  if (!(std::abs(amplitude) * std::numbers::pi < 1.0)) throw MeshError("grading amplitude must be below 1/pi");
  std::vector<Point> verts = domain.mesh->vertices();
  for (auto& p : verts) p(0) += amplitude * std::sin(std::numbers::pi * p(0));
  auto graded = std::make_shared<SimplicialMesh>(domain.mesh->dim(), std::move(verts), domain.mesh->simplices(domain.mesh->dim()));
  // same cells, hence the same simplex numbering
  auto part = std::make_shared<BoundaryPartition>(*graded, domain.partition->gamma_T());
  return {graded, part};
}

long euler_characteristic(const SimplicialMesh& mesh) {
  long chi = 0;
  for (int k = 0; k <= mesh.dim(); ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(mesh.num_simplices(k));
  return chi;
}

}  // namespace feec
