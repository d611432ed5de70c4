#include "feec/mesh_io.hpp"

#include <algorithm>
#include <fstream>

namespace feec {

nlohmann::json mesh_to_json(const MeshedDomain& domain) {
  const auto& mesh = *domain.mesh;
  const int n = mesh.dim();
  nlohmann::json doc;
  doc["dim"] = n;
  auto verts = nlohmann::json::array();
  for (const auto& v : mesh.vertices()) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < n; ++c) row.push_back(v(c));
    verts.push_back(row);
  }
  doc["vertices"] = verts;
  doc["cells"] = mesh.simplices(n);
  auto gt = nlohmann::json::array();
  for (int f : domain.partition->gamma_T()) gt.push_back(mesh.simplex(n - 1, static_cast<std::size_t>(f)));
  doc["gamma_T"] = gt;
  return doc;
}

MeshedDomain mesh_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("dim").get<int>();
    std::vector<Point> verts;
    for (const auto& row : doc.at("vertices")) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw MeshError("vertex entry must have " + std::to_string(n) + " coordinates");
      Point p(n);
      for (int c = 0; c < n; ++c) p(c) = row.at(static_cast<std::size_t>(c)).get<double>();
      verts.push_back(p);
    }
    auto cells = doc.at("cells").get<std::vector<Simplex>>();
    auto mesh = std::make_shared<SimplicialMesh>(n, std::move(verts), std::move(cells));
    std::vector<int> gamma_T;
    if (doc.contains("gamma_T")) {
      for (auto f : doc.at("gamma_T").get<std::vector<Simplex>>()) {
        std::sort(f.begin(), f.end());
        if (static_cast<int>(f.size()) != n) throw MeshError("gamma_T entries must be boundary facets");
        auto idx = mesh->find(f);
        if (!idx) throw MeshError("gamma_T facet is not a simplex of the mesh");
        gamma_T.push_back(*idx);
      }
    }
    auto part = std::make_shared<BoundaryPartition>(*mesh, gamma_T);
    if (n == 2) check_partition_admissible(*mesh, *part);
    return {mesh, part};
  } catch (const nlohmann::json::exception& e) {
    throw MeshError(std::string("malformed mesh document: ") + e.what());
  }
}

MeshedDomain read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw MeshError("mesh file " + path + " is not valid JSON: " + e.what());
  }
  return mesh_from_json(doc);
}

void write_mesh_file(const MeshedDomain& domain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path);
  out << mesh_to_json(domain).dump(2) << "\n";
}

void check_partition_admissible(const SimplicialMesh& mesh, const BoundaryPartition& partition) {
  if (mesh.dim() != 2) return;
  std::vector<int> t_count(mesh.num_vertices(), 0), n_count(mesh.num_vertices(), 0);
  for (int f : partition.gamma_T())
    for (int v : mesh.simplex(1, static_cast<std::size_t>(f))) ++t_count[static_cast<std::size_t>(v)];
  for (int f : partition.gamma_N())
    for (int v : mesh.simplex(1, static_cast<std::size_t>(f))) ++n_count[static_cast<std::size_t>(v)];
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (t_count[v] + n_count[v] == 0) continue;
    if (t_count[v] + n_count[v] != 2)
      throw MeshError("boundary is not a 1-manifold at vertex " + std::to_string(v));
  }
  // interface points are then automatically isolated (one T edge, one N edge)
}

}  // namespace feec
