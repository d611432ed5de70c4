#pragma once

#include <string>

#include <json.hpp>

#include "feec/mesh.hpp"

namespace feec {

/// Mesh document: {"dim": n, "vertices": [[x,y],...], "cells": [[i,j,k],...],
/// "gamma_T": [[i,j],...]}. gamma_T lists boundary facets by vertex tuple.
nlohmann::json mesh_to_json(const MeshedDomain& domain);
MeshedDomain mesh_from_json(const nlohmann::json& doc);

MeshedDomain read_mesh_file(const std::string& path);
void write_mesh_file(const MeshedDomain& domain, const std::string& path);

/// Combinatorial admissibility of a 2D partition: every interface vertex
/// touches exactly one gamma_T and one gamma_N boundary edge. Chart
/// admissibility is assumed. Throws MeshError with the offending vertex.
void check_partition_admissible(const SimplicialMesh& mesh, const BoundaryPartition& partition);

}  // namespace feec
