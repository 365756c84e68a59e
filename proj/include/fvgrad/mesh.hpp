#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fvgrad/geometry.hpp"

namespace fvgrad {

/// Sentinel neighbor index for boundary faces.
constexpr int kBoundary = -1;

struct Face {
  int v0 = 0;        // endpoints in the owner's traversal order
  int v1 = 0;
  int owner = 0;
  int neighbor = kBoundary;
  bool is_boundary() const { return neighbor == kBoundary; }
};

struct InvalidMeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Conforming 2D polygonal tessellation.  Vertices and cells are primary
/// data; faces and cell->face adjacency are derived by the builder and each
/// vertex pair appears exactly once in the face list.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;  // counterclockwise vertex cycles
  std::vector<Face> faces;
  std::vector<std::vector<int>> cell_faces;

  std::size_t n_cells() const { return cells.size(); }
  std::size_t n_faces() const { return faces.size(); }
};

inline double polygon_signed_area(const std::vector<Vec2>& verts,
                                  const std::vector<int>& cycle) {
  double a = 0.0;
  for (std::size_t k = 0; k < cycle.size(); ++k) {
    const Vec2 p = verts[cycle[k]];
    const Vec2 q = verts[cycle[(k + 1) % cycle.size()]];
    a += cross(p, q);
  }
  return 0.5 * a;
}

/// Builds a Mesh from vertices and counterclockwise cell cycles, deriving the
/// deduplicated face list and adjacency.  Throws InvalidMeshError on empty
/// cell lists, bad indices, non-positive cell areas, or non-conforming
/// connectivity (a vertex pair shared by more than two cells, or two cells
/// traversing a shared edge in the same direction).
inline Mesh make_mesh(std::vector<Vec2> vertices,
                      std::vector<std::vector<int>> cells) {
  if (cells.empty()) throw InvalidMeshError("mesh has no cells");
  for (const Vec2& v : vertices) {
    if (!finite(v)) throw InvalidMeshError("non-finite vertex coordinate");
  }
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cyc = cells[c];
    if (cyc.size() < 3) {
      throw InvalidMeshError("cell " + std::to_string(c) +
                             " has fewer than 3 vertices");
    }
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      if (cyc[k] < 0 || cyc[k] >= nv) {
        throw InvalidMeshError("cell " + std::to_string(c) +
                               " references out-of-range vertex " +
                               std::to_string(cyc[k]));
      }
      if (cyc[k] == cyc[(k + 1) % cyc.size()]) {
        throw InvalidMeshError("cell " + std::to_string(c) +
                               " repeats vertex " + std::to_string(cyc[k]));
      }
    }
    if (polygon_signed_area(vertices, cyc) <= 0.0) {
      throw InvalidMeshError("cell " + std::to_string(c) +
                             " is not counterclockwise with positive area");
    }
  }

  Mesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);
  mesh.cell_faces.resize(mesh.cells.size());

  std::map<std::pair<int, int>, int> face_of_edge;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& cyc = mesh.cells[c];
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const int a = cyc[k];
      const int b = cyc[(k + 1) % cyc.size()];
      const auto key = std::minmax(a, b);
      auto it = face_of_edge.find(key);
      if (it == face_of_edge.end()) {
        Face f;
        f.v0 = a;
        f.v1 = b;
        f.owner = static_cast<int>(c);
        face_of_edge.emplace(key, static_cast<int>(mesh.faces.size()));
        mesh.cell_faces[c].push_back(static_cast<int>(mesh.faces.size()));
        mesh.faces.push_back(f);
      } else {
        Face& f = mesh.faces[it->second];
        if (!f.is_boundary()) {
          throw InvalidMeshError("edge (" + std::to_string(key.first) + "," +
                                 std::to_string(key.second) +
                                 ") is shared by more than two cells");
        }
        if (f.v0 != b || f.v1 != a) {
          throw InvalidMeshError("cells " + std::to_string(f.owner) + " and " +
                                 std::to_string(c) +
                                 " traverse a shared edge in the same "
                                 "direction");
        }
        f.neighbor = static_cast<int>(c);
        mesh.cell_faces[c].push_back(it->second);
      }
    }
  }
  return mesh;
}

}  // namespace fvgrad
