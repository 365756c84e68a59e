#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/mesh.hpp"

namespace fvgrad {

struct MeshParseError : std::runtime_error {
  int line;
  MeshParseError(int line_, const std::string& msg)
      : std::runtime_error("mesh parse error at line " + std::to_string(line_) +
                           ": " + msg),
        line(line_) {}
};

// Text format:
//   fvmesh 1
//   vertices N
//   x y                (N lines, full double precision)
//   cells M
//   k i1 ... ik        (M lines, 0-based counterclockwise vertex indices)
// Faces and connectivity are derived, never stored.

inline void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << "fvmesh 1\n";
  out << "vertices " << mesh.vertices.size() << "\n";
  char buf[80];
  for (const Vec2& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.x, v.y);
    out << buf;
  }
  out << "cells " << mesh.cells.size() << "\n";
  for (const auto& cyc : mesh.cells) {
    out << cyc.size();
    for (int v : cyc) out << ' ' << v;
    out << "\n";
  }
}

inline void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh(mesh, out);
}

inline Mesh read_mesh(std::istream& in) {
  int lineno = 0;
  std::string line;
  auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) {
      throw MeshParseError(lineno + 1, "unexpected end of file");
    }
    ++lineno;
    return line;
  };

  {
    std::istringstream hdr(next_line());
    std::string magic;
    int version = 0;
    if (!(hdr >> magic >> version) || magic != "fvmesh" || version != 1) {
      throw MeshParseError(lineno, "expected header 'fvmesh 1'");
    }
  }

  std::size_t nv = 0;
  {
    std::istringstream ls(next_line());
    std::string kw;
    if (!(ls >> kw >> nv) || kw != "vertices") {
      throw MeshParseError(lineno, "expected 'vertices N'");
    }
  }
  std::vector<Vec2> vertices(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    std::istringstream ls(next_line());
    if (!(ls >> vertices[k].x >> vertices[k].y)) {
      throw MeshParseError(lineno, "malformed vertex record");
    }
  }

  std::size_t nc = 0;
  {
    std::istringstream ls(next_line());
    std::string kw;
    if (!(ls >> kw >> nc) || kw != "cells") {
      throw MeshParseError(lineno, "expected 'cells M'");
    }
  }
  if (nc == 0) throw MeshParseError(lineno, "empty cell list");
  std::vector<std::vector<int>> cells(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    std::istringstream ls(next_line());
    std::size_t k = 0;
    if (!(ls >> k) || k < 3) {
      throw MeshParseError(lineno, "malformed cell record " + std::to_string(c));
    }
    cells[c].resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (!(ls >> cells[c][j])) {
        throw MeshParseError(lineno,
                             "cell record " + std::to_string(c) +
                                 " has fewer indices than declared");
      }
      if (cells[c][j] < 0 || static_cast<std::size_t>(cells[c][j]) >= nv) {
        throw MeshParseError(lineno, "cell record " + std::to_string(c) +
                                         " references out-of-range vertex " +
                                         std::to_string(cells[c][j]));
      }
    }
  }
  return make_mesh(std::move(vertices), std::move(cells));
}

inline Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace fvgrad
