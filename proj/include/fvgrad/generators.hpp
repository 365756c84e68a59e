#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "fvgrad/mesh.hpp"

namespace fvgrad {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// nx-by-ny axis-aligned quadrilateral tiling of the rectangle, vertices
/// ordered row-major bottom to top.
inline Mesh build_cartesian(int nx, int ny, Interval x_range = {0.0, 1.0},
                            Interval y_range = {0.0, 1.0}) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_cartesian: cell counts must be >= 1");
  }
  if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo)) {
    throw std::invalid_argument("build_cartesian: degenerate range");
  }
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double tx = static_cast<double>(i) / nx;
      const double ty = static_cast<double>(j) / ny;
      vertices.push_back({x_range.lo + tx * (x_range.hi - x_range.lo),
                          y_range.lo + ty * (y_range.hi - y_range.lo)});
    }
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny);
  const int stride = nx + 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v = j * stride + i;
      cells.push_back({v, v + 1, v + 1 + stride, v + stride});
    }
  }
  return make_mesh(std::move(vertices), std::move(cells));
}

namespace detail {

inline bool vertex_move_valid(const Mesh& mesh,
                              const std::vector<Vec2>& verts,
                              const std::vector<std::vector<int>>& vertex_cells,
                              int v, const std::vector<double>& min_area) {
  for (int c : vertex_cells[v]) {
    if (polygon_signed_area(verts, mesh.cells[c]) < min_area[c]) return false;
  }
  return true;
}

}  // namespace detail

/// Displaces interior vertices by independent uniform random offsets bounded
/// by amplitude times the shortest incident edge; boundary vertices stay
/// fixed.  A move that would tangle an incident cell is retried at half
/// displacement, then dropped.  Deterministic under a fixed seed.
inline Mesh perturb(const Mesh& mesh, double amplitude, unsigned seed) {
  if (amplitude < 0.0 || amplitude >= 0.5) {
    throw std::invalid_argument("perturb: amplitude must be in [0, 0.5)");
  }
  if (amplitude == 0.0) return mesh;

  std::vector<bool> boundary(mesh.vertices.size(), false);
  for (const Face& f : mesh.faces) {
    if (f.is_boundary()) boundary[f.v0] = boundary[f.v1] = true;
  }

  std::vector<double> min_edge(mesh.vertices.size(),
                               std::numeric_limits<double>::max());
  std::vector<std::vector<int>> vertex_cells(mesh.vertices.size());
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const auto& cyc = mesh.cells[c];
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const int a = cyc[k];
      const int b = cyc[(k + 1) % cyc.size()];
      const double len = norm(mesh.vertices[a] - mesh.vertices[b]);
      min_edge[a] = std::min(min_edge[a], len);
      min_edge[b] = std::min(min_edge[b], len);
      vertex_cells[a].push_back(static_cast<int>(c));
    }
  }

  // Cells must keep a healthy fraction of their area so downstream metrics
  // stay well conditioned.
  std::vector<double> min_area(mesh.n_cells());
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    min_area[c] = 0.05 * polygon_signed_area(mesh.vertices, mesh.cells[c]);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vec2> verts = mesh.vertices;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    // Draw for every vertex, boundary included, so the random stream does not
    // depend on which vertices end up movable.
    const Vec2 offset{unit(rng), unit(rng)};
    if (boundary[v]) continue;
    const double bound = amplitude * min_edge[v];
    const Vec2 original = verts[v];
    for (double scale : {1.0, 0.5}) {
      verts[v] = original + (scale * bound) * offset;
      if (detail::vertex_move_valid(mesh, verts, vertex_cells,
                                    static_cast<int>(v), min_area)) {
        break;
      }
      verts[v] = original;
    }
  }
  return make_mesh(std::move(verts), mesh.cells);
}

enum class TriPattern { Diagonal, Alternating };

/// Splits every quadrilateral into two triangles along a diagonal; the
/// alternating pattern flips the diagonal on odd cells.
inline Mesh triangulate(const Mesh& mesh, TriPattern pattern) {
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * mesh.n_cells());
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const auto& q = mesh.cells[c];
    if (q.size() != 4) {
      throw std::invalid_argument("triangulate: cell " + std::to_string(c) +
                                  " is not a quadrilateral");
    }
    const bool flip = pattern == TriPattern::Alternating && (c % 2 == 1);
    if (flip) {
      cells.push_back({q[0], q[1], q[3]});
      cells.push_back({q[1], q[2], q[3]});
    } else {
      cells.push_back({q[0], q[1], q[2]});
      cells.push_back({q[0], q[2], q[3]});
    }
  }
  return make_mesh(mesh.vertices, std::move(cells));
}

enum class Axis { X, Y };

/// Geometric grading of vertex coordinates along an axis: consecutive cell
/// spacings grow by the given ratio while the domain extent is preserved.
inline Mesh stretch(const Mesh& mesh, double ratio, Axis axis) {
  if (!(ratio > 0.0)) throw std::invalid_argument("stretch: ratio must be > 0");
  if (ratio == 1.0) return mesh;

  std::vector<double> coords;
  coords.reserve(mesh.vertices.size());
  for (const Vec2& v : mesh.vertices) {
    coords.push_back(axis == Axis::X ? v.x : v.y);
  }
  const auto [lo_it, hi_it] = std::minmax_element(coords.begin(), coords.end());
  const double lo = *lo_it, hi = *hi_it;
  const double extent = hi - lo;

  // Number of grading intervals = distinct coordinate levels - 1.
  std::vector<double> levels = coords;
  std::sort(levels.begin(), levels.end());
  int n = 0;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k] - levels[k - 1] > 1e-9 * extent) ++n;
  }
  if (n < 1) return mesh;

  std::vector<Vec2> verts = mesh.vertices;
  const double denom = std::pow(ratio, n) - 1.0;
  for (std::size_t v = 0; v < verts.size(); ++v) {
    const double t = (coords[v] - lo) / extent;
    const double mapped = lo + extent * (std::pow(ratio, n * t) - 1.0) / denom;
    if (axis == Axis::X) {
      verts[v].x = mapped;
    } else {
      verts[v].y = mapped;
    }
  }
  return make_mesh(std::move(verts), mesh.cells);
}

/// Refinement-independent sinusoidal coordinate warp with fixed boundary.
/// Produces a smoothly-regular irregular family, unlike perturb.
inline Mesh warp(const Mesh& mesh, double amplitude) {
  if (amplitude < 0.0 || amplitude >= 0.15) {
    throw std::invalid_argument("warp: amplitude must be in [0, 0.15)");
  }
  if (amplitude == 0.0) return mesh;
  double xlo = mesh.vertices[0].x, xhi = xlo;
  double ylo = mesh.vertices[0].y, yhi = ylo;
  for (const Vec2& v : mesh.vertices) {
    xlo = std::min(xlo, v.x);
    xhi = std::max(xhi, v.x);
    ylo = std::min(ylo, v.y);
    yhi = std::max(yhi, v.y);
  }
  const double lx = xhi - xlo, ly = yhi - ylo;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<Vec2> verts = mesh.vertices;
  for (Vec2& v : verts) {
    const double tx = (v.x - xlo) / lx;
    const double ty = (v.y - ylo) / ly;
    v.x += amplitude * lx * std::sin(two_pi * tx) * std::sin(two_pi * ty);
    v.y += amplitude * ly * std::sin(two_pi * tx) * std::sin(two_pi * ty);
  }
  return make_mesh(std::move(verts), mesh.cells);
}

}  // namespace fvgrad
