#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/geometry.hpp"
#include "fvgrad/mesh.hpp"

namespace fvgrad {

struct DegenerateGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FaceMetric {
  double area = 0.0;       // Δs_f, edge length
  Vec2 normal;             // unit, oriented owner -> neighbor (outward for owner)
  Vec2 centroid;           // edge midpoint
  Vec2 area_vec;           // S_f = n_f Δs_f
  Vec2 r;                  // unit centroid-join vector owner -> neighbor; interior only
  double dist = 0.0;       // |x_j - x_i|; interior only
};

/// Geometric metrics of a mesh.  Mirrors the topology (faces, adjacency) so
/// downstream consumers never need the Mesh itself.  Immutable after
/// construction.
struct MeshMetrics {
  std::vector<double> cell_volume;
  std::vector<Vec2> cell_centroid;
  std::vector<FaceMetric> face;
  std::vector<Face> faces;                // topology copy
  std::vector<std::vector<int>> cell_faces;
  double total_volume = 0.0;

  std::size_t n_cells() const { return cell_volume.size(); }
  std::size_t n_faces() const { return faces.size(); }

  /// Characteristic mesh size h = (V/N)^(1/2).
  double h() const {
    return std::sqrt(total_volume / static_cast<double>(n_cells()));
  }

  /// Outward-oriented area vector of face f as seen from cell c.
  Vec2 outward_area_vec(int f, int c) const {
    return faces[f].owner == c ? face[f].area_vec : -face[f].area_vec;
  }
  Vec2 outward_normal(int f, int c) const {
    return faces[f].owner == c ? face[f].normal : -face[f].normal;
  }
  /// Unit centroid-join vector pointing away from cell c (interior faces).
  Vec2 r_from(int f, int c) const {
    return faces[f].owner == c ? face[f].r : -face[f].r;
  }
  int other_cell(int f, int c) const {
    return faces[f].owner == c ? faces[f].neighbor : faces[f].owner;
  }
};

/// Polygon centroids and areas by the shoelace decomposition; face centroid is
/// the edge midpoint (single-point quadrature on straight faces).
inline MeshMetrics compute_metrics(const Mesh& mesh) {
  MeshMetrics m;
  m.faces = mesh.faces;
  m.cell_faces = mesh.cell_faces;
  m.cell_volume.resize(mesh.n_cells());
  m.cell_centroid.resize(mesh.n_cells());

  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const auto& cyc = mesh.cells[c];
    double area = 0.0;
    Vec2 centroid;
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      const Vec2 p = mesh.vertices[cyc[k]];
      const Vec2 q = mesh.vertices[cyc[(k + 1) % cyc.size()]];
      const double w = cross(p, q);
      area += w;
      centroid += w * (p + q);
    }
    area *= 0.5;
    if (area <= 0.0) {
      throw DegenerateGeometryError("cell " + std::to_string(c) +
                                    " has non-positive area");
    }
    m.cell_volume[c] = area;
    m.cell_centroid[c] = centroid / (6.0 * area);
    m.total_volume += area;
  }

  m.face.resize(mesh.n_faces());
  for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
    const Face& face = mesh.faces[f];
    const Vec2 p = mesh.vertices[face.v0];
    const Vec2 q = mesh.vertices[face.v1];
    FaceMetric& fm = m.face[f];
    const Vec2 edge = q - p;
    fm.area = norm(edge);
    if (fm.area <= 0.0) {
      throw DegenerateGeometryError("face " + std::to_string(f) +
                                    " has zero length");
    }
    // (v0,v1) follow the owner's counterclockwise traversal, so the
    // owner-outward normal is the edge rotated by -90 degrees.
    fm.normal = Vec2{edge.y, -edge.x} / fm.area;
    fm.centroid = 0.5 * (p + q);
    fm.area_vec = fm.area * fm.normal;
    if (!face.is_boundary()) {
      const Vec2 join =
          m.cell_centroid[face.neighbor] - m.cell_centroid[face.owner];
      fm.dist = norm(join);
      if (fm.dist == 0.0) {
        throw DegenerateGeometryError("face " + std::to_string(f) +
                                      " joins coincident cell centroids");
      }
      fm.r = join / fm.dist;
    }
  }
  return m;
}

/// Residuals of the closed-polygon and volume identities, normalized per cell:
///   Σ_f (x_f - x_i) n_x Δs_f = Ω_i        Σ_f (x_f - x_i) n_y Δs_f = 0
///   Σ_f (y_f - y_i) n_x Δs_f = 0          Σ_f (y_f - y_i) n_y Δs_f = Ω_i
///   Σ_f S_f^out = 0
/// Volume identities are scaled by Ω_i, face-sum by the cell perimeter.
struct IdentityReport {
  double max_volume_residual[4] = {0, 0, 0, 0};
  double max_face_sum_residual = 0.0;
  int worst_cell = -1;
  double tol = 0.0;
  bool pass = false;

  double max_residual() const {
    double r = max_face_sum_residual;
    for (double v : max_volume_residual) r = std::max(r, v);
    return r;
  }
};

inline IdentityReport validate_identities(const MeshMetrics& m, double tol) {
  IdentityReport rep;
  rep.tol = tol;
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    const double vol = m.cell_volume[c];
    const Vec2 xi = m.cell_centroid[c];
    double sum[4] = {0, 0, 0, 0};
    Vec2 face_sum;
    double perimeter = 0.0;
    for (int f : m.cell_faces[c]) {
      const Vec2 s = m.outward_area_vec(f, static_cast<int>(c));
      const Vec2 d = m.face[f].centroid - xi;
      sum[0] += d.x * s.x;
      sum[1] += d.x * s.y;
      sum[2] += d.y * s.x;
      sum[3] += d.y * s.y;
      face_sum += s;
      perimeter += m.face[f].area;
    }
    const double res[4] = {std::abs(sum[0] - vol) / vol, std::abs(sum[1]) / vol,
                           std::abs(sum[2]) / vol,
                           std::abs(sum[3] - vol) / vol};
    const double fres = norm(face_sum) / perimeter;
    for (int k = 0; k < 4; ++k) {
      if (res[k] > rep.max_volume_residual[k]) {
        rep.max_volume_residual[k] = res[k];
        rep.worst_cell = static_cast<int>(c);
      }
    }
    rep.max_face_sum_residual = std::max(rep.max_face_sum_residual, fres);
  }
  rep.pass = rep.max_residual() <= tol;
  return rep;
}

struct QualityReport {
  std::vector<double> face_nonorthogonality;  // radians, interior faces (else 0)
  std::vector<double> face_skewness;          // interior faces (else 0)
  std::vector<double> cell_aspect_ratio;      // longest / shortest face
  double max_nonorthogonality = 0.0;
  double mean_nonorthogonality = 0.0;
  double max_skewness = 0.0;
  double mean_skewness = 0.0;
  double h = 0.0;
};

/// Non-orthogonality angle arccos(n_f . r_f) and skewness = offset of the face
/// centroid from the centroid-join line's crossing of the face, normalized by
/// the centroid distance.
inline QualityReport compute_quality(const Mesh& mesh, const MeshMetrics& m) {
  QualityReport q;
  q.h = m.h();
  q.face_nonorthogonality.assign(m.n_faces(), 0.0);
  q.face_skewness.assign(m.n_faces(), 0.0);
  int n_interior = 0;
  for (std::size_t f = 0; f < m.n_faces(); ++f) {
    if (m.faces[f].is_boundary()) continue;
    ++n_interior;
    const FaceMetric& fm = m.face[f];
    const double c = std::clamp(dot(fm.normal, fm.r), -1.0, 1.0);
    const double angle = std::acos(c);
    q.face_nonorthogonality[f] = angle;

    // Crossing of the line x_i + t (x_j - x_i) with the face line.
    const Vec2 xi = m.cell_centroid[m.faces[f].owner];
    const Vec2 p = mesh.vertices[m.faces[f].v0];
    const Vec2 edge = mesh.vertices[m.faces[f].v1] - p;
    const Vec2 join = fm.dist * fm.r;
    const double denom = cross(join, edge);
    double skew = 0.0;
    if (std::abs(denom) > 1e-300) {
      const double t = cross(p - xi, edge) / denom;
      const Vec2 crossing = xi + t * join;
      skew = norm(fm.centroid - crossing) / fm.dist;
    }
    q.face_skewness[f] = skew;
    q.max_nonorthogonality = std::max(q.max_nonorthogonality, angle);
    q.mean_nonorthogonality += angle;
    q.max_skewness = std::max(q.max_skewness, skew);
    q.mean_skewness += skew;
  }
  if (n_interior > 0) {
    q.mean_nonorthogonality /= n_interior;
    q.mean_skewness /= n_interior;
  }
  q.cell_aspect_ratio.resize(m.n_cells());
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    double lo = std::numeric_limits<double>::max();
    double hi = 0.0;
    for (int f : m.cell_faces[c]) {
      lo = std::min(lo, m.face[f].area);
      hi = std::max(hi, m.face[f].area);
    }
    q.cell_aspect_ratio[c] = hi / lo;
  }
  return q;
}

}  // namespace fvgrad
