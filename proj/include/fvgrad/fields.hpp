#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/metrics.hpp"

namespace fvgrad {

/// Manufactured scalar field with its analytic gradient.
struct ManufacturedField {
  std::string name;
  std::function<double(Vec2)> value;
  std::function<Vec2(Vec2)> gradient;
};

inline ManufacturedField make_linear(double c0, double c1, double c2) {
  std::ostringstream name;
  name << "linear:" << c0 << ',' << c1 << ',' << c2;
  return {name.str(),
          [=](Vec2 p) { return c0 + c1 * p.x + c2 * p.y; },
          [=](Vec2) { return Vec2{c1, c2}; }};
}

inline ManufacturedField make_quadratic() {
  return {"quadratic",
          [](Vec2 p) { return p.x * p.x + p.x * p.y + p.y * p.y; },
          [](Vec2 p) { return Vec2{2.0 * p.x + p.y, p.x + 2.0 * p.y}; }};
}

inline ManufacturedField make_trig() {
  constexpr double k = 2.0 * std::numbers::pi;
  return {"trig",
          [](Vec2 p) { return std::sin(k * p.x) * std::sin(k * p.y); },
          [](Vec2 p) {
            return Vec2{k * std::cos(k * p.x) * std::sin(k * p.y),
                        k * std::sin(k * p.x) * std::cos(k * p.y)};
          }};
}

inline ManufacturedField make_exponential() {
  return {"exp",
          [](Vec2 p) { return std::exp(p.x + 2.0 * p.y); },
          [](Vec2 p) {
            const double e = std::exp(p.x + 2.0 * p.y);
            return Vec2{e, 2.0 * e};
          }};
}

/// Parses a field id: linear:c0,c1,c2 | quadratic | trig | exp.
inline ManufacturedField parse_field(const std::string& id) {
  if (id == "quadratic") return make_quadratic();
  if (id == "trig") return make_trig();
  if (id == "exp") return make_exponential();
  if (id.rfind("linear", 0) == 0) {
    double c[3] = {1.0, 2.0, 3.0};
    if (id.size() > 6) {
      if (id[6] != ':') throw std::invalid_argument("bad field id: " + id);
      std::istringstream ss(id.substr(7));
      char comma;
      if (!(ss >> c[0] >> comma >> c[1] >> comma >> c[2])) {
        throw std::invalid_argument("bad linear coefficients in: " + id);
      }
    }
    return make_linear(c[0], c[1], c[2]);
  }
  throw std::invalid_argument("unknown field id: " + id);
}

/// Pointwise samples a scheme consumes: centroid values plus exact boundary
/// face values and outward normal derivatives.  Boundary arrays are indexed
/// by face id; interior entries are unused.
struct FieldSamples {
  std::vector<double> cell_value;
  std::vector<double> boundary_value;
  std::vector<double> boundary_normal_deriv;  // owner-outward
};

inline FieldSamples sample(const ManufacturedField& field,
                           const MeshMetrics& m) {
  FieldSamples s;
  s.cell_value.resize(m.n_cells());
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    s.cell_value[c] = field.value(m.cell_centroid[c]);
  }
  s.boundary_value.assign(m.n_faces(), 0.0);
  s.boundary_normal_deriv.assign(m.n_faces(), 0.0);
  for (std::size_t f = 0; f < m.n_faces(); ++f) {
    if (!m.faces[f].is_boundary()) continue;
    s.boundary_value[f] = field.value(m.face[f].centroid);
    s.boundary_normal_deriv[f] =
        dot(field.gradient(m.face[f].centroid), m.face[f].normal);
  }
  return s;
}

inline std::vector<Vec2> exact_gradients(const ManufacturedField& field,
                                         const MeshMetrics& m) {
  std::vector<Vec2> g(m.n_cells());
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    g[c] = field.gradient(m.cell_centroid[c]);
  }
  return g;
}

}  // namespace fvgrad
