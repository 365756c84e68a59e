#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/geometry.hpp"
#include "fvgrad/metrics.hpp"

namespace fvgrad {

/// One entry of a cell's reconstruction neighborhood: the anchor point where
/// the directional derivative is sampled and the geometric vector pair.
struct StencilElement {
  Vec2 anchor;        // x_f
  Vec2 a;             // weighting vector
  Vec2 b;             // sampled derivative direction
  int face = -1;      // associated face id, -1 if none
  int neighbor = kBoundary;  // neighbor cell id, kBoundary for boundary data
  double weight = 1.0;
};

struct CellStencil {
  int cell = 0;
  std::vector<StencilElement> elements;
  Tensor2 p;          // dyadic sum  Σ a_f ⊗ b_f
  Tensor2 p_inv;
  double condition = 0.0;
};

struct SingularStencilError : std::runtime_error {
  int cell;
  SingularStencilError(int cell_, double d, double scale)
      : std::runtime_error("singular dyadic sum in cell " +
                           std::to_string(cell_) + " (det = " +
                           std::to_string(d) + ", scale = " +
                           std::to_string(scale) + ")"),
        cell(cell_) {}
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reconstructed per-cell gradients with solver diagnostics.  iterations and
/// residual stay zero for explicit reconstructions.
struct GradientField {
  std::vector<Vec2> values;
  int iterations = 0;
  double residual = 0.0;
  bool converged = true;
  std::vector<double> residual_history;
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 200;
  double relax = 1.0;
};

/// (φ2 - φ1) / (δ2 - δ1): the two-point directional derivative along b_f.
inline double two_point_directional_derivative(double phi1, double phi2,
                                               double delta1, double delta2) {
  if (delta1 == delta2) {
    throw std::invalid_argument(
        "two_point_directional_derivative: delta1 == delta2");
  }
  return (phi2 - phi1) / (delta2 - delta1);
}

/// Sums the dyadic products and inverts per cell.
inline std::vector<CellStencil> assemble_stencils(
    std::vector<std::vector<StencilElement>> elements_per_cell) {
  std::vector<CellStencil> out;
  out.reserve(elements_per_cell.size());
  for (std::size_t c = 0; c < elements_per_cell.size(); ++c) {
    CellStencil s;
    s.cell = static_cast<int>(c);
    s.elements = std::move(elements_per_cell[c]);
    for (const StencilElement& e : s.elements) s.p += outer(e.a, e.b);
    try {
      s.p_inv = invert(s.p);
    } catch (const SingularTensorError& err) {
      throw SingularStencilError(s.cell, err.determinant, err.scale);
    }
    const double d = det(s.p);
    s.condition = row_norm_scale(s.p) / std::abs(d);
    out.push_back(std::move(s));
  }
  return out;
}

/// ∇φ_i = ℙ⁻¹ Σ_f a_f · sample_f.
inline GradientField reconstruct_explicit(
    const std::vector<CellStencil>& stencils,
    const std::vector<std::vector<double>>& samples) {
  if (samples.size() != stencils.size()) {
    throw std::invalid_argument("reconstruct_explicit: size mismatch");
  }
  GradientField g;
  g.values.resize(stencils.size());
  for (std::size_t c = 0; c < stencils.size(); ++c) {
    const CellStencil& s = stencils[c];
    if (samples[c].size() != s.elements.size()) {
      throw std::invalid_argument("reconstruct_explicit: sample count for cell " +
                                  std::to_string(c) +
                                  " does not match stencil");
    }
    Vec2 acc;
    for (std::size_t e = 0; e < s.elements.size(); ++e) {
      acc += samples[c][e] * s.elements[e].a;
    }
    g.values[c] = s.p_inv * acc;
  }
  return g;
}

using SampleFn = std::function<double(int cell, const StencilElement& element,
                                      const GradientField& iterate)>;

/// Jacobi fixed-point iteration for sample rules affine in the gradient:
/// iterate k+1 is computed for every cell from iterate k only, blended by the
/// under-relaxation factor.  Stops when the max-cell relative change drops
/// below tol or max_iter is reached; an infinite tol returns the initial
/// iterate untouched.
inline GradientField solve_implicit(const std::vector<CellStencil>& stencils,
                                    const SampleFn& sample,
                                    GradientField initial,
                                    const SolverOptions& opts = {}) {
  GradientField g = std::move(initial);
  g.iterations = 0;
  g.residual = 0.0;
  g.converged = true;
  g.residual_history.clear();
  if (std::isinf(opts.tol)) return g;

  std::vector<Vec2> next(g.values.size());
  for (int k = 1; k <= opts.max_iter; ++k) {
    for (const CellStencil& s : stencils) {
      Vec2 acc;
      for (const StencilElement& e : s.elements) {
        acc += sample(s.cell, e, g) * e.a;
      }
      next[s.cell] = s.p_inv * acc;
    }
    double max_change = 0.0;
    double max_mag = 0.0;
    for (std::size_t c = 0; c < next.size(); ++c) {
      const Vec2 blended = g.values[c] + opts.relax * (next[c] - g.values[c]);
      if (!finite(blended)) {
        throw DivergenceError("implicit gradient iteration produced NaN/inf "
                              "in cell " + std::to_string(c) +
                              " at iteration " + std::to_string(k));
      }
      max_change = std::max(max_change, norm(blended - g.values[c]));
      max_mag = std::max(max_mag, norm(blended));
      g.values[c] = blended;
    }
    const double rel = max_change / (max_mag + 1e-300);
    g.iterations = k;
    g.residual = rel;
    g.residual_history.push_back(rel);
    if (rel <= opts.tol) return g;
  }
  g.converged = false;
  return g;
}

}  // namespace fvgrad
