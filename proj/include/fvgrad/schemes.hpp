#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/fields.hpp"
#include "fvgrad/gradient.hpp"
#include "fvgrad/metrics.hpp"

namespace fvgrad {

enum class Mode { Explicit, Implicit, TwoStep };

struct UnsupportedSchemeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A gradient scheme: neighborhood + geometric vector pair (the element
/// builder, a function of the mesh metrics alone) plus the directional
/// derivative sample rule and its evaluation mode.
struct SchemeSpec {
  std::string name;
  Mode mode = Mode::Explicit;
  std::function<std::vector<std::vector<StencilElement>>(const MeshMetrics&)>
      build_elements;
  /// grads is the tilde/iterate gradient field; null for pure explicit rules.
  std::function<double(const MeshMetrics&, const FieldSamples&, int cell,
                       const StencilElement&, const GradientField* grads)>
      sample;
  std::shared_ptr<const SchemeSpec> base;  // two-step schemes only
};

enum class FaceInterpolation { ArithmeticMean, InverseDistance, SkewCorrected };

/// Zwart evaluation of the face-normal derivative: the normal is split into
/// alpha r_f plus a remainder carried by averaged gradients,
///   dphi/dn = alpha (phi_j - phi_i)/|x_j - x_i| + ((grad_i + grad_j)/2) . (n - alpha r).
inline double zwart_normal_derivative(double phi_i, double phi_j, Vec2 grad_i,
                                      Vec2 grad_j, Vec2 n, Vec2 r, double dist,
                                      double alpha) {
  if (dist <= 0.0) {
    throw DegenerateGeometryError(
        "zwart_normal_derivative: coincident cell centroids");
  }
  return alpha * (phi_j - phi_i) / dist +
         dot(0.5 * (grad_i + grad_j), n - alpha * r);
}

namespace detail {

/// One stencil element per face of each cell, with cell-outward orientation.
/// make_ab(f, cell, interior) -> (a, b).
template <typename MakeAB>
std::vector<std::vector<StencilElement>> face_elements(const MeshMetrics& m,
                                                       MakeAB&& make_ab) {
  std::vector<std::vector<StencilElement>> out(m.n_cells());
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    const int cell = static_cast<int>(c);
    out[c].reserve(m.cell_faces[c].size());
    for (int f : m.cell_faces[c]) {
      StencilElement e;
      e.face = f;
      e.anchor = m.face[f].centroid;
      e.neighbor = m.faces[f].is_boundary() ? kBoundary : m.other_cell(f, cell);
      make_ab(e, cell);
      out[c].push_back(e);
    }
  }
  return out;
}

inline const GradientField& require_grads(const GradientField* g,
                                          const char* scheme) {
  if (g == nullptr) {
    throw std::logic_error(std::string(scheme) +
                           " sample rule needs a gradient field");
  }
  return *g;
}

}  // namespace detail

/// Green-Gauss: a_f = S_f, b_f = x_f - x_i, sample = phi_f - phi_i with the
/// chosen face interpolation.  Boundary faces carry exact face values.  The
/// skew-corrected variant feeds the previous gradient iterate into the
/// interpolation and is solved as a fixed point.
inline SchemeSpec make_green_gauss(FaceInterpolation interp) {
  SchemeSpec s;
  switch (interp) {
    case FaceInterpolation::ArithmeticMean: s.name = "gg:mean"; break;
    case FaceInterpolation::InverseDistance: s.name = "gg:idw"; break;
    case FaceInterpolation::SkewCorrected: s.name = "gg:skew"; break;
  }
  s.mode = interp == FaceInterpolation::SkewCorrected ? Mode::Implicit
                                                      : Mode::Explicit;
  s.build_elements = [](const MeshMetrics& m) {
    return detail::face_elements(m, [&m](StencilElement& e, int cell) {
      e.a = m.outward_area_vec(e.face, cell);
      e.b = m.face[e.face].centroid - m.cell_centroid[cell];
    });
  };
  s.sample = [interp](const MeshMetrics& m, const FieldSamples& data, int cell,
                      const StencilElement& e, const GradientField* grads) {
    const double phi_i = data.cell_value[cell];
    if (e.neighbor == kBoundary) return data.boundary_value[e.face] - phi_i;
    const double phi_j = data.cell_value[e.neighbor];
    const Vec2 xf = m.face[e.face].centroid;
    double phi_f = 0.0;
    switch (interp) {
      case FaceInterpolation::ArithmeticMean:
        phi_f = 0.5 * (phi_i + phi_j);
        break;
      case FaceInterpolation::InverseDistance: {
        const double di = norm(xf - m.cell_centroid[cell]);
        const double dj = norm(xf - m.cell_centroid[e.neighbor]);
        phi_f = (phi_i * dj + phi_j * di) / (di + dj);
        break;
      }
      case FaceInterpolation::SkewCorrected: {
        const GradientField& g = detail::require_grads(grads, "gg:skew");
        const Vec2 mid =
            0.5 * (m.cell_centroid[cell] + m.cell_centroid[e.neighbor]);
        phi_f = 0.5 * (phi_i + phi_j) +
                dot(0.5 * (g.values[cell] + g.values[e.neighbor]), xf - mid);
        break;
      }
    }
    return phi_f - phi_i;
  };
  return s;
}

/// Modified Green-Gauss: a_f = x_f - x_i, b_f = S_f; the face-normal
/// derivative comes from Zwart reconstruction, which couples the gradients of
/// face-sharing cells and makes the scheme implicit.  alpha defaults to the
/// per-face n_f . r_f; pass a value for the constant-alpha variant.
inline SchemeSpec make_mgg(std::optional<double> alpha = std::nullopt) {
  SchemeSpec s;
  s.name = "mgg";
  if (alpha) {
    std::ostringstream n;
    n << "mgg:alpha=" << *alpha;
    s.name = n.str();
  }
  s.mode = Mode::Implicit;
  s.build_elements = [](const MeshMetrics& m) {
    return detail::face_elements(m, [&m](StencilElement& e, int cell) {
      e.a = m.face[e.face].centroid - m.cell_centroid[cell];
      e.b = m.outward_area_vec(e.face, cell);
    });
  };
  s.sample = [alpha](const MeshMetrics& m, const FieldSamples& data, int cell,
                     const StencilElement& e, const GradientField* grads) {
    const double ds = m.face[e.face].area;
    if (e.neighbor == kBoundary) return data.boundary_normal_deriv[e.face] * ds;
    const GradientField& g = detail::require_grads(grads, "mgg");
    const Vec2 n = m.outward_normal(e.face, cell);
    const Vec2 r = m.r_from(e.face, cell);
    const double a = alpha ? *alpha : dot(n, r);
    return zwart_normal_derivative(data.cell_value[cell],
                                   data.cell_value[e.neighbor], g.values[cell],
                                   g.values[e.neighbor], n, r,
                                   m.face[e.face].dist, a) *
           ds;
  };
  return s;
}

/// Linear least squares over face-sharing cell centers: a_f = b_f =
/// w_j (x_j - x_i) with w_j = |x_j - x_i|^(-q), or unweighted.  Boundary cells
/// augment the neighborhood with boundary face centroids carrying exact
/// values.
inline SchemeSpec make_lsq(std::optional<double> q = std::nullopt) {
  SchemeSpec s;
  if (q) {
    std::ostringstream n;
    n << "wlsq:q=" << *q;
    s.name = n.str();
  } else {
    s.name = "ulsq";
  }
  s.mode = Mode::Explicit;
  s.build_elements = [q](const MeshMetrics& m) {
    return detail::face_elements(m, [&m, q](StencilElement& e, int cell) {
      const Vec2 point = e.neighbor == kBoundary
                             ? m.face[e.face].centroid
                             : m.cell_centroid[e.neighbor];
      const Vec2 d = point - m.cell_centroid[cell];
      e.anchor = point;
      e.weight = q ? std::pow(norm(d), -*q) : 1.0;
      e.a = e.b = e.weight * d;
    });
  };
  s.sample = [](const MeshMetrics&, const FieldSamples& data, int cell,
                const StencilElement& e, const GradientField*) {
    const double phi_i = data.cell_value[cell];
    const double phi_p = e.neighbor == kBoundary ? data.boundary_value[e.face]
                                                 : data.cell_value[e.neighbor];
    return e.weight * (phi_p - phi_i);
  };
  return s;
}

/// Face-area-weighted least squares: a_f = S_f, b_f = n_f, sampling the
/// face-normal derivative (Zwart, like MGG) -- implicit, symmetric dyadic sum.
inline SchemeSpec make_flsq() {
  SchemeSpec s;
  s.name = "flsq";
  s.mode = Mode::Implicit;
  s.build_elements = [](const MeshMetrics& m) {
    return detail::face_elements(m, [&m](StencilElement& e, int cell) {
      e.a = m.outward_area_vec(e.face, cell);
      e.b = m.outward_normal(e.face, cell);
    });
  };
  s.sample = [](const MeshMetrics& m, const FieldSamples& data, int cell,
                const StencilElement& e, const GradientField* grads) {
    if (e.neighbor == kBoundary) return data.boundary_normal_deriv[e.face];
    const GradientField& g = detail::require_grads(grads, "flsq");
    const Vec2 n = m.outward_normal(e.face, cell);
    const Vec2 r = m.r_from(e.face, cell);
    return zwart_normal_derivative(data.cell_value[cell],
                                   data.cell_value[e.neighbor], g.values[cell],
                                   g.values[e.neighbor], n, r,
                                   m.face[e.face].dist, dot(n, r));
  };
  return s;
}

/// Taylor-Gauss: a_f = S_f, b_f = x_j - x_i, sample = phi_j - phi_i.  The
/// weighted variant scales both vectors by w_f = |x_j - x_i|^(-q).
inline SchemeSpec make_tg(std::optional<double> q = std::nullopt) {
  SchemeSpec s;
  if (q) {
    std::ostringstream n;
    n << "tg:w=" << *q;
    s.name = n.str();
  } else {
    s.name = "tg";
  }
  s.mode = Mode::Explicit;
  s.build_elements = [q](const MeshMetrics& m) {
    return detail::face_elements(m, [&m, q](StencilElement& e, int cell) {
      const Vec2 point = e.neighbor == kBoundary
                             ? m.face[e.face].centroid
                             : m.cell_centroid[e.neighbor];
      const Vec2 d = point - m.cell_centroid[cell];
      e.weight = q ? std::pow(norm(d), -*q) : 1.0;
      e.a = e.weight * m.outward_area_vec(e.face, cell);
      e.b = e.weight * d;
    });
  };
  s.sample = [](const MeshMetrics&, const FieldSamples& data, int cell,
                const StencilElement& e, const GradientField*) {
    const double phi_i = data.cell_value[cell];
    const double phi_p = e.neighbor == kBoundary ? data.boundary_value[e.face]
                                                 : data.cell_value[e.neighbor];
    return e.weight * (phi_p - phi_i);
  };
  return s;
}

/// alpha-damped variant of a face-associated base scheme:
///   b_f . grad phi_f = alpha |b_f| (phi_j - phi_i)/|x_j - x_i|
///                      + (b_f - alpha |b_f| r_f) . (grad_i + grad_j)/2.
/// Two-step mode precomputes the gradient average with the base scheme;
/// implicit mode couples it through the fixed-point solver.  Boundary
/// elements keep the base sample rule (exact data, r_f undefined there).
inline SchemeSpec make_flexible(SchemeSpec base_spec, double alpha, Mode mode) {
  if (mode != Mode::TwoStep && mode != Mode::Implicit) {
    throw std::invalid_argument("make_flexible: mode must be two-step or implicit");
  }
  auto base = std::make_shared<const SchemeSpec>(std::move(base_spec));
  SchemeSpec s;
  {
    std::ostringstream n;
    n << "flex:" << base->name << ":alpha=" << alpha << ':'
      << (mode == Mode::TwoStep ? "two-step" : "implicit");
    s.name = n.str();
  }
  s.mode = mode;
  s.base = base;
  s.build_elements = [base, name = s.name](const MeshMetrics& m) {
    auto elems = base->build_elements(m);
    for (const auto& cell_elems : elems) {
      for (const StencilElement& e : cell_elems) {
        if (e.face < 0) {
          throw UnsupportedSchemeError(
              name + ": base neighborhood is not face-associated");
        }
      }
    }
    return elems;
  };
  s.sample = [base, alpha](const MeshMetrics& m, const FieldSamples& data,
                           int cell, const StencilElement& e,
                           const GradientField* grads) {
    if (e.neighbor == kBoundary) {
      return base->sample(m, data, cell, e, grads);
    }
    const GradientField& g = detail::require_grads(grads, "flex");
    const Vec2 r = m.r_from(e.face, cell);
    const double dist = m.face[e.face].dist;
    const double bl = norm(e.b);
    const Vec2 avg = 0.5 * (g.values[cell] + g.values[e.neighbor]);
    return alpha * bl *
               (data.cell_value[e.neighbor] - data.cell_value[cell]) / dist +
           dot(e.b - (alpha * bl) * r, avg);
  };
  return s;
}

/// Parses a scheme id: gg:mean | gg:idw | gg:skew | mgg | mgg:alpha=<v> |
/// ulsq | wlsq | wlsq:q=<v> | flsq | tg | tg:w=<v> |
/// flex:<base>:alpha=<v>:<two-step|implicit>.
inline SchemeSpec parse_scheme(const std::string& id) {
  auto number_after = [&](const std::string& prefix) {
    const std::string tail = id.substr(prefix.size());
    std::size_t used = 0;
    const double v = std::stod(tail, &used);
    if (used != tail.size()) {
      throw std::invalid_argument("bad numeric parameter in scheme id: " + id);
    }
    return v;
  };
  if (id == "gg:mean") return make_green_gauss(FaceInterpolation::ArithmeticMean);
  if (id == "gg:idw") return make_green_gauss(FaceInterpolation::InverseDistance);
  if (id == "gg:skew") return make_green_gauss(FaceInterpolation::SkewCorrected);
  if (id == "mgg") return make_mgg();
  if (id.rfind("mgg:alpha=", 0) == 0) return make_mgg(number_after("mgg:alpha="));
  if (id == "ulsq") return make_lsq();
  if (id == "wlsq") return make_lsq(1.0);
  if (id.rfind("wlsq:q=", 0) == 0) return make_lsq(number_after("wlsq:q="));
  if (id == "flsq") return make_flsq();
  if (id == "tg") return make_tg();
  if (id.rfind("tg:w=", 0) == 0) return make_tg(number_after("tg:w="));
  if (id.rfind("flex:", 0) == 0) {
    const std::string rest = id.substr(5);
    const std::size_t mode_sep = rest.rfind(':');
    if (mode_sep != std::string::npos) {
      const std::string mode_tok = rest.substr(mode_sep + 1);
      const std::string head = rest.substr(0, mode_sep);
      const std::size_t alpha_sep = head.rfind(':');
      if (alpha_sep != std::string::npos &&
          head.compare(alpha_sep + 1, 6, "alpha=") == 0 &&
          (mode_tok == "two-step" || mode_tok == "implicit")) {
        const double alpha = std::stod(head.substr(alpha_sep + 7));
        const Mode mode =
            mode_tok == "two-step" ? Mode::TwoStep : Mode::Implicit;
        return make_flexible(parse_scheme(head.substr(0, alpha_sep)), alpha,
                             mode);
      }
    }
  }
  throw std::invalid_argument(
      "unknown scheme id: " + id +
      " (valid: gg:mean, gg:idw, gg:skew, mgg, mgg:alpha=<v>, ulsq, wlsq, "
      "wlsq:q=<v>, flsq, tg, tg:w=<v>, "
      "flex:<base>:alpha=<v>:<two-step|implicit>)");
}

/// End-to-end reconstruction of one field on one mesh.  Implicit schemes start
/// from explicit inverse-distance Green-Gauss gradients and iterate Jacobi
/// fixed points; two-step schemes run the base scheme first and feed its
/// gradients into the damped sample rule.
inline GradientField run_scheme(const SchemeSpec& spec, const MeshMetrics& m,
                                const FieldSamples& data,
                                const SolverOptions& opts = {}) {
  auto stencils = assemble_stencils(spec.build_elements(m));
  switch (spec.mode) {
    case Mode::Explicit: {
      std::vector<std::vector<double>> samples(stencils.size());
      for (const CellStencil& st : stencils) {
        samples[st.cell].reserve(st.elements.size());
        for (const StencilElement& e : st.elements) {
          samples[st.cell].push_back(
              spec.sample(m, data, st.cell, e, nullptr));
        }
      }
      return reconstruct_explicit(stencils, samples);
    }
    case Mode::TwoStep: {
      GradientField tilde = run_scheme(*spec.base, m, data, opts);
      std::vector<std::vector<double>> samples(stencils.size());
      for (const CellStencil& st : stencils) {
        samples[st.cell].reserve(st.elements.size());
        for (const StencilElement& e : st.elements) {
          samples[st.cell].push_back(spec.sample(m, data, st.cell, e, &tilde));
        }
      }
      GradientField g = reconstruct_explicit(stencils, samples);
      g.iterations = tilde.iterations;
      g.residual = tilde.residual;
      g.converged = tilde.converged;
      return g;
    }
    case Mode::Implicit: {
      GradientField initial = run_scheme(
          make_green_gauss(FaceInterpolation::InverseDistance), m, data);
      SampleFn fn = [&](int cell, const StencilElement& e,
                        const GradientField& iterate) {
        return spec.sample(m, data, cell, e, &iterate);
      };
      return solve_implicit(stencils, fn, std::move(initial), opts);
    }
  }
  throw std::logic_error("run_scheme: unreachable");
}

}  // namespace fvgrad
