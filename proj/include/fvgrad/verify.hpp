#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fvgrad/fields.hpp"
#include "fvgrad/generators.hpp"
#include "fvgrad/metrics.hpp"
#include "fvgrad/schemes.hpp"

namespace fvgrad {

/// Volume-weighted error norms of |grad_computed - grad_exact|:
///   L2 = sqrt(Σ Ω_i |e_i|^2 / Σ Ω_i),  L1 and L∞ analogous.
/// Combined uses the 2-norm of the per-cell error vector; component norms are
/// kept alongside.
struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double l2_x = 0.0;
  double l2_y = 0.0;
};

inline ErrorNorms error_norms(const std::vector<Vec2>& computed,
                              const std::vector<Vec2>& exact,
                              const MeshMetrics& m) {
  if (computed.size() != exact.size() || computed.size() != m.n_cells()) {
    throw std::invalid_argument("error_norms: size mismatch");
  }
  ErrorNorms n;
  double sx = 0.0, sy = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < computed.size(); ++c) {
    const Vec2 e = computed[c] - exact[c];
    const double mag = norm(e);
    const double w = m.cell_volume[c];
    s1 += w * mag;
    s2 += w * mag * mag;
    sx += w * e.x * e.x;
    sy += w * e.y * e.y;
    n.linf = std::max(n.linf, mag);
  }
  n.l1 = s1 / m.total_volume;
  n.l2 = std::sqrt(s2 / m.total_volume);
  n.l2_x = std::sqrt(sx / m.total_volume);
  n.l2_y = std::sqrt(sy / m.total_volume);
  return n;
}

/// Error threshold below which a scheme is reported EXACT instead of fitting a
/// meaningless order through roundoff noise.
constexpr double kExactErrorFloor = 1e-13;

/// p = log(e_coarse/e_fine) / log(h_coarse/h_fine); nullopt means EXACT.
inline std::optional<double> observed_order(double e_coarse, double e_fine,
                                            double h_coarse, double h_fine) {
  if (!(h_coarse > h_fine) || h_fine <= 0.0) {
    throw std::invalid_argument("observed_order: need h_coarse > h_fine > 0");
  }
  if (e_coarse < 0.0 || e_fine < 0.0) {
    throw std::invalid_argument("observed_order: negative error");
  }
  if (e_coarse <= kExactErrorFloor || e_fine <= kExactErrorFloor) {
    return std::nullopt;
  }
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

/// A refinement family: level L doubles nx, ny of the base size and shifts
/// the perturbation seed by L, while amplitude/ratio stay fixed so mesh
/// irregularity does not vanish under refinement.
struct MeshFamily {
  std::string generator = "cartesian";  // cartesian | perturbed | triangulated
                                        // | stretched | warped
  int nx = 8;
  int ny = 8;
  double amplitude = 0.3;   // perturbed, triangulated, warped
  unsigned seed = 1;
  double ratio = 1.2;       // stretched
};

inline Mesh build_family_mesh(const MeshFamily& fam, int level) {
  const int nx = fam.nx << level;
  const int ny = fam.ny << level;
  const unsigned seed = fam.seed + static_cast<unsigned>(level);
  const Mesh base = build_cartesian(nx, ny);
  if (fam.generator == "cartesian") return base;
  if (fam.generator == "perturbed") return perturb(base, fam.amplitude, seed);
  if (fam.generator == "triangulated") {
    return triangulate(fam.amplitude > 0.0 ? perturb(base, fam.amplitude, seed)
                                           : base,
                       TriPattern::Diagonal);
  }
  if (fam.generator == "stretched") return stretch(base, fam.ratio, Axis::X);
  if (fam.generator == "warped") return warp(base, fam.amplitude);
  throw std::invalid_argument("unknown mesh family generator: " +
                              fam.generator);
}

struct LevelResult {
  int level = 0;
  double h = 0.0;
  int n_cells = 0;
  ErrorNorms norms;
  std::optional<double> order_l2;  // vs previous level; nullopt = exact/none
  bool order_exact = false;        // both levels at the exact floor
  int iterations = 0;
  double residual = 0.0;
  std::string status = "ok";
};

struct ConvergenceReport {
  std::string scheme;
  std::string field;
  std::string family;
  std::vector<LevelResult> levels;
};

/// Runs a (scheme, field) grid over a refinement family.  Scheme failures on
/// a level (singular stencil, divergence) are recorded in the report and the
/// study continues.
inline std::vector<ConvergenceReport> convergence_study(
    const std::vector<std::string>& scheme_ids,
    const std::vector<std::string>& field_ids, const MeshFamily& fam,
    int levels, const SolverOptions& solver = {}) {
  if (levels < 1) throw std::invalid_argument("convergence_study: levels < 1");

  struct LevelData {
    MeshMetrics metrics;
    double h;
  };
  std::vector<LevelData> grids;
  grids.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    MeshMetrics m = compute_metrics(build_family_mesh(fam, l));
    const double h = m.h();
    grids.push_back({std::move(m), h});
  }

  std::vector<ConvergenceReport> reports;
  for (const std::string& sid : scheme_ids) {
    const SchemeSpec spec = parse_scheme(sid);
    for (const std::string& fid : field_ids) {
      const ManufacturedField field = parse_field(fid);
      ConvergenceReport rep;
      rep.scheme = spec.name;
      rep.field = field.name;
      rep.family = fam.generator;
      for (int l = 0; l < levels; ++l) {
        const MeshMetrics& m = grids[l].metrics;
        LevelResult res;
        res.level = l;
        res.h = grids[l].h;
        res.n_cells = static_cast<int>(m.n_cells());
        try {
          const FieldSamples data = sample(field, m);
          const GradientField g = run_scheme(spec, m, data, solver);
          res.norms = error_norms(g.values, exact_gradients(field, m), m);
          res.iterations = g.iterations;
          res.residual = g.residual;
          if (!g.converged) res.status = "not-converged";
        } catch (const SingularStencilError&) {
          res.status = "singular-stencil";
        } catch (const DivergenceError&) {
          res.status = "diverged";
        }
        if (l > 0 && res.status == "ok" &&
            rep.levels.back().status == "ok") {
          res.order_l2 = observed_order(rep.levels.back().norms.l2,
                                        res.norms.l2, rep.levels.back().h,
                                        res.h);
          res.order_exact = !res.order_l2.has_value();
        }
        rep.levels.push_back(std::move(res));
      }
      reports.push_back(std::move(rep));
    }
  }
  return reports;
}

/// One row per (scheme, field, level); stable ordering, fixed formatting, so
/// repeated runs are byte-identical.
inline std::string reports_to_csv(const std::vector<ConvergenceReport>& reps) {
  std::ostringstream out;
  out << "scheme,field,mesh_family,level,h,n_cells,L1,L2,Linf,order_L2,iters,"
         "residual,status\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.10e", v);
    return std::string(buf);
  };
  for (const ConvergenceReport& r : reps) {
    for (const LevelResult& l : r.levels) {
      out << r.scheme << ',' << r.field << ',' << r.family << ',' << l.level
          << ',' << num(l.h) << ',' << l.n_cells << ',' << num(l.norms.l1)
          << ',' << num(l.norms.l2) << ',' << num(l.norms.linf) << ',';
      if (l.order_l2) {
        std::snprintf(buf, sizeof buf, "%.6f", *l.order_l2);
        out << buf;
      } else if (l.order_exact) {
        out << "exact";
      }
      out << ',' << l.iterations << ',' << num(l.residual) << ',' << l.status
          << '\n';
    }
  }
  return out.str();
}

}  // namespace fvgrad
