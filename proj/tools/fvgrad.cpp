// Command-line front end: mesh generation, identity validation, single-field
// gradient reconstruction, and convergence studies driven by a config file.
//
// Exit codes: 0 success, 1 validation/quality failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fvgrad/fields.hpp"
#include "fvgrad/generators.hpp"
#include "fvgrad/mesh_io.hpp"
#include "fvgrad/metrics.hpp"
#include "fvgrad/schemes.hpp"
#include "fvgrad/study_config.hpp"
#include "fvgrad/verify.hpp"

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fvgrad::Mesh parse_and_generate(const std::string& size_spec,
                                const std::string& range_spec, double perturb_a,
                                unsigned seed, const std::string& tri_pattern,
                                double stretch_ratio, const std::string& axis,
                                double warp_a) {
  int nx = 0, ny = 0;
  char sep = 0;
  std::istringstream ss(size_spec);
  if (!(ss >> nx >> sep >> ny) || sep != 'x') {
    throw UsageError("--cartesian expects NXxNY, got '" + size_spec + "'");
  }
  fvgrad::Interval xr{0.0, 1.0}, yr{0.0, 1.0};
  if (!range_spec.empty()) {
    std::istringstream rs(range_spec);
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(rs >> xr.lo >> c1 >> xr.hi >> c2 >> yr.lo >> c3 >> yr.hi) ||
        c1 != ',' || c2 != ',' || c3 != ',') {
      throw UsageError("--range expects x0,x1,y0,y1");
    }
  }
  fvgrad::Mesh mesh = fvgrad::build_cartesian(nx, ny, xr, yr);
  if (stretch_ratio != 1.0) {
    mesh = fvgrad::stretch(mesh, stretch_ratio,
                           axis == "y" ? fvgrad::Axis::Y : fvgrad::Axis::X);
  }
  if (perturb_a > 0.0) mesh = fvgrad::perturb(mesh, perturb_a, seed);
  if (!tri_pattern.empty()) {
    mesh = fvgrad::triangulate(mesh, tri_pattern == "alternating"
                                         ? fvgrad::TriPattern::Alternating
                                         : fvgrad::TriPattern::Diagonal);
  }
  if (warp_a > 0.0) mesh = fvgrad::warp(mesh, warp_a);
  return mesh;
}

int cmd_validate(const std::string& path) {
  fvgrad::Mesh mesh;
  try {
    mesh = fvgrad::read_mesh(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const auto metrics = fvgrad::compute_metrics(mesh);
    const auto report = fvgrad::validate_identities(metrics, 1e-10);
    std::printf("cells %zu faces %zu\n", metrics.n_cells(), metrics.n_faces());
    std::printf("max volume-identity residuals: %.3e %.3e %.3e %.3e\n",
                report.max_volume_residual[0], report.max_volume_residual[1],
                report.max_volume_residual[2], report.max_volume_residual[3]);
    std::printf("max face-sum residual: %.3e\n", report.max_face_sum_residual);
    std::printf("max residual: %.3e (tol %.1e) -> %s\n", report.max_residual(),
                report.tol, report.pass ? "PASS" : "FAIL");
    return report.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_reconstruct(const std::string& mesh_path, const std::string& scheme_id,
                    const std::string& field_id,
                    const fvgrad::SolverOptions& solver,
                    const std::string& out_path) {
  fvgrad::SchemeSpec spec;
  fvgrad::ManufacturedField field;
  fvgrad::Mesh mesh;
  try {
    spec = fvgrad::parse_scheme(scheme_id);
    field = fvgrad::parse_field(field_id);
    mesh = fvgrad::read_mesh(mesh_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const auto metrics = fvgrad::compute_metrics(mesh);
    const auto data = fvgrad::sample(field, metrics);
    const auto g = fvgrad::run_scheme(spec, metrics, data, solver);
    const auto exact = fvgrad::exact_gradients(field, metrics);
    const auto norms = fvgrad::error_norms(g.values, exact, metrics);
    std::printf("scheme %s field %s cells %zu\n", spec.name.c_str(),
                field.name.c_str(), metrics.n_cells());
    std::printf("L1 %.10e  L2 %.10e  Linf %.10e\n", norms.l1, norms.l2,
                norms.linf);
    if (g.iterations > 0) {
      std::printf("iterations %d  residual %.3e  converged %s\n", g.iterations,
                  g.residual, g.converged ? "yes" : "no");
    }
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "error: cannot open " << out_path << "\n";
        return 2;
      }
      out << "cell,x,y,gx,gy,gx_exact,gy_exact\n";
      char buf[160];
      for (std::size_t c = 0; c < g.values.size(); ++c) {
        std::snprintf(buf, sizeof buf,
                      "%zu,%.10e,%.10e,%.10e,%.10e,%.10e,%.10e\n", c,
                      metrics.cell_centroid[c].x, metrics.cell_centroid[c].y,
                      g.values[c].x, g.values[c].y, exact[c].x, exact[c].y);
        out << buf;
      }
    }
    if (!g.converged) {
      std::cerr << "error: implicit solve did not converge\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_study(const std::string& config_path) {
  fvgrad::StudyConfig cfg;
  try {
    cfg = fvgrad::parse_study_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const auto reports = fvgrad::convergence_study(
      cfg.scheme_ids, cfg.field_ids, cfg.family, cfg.levels, cfg.solver);
  const std::string csv = fvgrad::reports_to_csv(reports);
  std::ofstream out(cfg.output_path);
  if (!out) {
    std::cerr << "error: cannot open " << cfg.output_path << "\n";
    return 2;
  }
  out << csv;
  std::printf("wrote %s (%zu reports, %d levels)\n", cfg.output_path.c_str(),
              reports.size(), cfg.levels);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D unstructured finite-volume gradient reconstruction toolkit"};
  app.require_subcommand(1);

  // gen-mesh
  std::string size_spec, range_spec, tri_pattern, axis = "x", out_path;
  double perturb_a = 0.0, stretch_ratio = 1.0, warp_a = 0.0;
  unsigned seed = 1;
  auto* gen = app.add_subcommand("gen-mesh", "generate a mesh file");
  gen->add_option("--cartesian", size_spec, "grid size NXxNY")->required();
  gen->add_option("--range", range_spec, "domain rectangle x0,x1,y0,y1");
  gen->add_option("--perturb", perturb_a, "random vertex perturbation amplitude");
  gen->add_option("--seed", seed, "perturbation seed");
  gen->add_option("--triangulate", tri_pattern,
                  "split quads: diagonal | alternating");
  gen->add_option("--stretch", stretch_ratio, "geometric grading ratio");
  gen->add_option("--axis", axis, "stretch axis: x | y");
  gen->add_option("--warp", warp_a, "sinusoidal warp amplitude");
  gen->add_option("--out", out_path, "output mesh path")->required();

  // validate
  std::string mesh_path;
  auto* val = app.add_subcommand("validate", "check the geometric identities");
  val->add_option("mesh", mesh_path, "mesh file")->required();

  // reconstruct
  std::string rec_mesh, rec_scheme, rec_field, rec_out;
  fvgrad::SolverOptions solver;
  auto* rec = app.add_subcommand("reconstruct",
                                 "reconstruct gradients of one field");
  rec->add_option("mesh", rec_mesh, "mesh file")->required();
  rec->add_option("scheme", rec_scheme, "scheme id")->required();
  rec->add_option("field", rec_field, "field id")->required();
  rec->add_option("--tol", solver.tol, "implicit solver tolerance");
  rec->add_option("--max-iter", solver.max_iter, "implicit iteration cap");
  rec->add_option("--relax", solver.relax, "under-relaxation factor");
  rec->add_option("--out", rec_out, "per-cell gradient CSV path");

  // study
  std::string config_path;
  auto* study = app.add_subcommand("study", "run a convergence study");
  study->add_option("config", config_path, "study configuration file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      const fvgrad::Mesh mesh =
          parse_and_generate(size_spec, range_spec, perturb_a, seed,
                             tri_pattern, stretch_ratio, axis, warp_a);
      fvgrad::write_mesh(mesh, out_path);
      std::printf("wrote %s (%zu cells, %zu vertices)\n", out_path.c_str(),
                  mesh.n_cells(), mesh.vertices.size());
      return 0;
    }
    if (val->parsed()) return cmd_validate(mesh_path);
    if (rec->parsed()) {
      return cmd_reconstruct(rec_mesh, rec_scheme, rec_field, solver, rec_out);
    }
    if (study->parsed()) return cmd_study(config_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
