#include <catch2/catch_amalgamated.hpp>

#include "fvgrad/verify.hpp"

using namespace fvgrad;

TEST_CASE("error norm hand cases") {
  SECTION("single cell with error vector (1,1)") {
    const MeshMetrics m = compute_metrics(build_cartesian(1, 1));
    const ErrorNorms n = error_norms({{1, 1}}, {{0, 0}}, m);
    CHECK(n.l1 == Catch::Approx(std::sqrt(2.0)));
    CHECK(n.l2 == Catch::Approx(std::sqrt(2.0)));
    CHECK(n.linf == Catch::Approx(std::sqrt(2.0)));
    CHECK(n.l2_x == Catch::Approx(1.0));
    CHECK(n.l2_y == Catch::Approx(1.0));
  }
  SECTION("two equal half-domain cells, errors 0 and sqrt(2)") {
    const MeshMetrics m = compute_metrics(build_cartesian(2, 1));
    const ErrorNorms n = error_norms({{0, 0}, {1, 1}}, {{0, 0}, {0, 0}}, m);
    CHECK(n.l1 == Catch::Approx(std::sqrt(2.0) / 2));
    CHECK(n.l2 == Catch::Approx(1.0));
    CHECK(n.linf == Catch::Approx(std::sqrt(2.0)));
  }
  SECTION("size mismatch is rejected") {
    const MeshMetrics m = compute_metrics(build_cartesian(1, 1));
    CHECK_THROWS_AS(error_norms({{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}, m),
                    std::invalid_argument);
  }
}

TEST_CASE("observed order") {
  CHECK(observed_order(2e-3, 1e-3, 0.2, 0.1).value() == Catch::Approx(1.0));
  CHECK(observed_order(4e-3, 1e-3, 0.2, 0.1).value() == Catch::Approx(2.0));
  CHECK_FALSE(observed_order(1e-14, 1e-14, 0.2, 0.1).has_value());
  CHECK_THROWS_AS(observed_order(1e-3, 1e-3, 0.1, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(-1e-3, 1e-3, 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("family meshes refine as expected") {
  MeshFamily fam;
  fam.generator = "triangulated";
  fam.nx = fam.ny = 4;
  CHECK(build_family_mesh(fam, 0).n_cells() == 32);
  CHECK(build_family_mesh(fam, 1).n_cells() == 128);
  fam.generator = "nosuch";
  CHECK_THROWS_AS(build_family_mesh(fam, 0), std::invalid_argument);
}

TEST_CASE("second-order scheme shows second order in a small study") {
  MeshFamily fam;  // cartesian 8x8 base
  const auto reports =
      convergence_study({"ulsq"}, {"trig"}, fam, 3);
  REQUIRE(reports.size() == 1);
  const auto& levels = reports[0].levels;
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].status == "ok");
  for (std::size_t l = 1; l < levels.size(); ++l) {
    REQUIRE(levels[l].order_l2.has_value());
    CHECK(*levels[l].order_l2 > 1.7);
    CHECK(levels[l].norms.l2 < levels[l - 1].norms.l2);
  }
}

TEST_CASE("linear fields report the exact sentinel at every level") {
  MeshFamily fam;
  fam.generator = "perturbed";
  fam.nx = fam.ny = 4;
  const auto reports = convergence_study({"ulsq"}, {"linear:1,2,3"}, fam, 2);
  REQUIRE(reports.size() == 1);
  for (const LevelResult& l : reports[0].levels) {
    CHECK(l.norms.l2 <= kExactErrorFloor);
  }
  CHECK(reports[0].levels[1].order_exact);
  CHECK_FALSE(reports[0].levels[1].order_l2.has_value());

  const std::string csv = reports_to_csv(reports);
  CHECK(csv.find(",exact,") != std::string::npos);
}

TEST_CASE("a one-level study carries no order column") {
  MeshFamily fam;
  fam.nx = fam.ny = 4;
  const auto reports = convergence_study({"gg:mean"}, {"trig"}, fam, 1);
  REQUIRE(reports[0].levels.size() == 1);
  CHECK_FALSE(reports[0].levels[0].order_l2.has_value());
  CHECK_FALSE(reports[0].levels[0].order_exact);
  CHECK_THROWS_AS(convergence_study({"gg:mean"}, {"trig"}, fam, 0),
                  std::invalid_argument);
}

TEST_CASE("study output is byte-deterministic") {
  MeshFamily fam;
  fam.generator = "perturbed";
  fam.nx = fam.ny = 4;
  fam.seed = 7;
  const auto a = convergence_study({"ulsq", "mgg"}, {"trig"}, fam, 2);
  const auto b = convergence_study({"ulsq", "mgg"}, {"trig"}, fam, 2);
  CHECK(reports_to_csv(a) == reports_to_csv(b));
  const std::string csv = reports_to_csv(a);
  CHECK(csv.rfind("scheme,field,mesh_family,level,h,n_cells,L1,L2,Linf,"
                  "order_L2,iters,residual,status\n", 0) == 0);
}

TEST_CASE("skew correction beats plain interpolation on skewed triangles") {
  // Amplitude 0.2: large enough for visible skew, small enough that the
  // skew-correction fixed point still converges on thin triangles.
  MeshFamily fam;
  fam.generator = "triangulated";
  fam.nx = fam.ny = 8;
  fam.amplitude = 0.2;
  fam.seed = 2;
  const auto reports =
      convergence_study({"gg:idw", "gg:skew"}, {"trig"}, fam, 3);
  REQUIRE(reports.size() == 2);
  const double idw = reports[0].levels.back().norms.l2;
  const double skew = reports[1].levels.back().norms.l2;
  CHECK(reports[1].levels.back().status == "ok");
  CHECK(skew < idw);
}
