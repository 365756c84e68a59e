#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fvgrad/fields.hpp"
#include "fvgrad/generators.hpp"

using namespace fvgrad;

TEST_CASE("field catalog samples") {
  const MeshMetrics m = compute_metrics(build_cartesian(1, 1));
  const FieldSamples linear = sample(make_linear(1, 2, 3), m);
  CHECK(linear.cell_value[0] == Catch::Approx(3.5));  // 1 + 2*0.5 + 3*0.5

  const ManufacturedField trig = make_trig();
  CHECK(trig.value({0.25, 0.25}) == Catch::Approx(1.0));

  // Bottom face of the unit square: centroid (0.5, 0), outward normal (0,-1).
  const FieldSamples lin0 = sample(make_linear(0, 2, 3), m);
  bool found = false;
  for (std::size_t f = 0; f < m.n_faces(); ++f) {
    if (m.faces[f].is_boundary() && m.face[f].centroid.y == 0.0) {
      CHECK(m.face[f].normal.y == Catch::Approx(-1.0));
      CHECK(lin0.boundary_normal_deriv[f] == Catch::Approx(-3.0));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("exact gradients of cataloged fields") {
  const MeshMetrics m = compute_metrics(build_cartesian(2, 2));
  const auto g = exact_gradients(make_linear(0, 2, 3), m);
  for (const Vec2& v : g) {
    CHECK(v.x == Catch::Approx(2.0));
    CHECK(v.y == Catch::Approx(3.0));
  }
  CHECK(make_quadratic().gradient({1, 1}).x == Catch::Approx(3.0));
  CHECK(make_quadratic().gradient({1, 1}).y == Catch::Approx(3.0));
  CHECK(make_trig().gradient({0.5, 0.5}).x == Catch::Approx(0.0).margin(1e-12));
  CHECK(make_trig().gradient({0.5, 0.5}).y == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("analytic gradients agree with central differences") {
  // Self-consistency gate: step 1e-6, relative tolerance 1e-6, 100 points.
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  const double step = 1e-6;
  for (const ManufacturedField& f :
       {make_linear(1, 2, 3), make_quadratic(), make_trig(),
        make_exponential()}) {
    for (int k = 0; k < 100; ++k) {
      const Vec2 p{unit(rng), unit(rng)};
      const Vec2 g = f.gradient(p);
      const double fdx = (f.value({p.x + step, p.y}) -
                          f.value({p.x - step, p.y})) / (2 * step);
      const double fdy = (f.value({p.x, p.y + step}) -
                          f.value({p.x, p.y - step})) / (2 * step);
      const double scale = std::max(1.0, norm(g));
      CHECK(std::abs(g.x - fdx) <= 1e-6 * scale);
      CHECK(std::abs(g.y - fdy) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("field id parsing") {
  CHECK(parse_field("trig").name == "trig");
  CHECK(parse_field("quadratic").name == "quadratic");
  CHECK(parse_field("exp").name == "exp");
  const ManufacturedField lin = parse_field("linear:1,2,3");
  CHECK(lin.value({1, 1}) == Catch::Approx(6.0));
  CHECK_THROWS_AS(parse_field("nosuch"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field("linear:1,2"), std::invalid_argument);
}
