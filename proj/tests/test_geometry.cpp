#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "subheat/geometry.hpp"
#include "subheat/group.hpp"

using namespace subheat;

namespace {

double max_error(const Field& got, const Grid& g,
                 double (*exact)(std::span<const double>)) {
  double err = 0.0;
  for_each_node(g, [&](std::size_t i, std::span<const int>,
                       std::span<const double> x) {
    err = std::max(err, std::fabs(got[i] - exact(x)));
  });
  return err;
}

}  // namespace

TEST_CASE("axis derivatives are exact on quadratics, boundary rows included") {
  Grid g({0.0, 0.0}, {9, 9}, 0.125);
  Field f = Field::sample(g, [](std::span<const double> x) {
    return x[0] * x[0] + 3.0 * x[0] * x[1] + 2.0 * x[1] * x[1];
  });
  CHECK(max_error(derivative_along(f, 0), g, [](std::span<const double> x) {
          return 2.0 * x[0] + 3.0 * x[1];
        }) < 1e-12);
  CHECK(max_error(derivative_along(f, 1), g, [](std::span<const double> x) {
          return 3.0 * x[0] + 4.0 * x[1];
        }) < 1e-12);
}

TEST_CASE("horizontal fields pick up their linear correction terms") {
  const GroupSpec h1 = make_heisenberg();
  Grid g({-0.5, -0.5, -0.5}, {9, 9, 9}, 0.125);
  Field f = Field::sample(g, [](std::span<const double> x) {
    return x[2] * x[0];  // X1 f = x3 - (x2/2) x1,  X2 f = (x1/2) x1
  });
  CHECK(max_error(apply_vector_field(h1, f, 0), g,
                  [](std::span<const double> x) {
                    return x[2] - 0.5 * x[1] * x[0];
                  }) < 1e-12);
  CHECK(max_error(apply_vector_field(h1, f, 1), g,
                  [](std::span<const double> x) { return 0.5 * x[0] * x[0]; }) <
        1e-12);
}

TEST_CASE("the two horizontal fields commute into the vertical derivative") {
  const GroupSpec h1 = make_heisenberg();
  Grid g({-0.5, -0.5, -0.5}, {9, 9, 9}, 0.125);
  Field f = Field::sample(g, [](std::span<const double> x) {
    return x[2] * x[2] + x[0] * x[1];
  });
  const Field x1x2 = apply_vector_field(h1, apply_vector_field(h1, f, 1), 0);
  const Field x2x1 = apply_vector_field(h1, apply_vector_field(h1, f, 0), 1);
  double err = 0.0;
  for_each_node(g, [&](std::size_t i, std::span<const int>,
                       std::span<const double> x) {
    err = std::max(err, std::fabs(x1x2[i] - x2x1[i] - 2.0 * x[2]));
  });
  CHECK(err < 1e-12);
}

TEST_CASE("gradient, divergence and norm compose as expected") {
  const GroupSpec e2 = make_euclidean(2);
  Grid g({-0.5, -0.5}, {9, 9}, 0.125);
  Field f = Field::sample(g, [](std::span<const double> x) {
    return 0.5 * (x[0] * x[0] + x[1] * x[1]);
  });
  auto grad = horizontal_gradient(e2, f);
  REQUIRE(grad.size() == 2);
  CHECK(max_error(grad[0], g, [](std::span<const double> x) { return x[0]; }) <
        1e-12);

  const Field div = horizontal_divergence(e2, grad);
  double err = 0.0;
  for (std::size_t i = 0; i < div.size(); ++i)
    err = std::max(err, std::fabs(div[i] - 2.0));
  CHECK(err < 1e-12);

  const Field norm = pointwise_norm({Field(g, 3.0), Field(g, -4.0)});
  CHECK(norm[0] == doctest::Approx(5.0));
}

TEST_CASE("vertical axis carries no horizontal derivative weight") {
  const GroupSpec h1 = make_heisenberg();
  Grid g({-0.5, -0.5, -0.5}, {9, 9, 9}, 0.125);
  // A function of the vertical coordinate alone: X_j f has no partial in x_j,
  // only the correction terms survive.
  Field f = Field::sample(g, [](std::span<const double> x) { return x[2]; });
  CHECK(max_error(apply_vector_field(h1, f, 0), g,
                  [](std::span<const double> x) { return -0.5 * x[1]; }) < 1e-12);
  CHECK(max_error(apply_vector_field(h1, f, 1), g,
                  [](std::span<const double> x) { return 0.5 * x[0]; }) < 1e-12);
}

TEST_CASE("malformed group descriptions are rejected") {
  CHECK_THROWS_AS(make_euclidean(0), std::invalid_argument);
  CHECK_NOTHROW(make_heisenberg().validate());

  GroupSpec bad = make_heisenberg();
  bad.field_terms[0][0].derivative_axis = 0;  // corrections must act upward
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  GroupSpec mismatch = make_euclidean(2);
  mismatch.stratum_sizes = {1, 1};
  CHECK_THROWS_AS(mismatch.validate(), std::invalid_argument);
}
