#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "subheat/barriers.hpp"

using namespace subheat;

TEST_CASE("base point placement clears the box by a quarter unit") {
  Grid g({-0.5, -0.5}, {33, 33}, 0.03125);
  const BarrierPlacement pl = default_placement(g, 2);
  REQUIRE(pl.x0_prime.size() == 2);
  CHECK(pl.x0_prime[0] == doctest::Approx(-0.75));
  CHECK(pl.x0_prime[1] == doctest::Approx(0.0));
  CHECK(pl.eps == doctest::Approx(0.125));
  // Farthest corner (0.5, +-0.5): sqrt(1.25^2 + 0.5^2).
  CHECK(pl.r_prime == doctest::Approx(std::sqrt(1.8125)).epsilon(1e-12));
}

TEST_CASE("exponential barrier constants for the balanced gradient exponent") {
  // r + 1 = p collapses the slope to 1 and the constant to a clean maximum.
  const BarrierV1 b = recipe_v1(2.0, 3.0, 1.0, 2, 1.0, 0.5, 1.0, {-1.0, 0.0});
  CHECK(b.sigma == doctest::Approx(1.0));
  CHECK(b.k == doctest::Approx(std::sqrt(6.0)).epsilon(1e-12));
  CHECK(b.bound() == doctest::Approx(std::sqrt(6.0) * std::exp(2.0)).epsilon(1e-12));
}

TEST_CASE("exponential barrier slope for the strict gradient exponent") {
  const BarrierV1 b = recipe_v1(2.0, 2.0, 1.5, 2, 1.0, 0.5, 1.0, {-1.0, 0.0});
  // sigma = 1/((r - p + 1)(R' + 1)) = 1/(0.5 * 2).
  CHECK(b.sigma == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power barrier constant picks the regularization clause") {
  const BarrierV2 b = recipe_v2(2.0, 1.0, 2.0, 2, 1.0, 0.5, 1.0, {-1.0, 0.0});
  CHECK(b.sigma == doctest::Approx(2.0));
  CHECK(b.k == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(b.value(0.5) == doctest::Approx(16.0 / 2.0 * 0.25).epsilon(1e-12));
}

TEST_CASE("power barrier recipe rejects the balanced exponent pair") {
  CHECK_THROWS_WITH_AS(recipe_v2(2.0, 2.0, 2.0, 2, 1.0, 0.5, 1.0, {-1.0, 0.0}),
                       doctest::Contains("recipe_v3"), std::invalid_argument);
}

TEST_CASE("balanced-exponent barrier grows fast enough to dominate") {
  const BarrierV3 a = recipe_v3(2.0, 2.0, 2, 0.4, 0.5, 1.0, {-1.0, 0.0});
  CHECK(a.sigma == doctest::Approx(1.4 * std::sqrt(2.0)).epsilon(1e-12));
  const BarrierV3 z = recipe_v3(2.0, 2.0, 2, 0.0, 0.5, 1.0, {-1.0, 0.0});
  CHECK(z.sigma == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("two-family power barrier constant") {
  const BarrierV4 b = recipe_v4(2.0, {1.0}, {2.0}, 2, 1.0, 0.5, 1.0, {-1.0, 0.0});
  CHECK(b.sigma == doctest::Approx(2.0));
  CHECK(b.k == doctest::Approx(256.0).epsilon(1e-12));
}

TEST_CASE("recipes reject out-of-regime exponents") {
  CHECK_THROWS_AS(recipe_v1(2.0, 1.0, 1.5, 2, 1.0, 0.5, 1.0, {-1.0, 0.0}),
                  std::invalid_argument);  // needs q > r
  CHECK_THROWS_AS(recipe_v1(3.5, 2.0, 1.5, 2, 1.0, 0.5, 1.0, {-1.0, 0.0}),
                  std::invalid_argument);  // needs r + 1 >= p
  CHECK_THROWS_AS(recipe_v2(2.0, 3.0, 2.0, 2, 1.0, 0.5, 1.0, {-1.0, 0.0}),
                  std::invalid_argument);  // needs r > q
  CHECK_THROWS_AS(recipe_v4(2.0, {0.5}, {2.0}, 2, 1.0, 0.5, 1.0, {-1.0, 0.0}),
                  std::invalid_argument);  // needs q >= 1
  CHECK_THROWS_AS(recipe_v4(3.5, {1.0}, {2.0}, 2, 1.0, 0.5, 1.0, {-1.0, 0.0}),
                  std::invalid_argument);  // needs min s > p - 1
  CHECK_THROWS_AS(recipe_v2(2.0, 1.0, 2.0, 2, 1.0, 1.5, 1.0, {-1.0, 0.0}),
                  std::invalid_argument);  // eps must stay below 1
}

TEST_CASE("residuals reject radii outside the annulus") {
  const BarrierV2 b = recipe_v2(2.0, 1.0, 2.0, 2, 1.0, 0.5, 1.0, {-1.0, 0.0});
  CHECK_THROWS_AS(residual_np_v2(b, 2.0, 1.0, 2.0, 2, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(residual_np_v2(b, 2.0, 1.0, 2.0, 2, 2.0), std::invalid_argument);
  CHECK_NOTHROW(residual_np_v2(b, 2.0, 1.0, 2.0, 2, 0.5));
}

TEST_CASE("certified barriers have nonnegative residuals on their annulus") {
  Grid g({-0.5, -0.5}, {33, 33}, 0.03125);
  const BarrierPlacement pl = default_placement(g, 2);
  const auto axis = half_open_samples(pl.eps, pl.r_prime + 1.0, 256);

  const BarrierV1 b1 =
      recipe_v1(2.0, 2.0, 1.5, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  const SignCertificate c1 = certify_sign(
      "v1",
      [&](std::span<const double> pt) {
        return residual_mp_v1(b1, 2.0, 2.0, 1.5, pt[0]);
      },
      {axis}, SignExpectation::NonNegative);
  CHECK(c1.passed);
  CHECK(c1.min_value > 0.0);

  const BarrierV2 b2 =
      recipe_v2(2.0, 1.0, 2.0, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  const SignCertificate c2 = certify_sign(
      "v2",
      [&](std::span<const double> pt) {
        return residual_np_v2(b2, 2.0, 1.0, 2.0, 2, pt[0]);
      },
      {axis}, SignExpectation::NonNegative);
  CHECK(c2.passed);

  const BarrierV4 b4 =
      recipe_v4(2.0, {1.0}, {2.0}, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  const SignCertificate c4 = certify_sign(
      "v4",
      [&](std::span<const double> pt) { return residual_kp_v4(b4, 2.0, pt[0]); },
      {axis}, SignExpectation::NonNegative);
  CHECK(c4.passed);
}

TEST_CASE("halving the certified constant breaks the certificate") {
  // q = 3 makes the second recipe clause the binding one with exponent
  // q + 1 - p = 2, so a halved constant loses a factor 4 of slack against
  // the factor-2 safety margin and the residual genuinely goes negative.
  // At q = 2 the first clause binds and a halved constant still certifies.
  Grid g({-0.5, -0.5}, {33, 33}, 0.03125);
  const BarrierPlacement pl = default_placement(g, 2);
  const std::vector<double> axis = half_open_samples(pl.eps, pl.r_prime + 1.0, 256);
  BarrierV1 b = recipe_v1(2.0, 3.0, 1.5, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  auto residual = [&](std::span<const double> pt) {
    return residual_mp_v1(b, 2.0, 3.0, 1.5, pt[0]);
  };
  const SignCertificate full =
      certify_sign("v1-full", residual, {axis}, SignExpectation::NonNegative);
  CHECK(full.passed);
  b.k *= 0.5;
  const SignCertificate cert =
      certify_sign("v1-halved", residual, {axis}, SignExpectation::NonNegative);
  CHECK_FALSE(cert.passed);
  CHECK(cert.min_value < 0.0);
}

TEST_CASE("self-similar profile constants and support") {
  const BlowupProfile prof = blowup_profile(2.0, 3.0, 1.5, 2);
  CHECK(prof.sigma == doctest::Approx(2.0));
  CHECK(prof.k1 == doctest::Approx(0.5));
  CHECK(prof.k2 == doctest::Approx(0.25));
  CHECK(prof.a == doctest::Approx(4.0));
  CHECK(prof.delta == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(prof.r1 == doctest::Approx(std::sqrt(24.0)).epsilon(1e-12));
  CHECK(prof.ladder_index == 9);
  CHECK(prof.t0 == doctest::Approx(3.0 * (1.0 - std::ldexp(1.0, -9))).epsilon(1e-12));

  CHECK(prof.profile(0.0) == doctest::Approx(3.0));
  CHECK(prof.profile_slope(0.0) == 0.0);
  CHECK(std::fabs(prof.profile(prof.r1)) < 1e-12);
  CHECK(prof.profile(0.999 * prof.r1) > 0.0);

  // At the start time the rescaled amplitude is 3 * 2^(9/2).
  CHECK(prof.value(prof.t0, 0.0) ==
        doctest::Approx(3.0 * std::pow(2.0, 4.5)).epsilon(1e-12));
  CHECK(prof.support_radius(prof.t0) ==
        doctest::Approx(std::sqrt(24.0) * std::pow(2.0, -2.25)).epsilon(1e-12));
  // Amplitude diverges toward the horizon.
  CHECK(prof.value(prof.time_horizon() - 1e-9, 0.0) > 1e4);
}

TEST_CASE("profile start times only move toward the horizon up the ladder") {
  const BlowupProfile base = blowup_profile(2.0, 3.0, 1.5, 2);
  const BlowupProfile later = base.at_ladder(base.ladder_index + 3);
  CHECK(later.t0 > base.t0);
  CHECK(later.time_horizon() == doctest::Approx(base.time_horizon()));
  CHECK_THROWS_AS(base.at_ladder(0), std::invalid_argument);
  CHECK_THROWS_AS(base.at_ladder(61), std::invalid_argument);
  // Rungs below the certified one fail the start-time conditions.
  CHECK_THROWS_AS(base.at_ladder(1), std::invalid_argument);
}

TEST_CASE("profile residual stays nonpositive on the certified cylinder") {
  const BlowupProfile prof = blowup_profile(2.0, 3.0, 1.5, 2);
  const SignCertificate cert = certify_sign(
      "profile",
      [&](std::span<const double> pt) {
        return residual_np_profile(prof, pt[0], pt[1], 2);
      },
      {half_open_samples(prof.t0, prof.time_horizon(), 64),
       open_samples(0.0, prof.r1, 64)},
      SignExpectation::NonPositive);
  CHECK(cert.passed);
  CHECK(cert.max_value <= 0.0);

  const SignCertificate sink = certify_sign(
      "profile-state-sink",
      [&](std::span<const double> pt) {
        return residual_np_profile_state_sink(prof, 1.5, pt[0], pt[1], 2);
      },
      {half_open_samples(prof.t0, prof.time_horizon(), 64),
       open_samples(0.0, prof.r1, 64)},
      SignExpectation::NonPositive);
  CHECK(sink.passed);
}

TEST_CASE("sign certification walks the full tensor grid") {
  const SignCertificate cert = certify_sign(
      "sum",
      [](std::span<const double> pt) { return pt[0] + pt[1]; },
      {{0.0, 1.0, 2.0}, {0.5, 1.5}}, SignExpectation::NonNegative);
  CHECK(cert.passed);
  CHECK(cert.total_samples == 6);
  CHECK(cert.min_value == doctest::Approx(0.5));
  CHECK(cert.max_value == doctest::Approx(3.5));
  REQUIRE(cert.worst_point.size() == 2);
  CHECK(cert.worst_point[0] == doctest::Approx(0.0));
  CHECK(cert.worst_point[1] == doctest::Approx(0.5));
  CHECK(cert.low_resolution);  // both axes under 8 samples

  const SignCertificate neg = certify_sign(
      "shifted",
      [](std::span<const double> pt) { return pt[0] - 1.5; },
      {{0.0, 1.0, 2.0}}, SignExpectation::NonNegative);
  CHECK_FALSE(neg.passed);

  const SignCertificate bad = certify_sign(
      "nan",
      [](std::span<const double>) {
        return std::numeric_limits<double>::quiet_NaN();
      },
      {{0.0, 1.0}}, SignExpectation::NonPositive);
  CHECK_FALSE(bad.passed);
}

TEST_CASE("interval samplers respect their endpoint conventions") {
  const auto half = half_open_samples(0.0, 1.0, 4);
  REQUIRE(half.size() == 4);
  CHECK(half.front() == 0.0);
  CHECK(half.back() == doctest::Approx(0.75));
  const auto open = open_samples(0.0, 1.0, 4);
  REQUIRE(open.size() == 4);
  CHECK(open.front() == doctest::Approx(0.2));
  CHECK(open.back() == doctest::Approx(0.8));
  CHECK_THROWS_AS(half_open_samples(1.0, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(open_samples(0.0, 1.0, 0), std::invalid_argument);
}
