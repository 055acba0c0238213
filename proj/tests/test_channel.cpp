#include <doctest.h>

#include <cmath>
#include <numbers>

#include "irsuav/channel.hpp"

using irsuav::ChannelParams;
using irsuav::ComplexVector;
using irsuav::RngStream;
using irsuav::Vec3;

TEST_SUITE_BEGIN("channel");

TEST_CASE("steering vector phase progression") {
  SUBCASE("zero cosine gives a flat vector") {
    const ComplexVector v = irsuav::steering_vector(0.0, 4, 0.5);
    for (const auto& e : v) {
      CHECK(e.real() == doctest::Approx(1.0));
      CHECK(e.imag() == doctest::Approx(0.0));
    }
  }
  SUBCASE("endfire flips alternate elements at half-wavelength spacing") {
    const ComplexVector v = irsuav::steering_vector(1.0, 2, 0.5);
    CHECK(v[0].real() == doctest::Approx(1.0));
    CHECK(v[1].real() == doctest::Approx(-1.0));
    CHECK(v[1].imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("cos 0.5 over three elements") {
    const ComplexVector v = irsuav::steering_vector(0.5, 3, 0.5);
    CHECK(std::arg(v[0]) == doctest::Approx(0.0));
    CHECK(std::arg(v[1]) == doctest::Approx(-std::numbers::pi / 2));
    // -pi and +pi are the same angle; compare the components.
    CHECK(v[2].real() == doctest::Approx(-1.0));
    CHECK(v[2].imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("unit magnitudes, exact leading element") {
    const ComplexVector v = irsuav::steering_vector(-0.73, 16, 0.5);
    CHECK(v[0] == irsuav::ComplexScalar{1.0, 0.0});
    for (const auto& e : v) CHECK(std::abs(e) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("rejects out-of-range cosines") {
    CHECK_THROWS_AS(irsuav::steering_vector(1.0001, 4, 0.5), std::invalid_argument);
  }
}

TEST_CASE("uav-irs channel magnitude follows the path loss") {
  ChannelParams p;
  p.beta0 = 1e-3;
  p.kappa1 = 2.0;
  p.elements = 8;

  SUBCASE("100 m link") {
    // 60-80-100 triangle from the origin.
    const ComplexVector v = irsuav::aa_channel({60, 0, 80}, {0, 0, 0}, p);
    for (const auto& e : v)
      CHECK(std::abs(e) == doctest::Approx(std::sqrt(1e-7)).epsilon(1e-12));
  }
  SUBCASE("single element has zero phase") {
    p.elements = 1;
    const ComplexVector v = irsuav::aa_channel({60, 0, 80}, {0, 0, 0}, p);
    REQUIRE(v.size() == 1);
    CHECK(v[0].imag() == 0.0);
    CHECK(v[0].real() == doctest::Approx(std::sqrt(1e-7)).epsilon(1e-12));
  }
  SUBCASE("default deployment geometry") {
    const ComplexVector v = irsuav::aa_channel({0, 0, 200}, {500, 500, 30}, p);
    const double expected = std::sqrt(1e-3 / 528900.0);
    for (const auto& e : v) CHECK(std::abs(e) == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("determinism") {
    const ComplexVector a = irsuav::aa_channel({0, 0, 200}, {500, 500, 30}, p);
    const ComplexVector b = irsuav::aa_channel({0, 0, 200}, {500, 500, 30}, p);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
  }
  SUBCASE("zero distance rejected") {
    CHECK_THROWS_AS(irsuav::aa_channel({1, 1, 1}, {1, 1, 1}, p), std::invalid_argument);
  }
}

TEST_CASE("irs-ue channel composes weighted LoS and NLoS parts") {
  ChannelParams p;
  p.beta0 = 1e-3;
  p.kappa2 = 2.2;
  p.elements = 4;
  const Vec3 irs{0, 0, 30};
  const Vec3 ue{120, 50, 0};
  const double d = irsuav::distance(irs, ue);
  const double gain = std::sqrt(p.beta0 * std::pow(d, -p.kappa2));

  SUBCASE("matches an explicit recomposition with a replayed noise stream") {
    p.rician_factor = 4.0;
    RngStream rng(31);
    RngStream replay = rng;
    const ComplexVector v = irsuav::ag_channel(irs, ue, p, rng);
    const ComplexVector los = irsuav::steering_vector(irsuav::aod_cosine(irs, ue), 4, 0.5);
    for (std::size_t k = 0; k < v.size(); ++k) {
      const irsuav::ComplexScalar expected =
          gain * (std::sqrt(0.8) * los[k] + std::sqrt(0.2) * replay.cnormal());
      CHECK(v[k] == expected);
    }
  }
  SUBCASE("zero Rician factor leaves pure scaled noise") {
    p.rician_factor = 0.0;
    RngStream rng(32);
    RngStream replay = rng;
    const ComplexVector v = irsuav::ag_channel(irs, ue, p, rng);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(v[k] == gain * replay.cnormal());
  }
  SUBCASE("second moment converges to the path-loss power") {
    p.rician_factor = 4.0;
    RngStream rng(33);
    double acc = 0.0;
    const int draws = 25000;
    for (int i = 0; i < draws; ++i) {
      const ComplexVector v = irsuav::ag_channel(irs, ue, p, rng);
      for (const auto& e : v) acc += std::norm(e);
    }
    const double mean_power = acc / (draws * 4.0);
    CHECK(mean_power == doctest::Approx(gain * gain).epsilon(0.02));
  }
  SUBCASE("zero distance rejected") {
    RngStream rng(34);
    CHECK_THROWS_AS(irsuav::ag_channel(irs, irs, p, rng), std::invalid_argument);
  }
}

TEST_CASE("channel parameter validation") {
  ChannelParams p;
  p.beta0 = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ChannelParams{};
  p.elements = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_SUITE_END();
