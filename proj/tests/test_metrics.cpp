#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "irsuav/metrics.hpp"
#include "irsuav/rng.hpp"

using irsuav::ChannelRealization;
using irsuav::ComplexScalar;
using irsuav::ComplexVector;
using irsuav::NetworkConfig;
using irsuav::PhaseShifts;
using irsuav::PowerAllocation;
using irsuav::RngStream;

namespace {

ChannelRealization random_realization(int clusters, int ues, int elements, RngStream& rng) {
  ChannelRealization real;
  for (int n = 0; n < clusters; ++n) {
    ComplexVector v(elements);
    for (auto& e : v) e = rng.cnormal();
    real.aa.push_back(v);
  }
  real.ag.resize(clusters);
  for (int n = 0; n < clusters; ++n)
    for (int m = 0; m < ues; ++m) {
      ComplexVector v(elements);
      for (auto& e : v) e = rng.cnormal();
      real.ag[n].push_back(v);
    }
  return real;
}

// Test-local straight-line recompute with separated real/imag doubles.
double oracle_sinr(const NetworkConfig& cfg, const ChannelRealization& real,
                   const PowerAllocation& powers, const PhaseShifts& phases, int n, int m) {
  double signal = 0.0, interference = 0.0;
  for (int i = 0; i < cfg.clusters; ++i) {
    double re = 0.0, im = 0.0;
    for (int k = 0; k < cfg.irs_elements; ++k) {
      const double hr = real.aa[i][k].real(), hi = real.aa[i][k].imag();
      const double gr = real.ag[n][m][k].real(), gi = real.ag[n][m][k].imag();
      const double c = std::cos(phases.theta()[k]), s = std::sin(phases.theta()[k]);
      const double ar = hr * c - hi * s, ai = hr * s + hi * c;
      re += ar * gr - ai * gi;
      im += ar * gi + ai * gr;
    }
    const double term = powers.p[i] * (re * re + im * im);
    if (i == n)
      signal = term;
    else
      interference += term;
  }
  return signal / (interference + cfg.noise_w);
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("phase shifts reduce into [0, 2*pi)") {
  const PhaseShifts p({2.0 * std::numbers::pi, -std::numbers::pi / 2, 7.0});
  CHECK(p.theta()[0] == doctest::Approx(0.0));
  CHECK(p.theta()[1] == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(p.theta()[2] == doctest::Approx(7.0 - 2.0 * std::numbers::pi));
  for (double t : p.theta()) {
    CHECK(t >= 0.0);
    CHECK(t < 2.0 * std::numbers::pi);
  }
}

TEST_CASE("effective channel") {
  SUBCASE("destructive interference cancels") {
    const ComplexVector ones{{1, 0}, {1, 0}};
    const ComplexScalar g = irsuav::effective_channel(ones, PhaseShifts({0.0, std::numbers::pi}), ones);
    CHECK(std::abs(g) < 1e-15);
  }
  SUBCASE("alignment attains the modulus bound") {
    RngStream rng(41);
    ComplexVector h_ai(8), h_ig(8);
    for (auto& e : h_ai) e = rng.cnormal();
    for (auto& e : h_ig) e = rng.cnormal();
    std::vector<double> theta(8);
    double bound = 0.0;
    for (int k = 0; k < 8; ++k) {
      theta[k] = -(std::arg(h_ai[k]) + std::arg(h_ig[k]));
      bound += std::abs(h_ai[k]) * std::abs(h_ig[k]);
    }
    const ComplexScalar g = irsuav::effective_channel(h_ai, PhaseShifts(theta), h_ig);
    CHECK(std::abs(g) == doctest::Approx(bound).epsilon(1e-12));
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> random_theta(8);
      for (auto& t : random_theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      CHECK(std::abs(irsuav::effective_channel(h_ai, PhaseShifts(random_theta), h_ig)) <=
            bound * (1.0 + 1e-12));
    }
  }
  SUBCASE("random instance matches a straight-line oracle") {
    RngStream rng(42);
    ComplexVector h_ai(8), h_ig(8);
    for (auto& e : h_ai) e = rng.cnormal();
    for (auto& e : h_ig) e = rng.cnormal();
    std::vector<double> theta(8);
    for (auto& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const ComplexScalar g = irsuav::effective_channel(h_ai, PhaseShifts(theta), h_ig);
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double hr = h_ai[k].real(), hi = h_ai[k].imag();
      const double gr = h_ig[k].real(), gi = h_ig[k].imag();
      const double c = std::cos(theta[k]), s = std::sin(theta[k]);
      const double ar = hr * c - hi * s, ai = hr * s + hi * c;
      re += ar * gr - ai * gi;
      im += ar * gi + ai * gr;
    }
    CHECK(g.real() == doctest::Approx(re).epsilon(1e-12));
    CHECK(g.imag() == doctest::Approx(im).epsilon(1e-12));
  }
  SUBCASE("length mismatch rejected") {
    const ComplexVector a(3, {1, 0}), b(2, {1, 0});
    CHECK_THROWS_AS(irsuav::effective_channel(a, PhaseShifts::identity(3), b),
                    std::invalid_argument);
  }
}

TEST_CASE("sinr") {
  NetworkConfig cfg;
  cfg.clusters = 1;
  cfg.ues_per_cluster = 1;
  cfg.irs_elements = 1;

  SUBCASE("single cluster reduces to signal over noise") {
    ChannelRealization real;
    real.aa = {{{1.0, 0.0}}};
    real.ag = {{{{1e-8, 0.0}}}};
    const PowerAllocation powers{{5.0}};
    const double gamma =
        irsuav::sinr(cfg, real, powers, PhaseShifts::identity(1), 0, 0);
    CHECK(gamma == doctest::Approx(5e-16 / cfg.noise_w).epsilon(1e-12));
    CHECK(gamma == doctest::Approx(12.56).epsilon(1e-3));
  }
  SUBCASE("zero transmit power gives zero sinr") {
    ChannelRealization real;
    real.aa = {{{1.0, 0.0}}};
    real.ag = {{{{1e-8, 0.0}}}};
    CHECK(irsuav::sinr(cfg, real, PowerAllocation{{0.0}}, PhaseShifts::identity(1), 0, 0) == 0.0);
  }
  SUBCASE("random instance matches the brute-force oracle") {
    NetworkConfig big;
    big.clusters = 3;
    big.ues_per_cluster = 2;
    big.irs_elements = 4;
    RngStream rng(43);
    const ChannelRealization real = random_realization(3, 2, 4, rng);
    PowerAllocation powers{{rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)}};
    std::vector<double> theta(4);
    for (auto& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const PhaseShifts phases(theta);
    for (int n = 0; n < 3; ++n)
      for (int m = 0; m < 2; ++m)
        CHECK(irsuav::sinr(big, real, powers, phases, n, m) ==
              doctest::Approx(oracle_sinr(big, real, powers, phases, n, m)).epsilon(1e-9));
  }
  SUBCASE("index out of range rejected") {
    ChannelRealization real;
    real.aa = {{{1.0, 0.0}}};
    real.ag = {{{{1e-8, 0.0}}}};
    CHECK_THROWS_AS(
        irsuav::sinr(cfg, real, PowerAllocation{{1.0}}, PhaseShifts::identity(1), 1, 0),
        std::out_of_range);
  }
}

TEST_CASE("rate") {
  NetworkConfig cfg;
  CHECK(irsuav::rate(cfg, 1.0) == doctest::Approx(1e6));
  CHECK(irsuav::rate(cfg, 0.0) == 0.0);
  CHECK(irsuav::rate(cfg, 3.0) == doctest::Approx(2e6));
  CHECK_THROWS_AS(irsuav::rate(cfg, -0.1), std::invalid_argument);
}

TEST_CASE("totals and energy efficiency") {
  NetworkConfig cfg;
  cfg.clusters = 3;
  cfg.ues_per_cluster = 2;
  cfg.irs_elements = 4;

  SUBCASE("total power sums transmit and fixed terms") {
    CHECK(irsuav::total_power(cfg, PowerAllocation{{5, 5, 5}}) == 19.0);
    CHECK(irsuav::total_power(cfg, PowerAllocation{{0, 0, 0}}) == 4.0);
    NetworkConfig single;
    single.clusters = 1;
    single.p_fixed_w = 0.0;
    CHECK(irsuav::total_power(single, PowerAllocation{{2.5}}) == 2.5);
  }
  SUBCASE("zero powers give zero rate and zero ee") {
    RngStream rng(44);
    const ChannelRealization real = random_realization(3, 2, 4, rng);
    const PowerAllocation powers{{0, 0, 0}};
    const PhaseShifts phases = PhaseShifts::identity(4);
    CHECK(irsuav::total_rate(cfg, real, powers, phases) == 0.0);
    CHECK(irsuav::energy_efficiency(cfg, real, powers, phases) == 0.0);
  }
  SUBCASE("symmetric clusters double the single rate") {
    NetworkConfig pair;
    pair.clusters = 1;
    pair.ues_per_cluster = 2;
    pair.irs_elements = 3;
    RngStream rng(45);
    ComplexVector shared(3);
    for (auto& e : shared) e = rng.cnormal();
    ChannelRealization real;
    ComplexVector aa(3);
    for (auto& e : aa) e = rng.cnormal();
    real.aa = {aa};
    real.ag = {{shared, shared}};
    const PowerAllocation powers{{2.0}};
    const PhaseShifts phases = PhaseShifts::identity(3);
    const double single = irsuav::rate(pair, irsuav::sinr(pair, real, powers, phases, 0, 0));
    CHECK(irsuav::total_rate(pair, real, powers, phases) == doctest::Approx(2.0 * single));
  }
  SUBCASE("report totals equal the left-to-right sums bit for bit") {
    RngStream rng(46);
    const ChannelRealization real = random_realization(3, 2, 4, rng);
    PowerAllocation powers{{rng.uniform(0, 5), rng.uniform(0, 5), rng.uniform(0, 5)}};
    std::vector<double> theta(4);
    for (auto& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto report = irsuav::compute_metrics(cfg, real, powers, PhaseShifts(theta));
    double rate_sum = 0.0;
    for (double r : report.rate) rate_sum += r;
    CHECK(report.total_rate == rate_sum);
    CHECK(report.ee == report.total_rate / report.total_power);
    CHECK(report.ee_norm == report.ee / cfg.bandwidth_hz);
    CHECK(irsuav::energy_efficiency(cfg, real, powers, PhaseShifts(theta)) ==
          doctest::Approx(report.ee).epsilon(1e-15));
  }
  SUBCASE("uniform power scaling never lowers sinr") {
    RngStream rng(47);
    const ChannelRealization real = random_realization(3, 2, 4, rng);
    std::vector<double> theta(4);
    for (auto& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const PhaseShifts phases(theta);
    PowerAllocation powers{{rng.uniform(0.1, 5), rng.uniform(0.1, 5), rng.uniform(0.1, 5)}};
    for (const double c : {1.5, 2.0, 5.0}) {
      PowerAllocation scaled = powers;
      for (double& p : scaled.p) p *= c;
      for (int n = 0; n < 3; ++n)
        for (int m = 0; m < 2; ++m)
          CHECK(irsuav::sinr(cfg, real, scaled, phases, n, m) >=
                irsuav::sinr(cfg, real, powers, phases, n, m) * (1.0 - 1e-12));
    }
  }
  SUBCASE("alignment phases dominate random draws for a single link") {
    NetworkConfig small;
    small.clusters = 1;
    small.ues_per_cluster = 1;
    small.irs_elements = 6;
    RngStream rng(48);
    const ChannelRealization real = random_realization(1, 1, 6, rng);
    std::vector<double> aligned(6);
    for (int k = 0; k < 6; ++k)
      aligned[k] = -(std::arg(real.aa[0][k]) + std::arg(real.ag[0][0][k]));
    const PowerAllocation powers{{3.0}};
    const double best = irsuav::energy_efficiency(small, real, powers, PhaseShifts(aligned));
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> theta(6);
      for (auto& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      CHECK(irsuav::energy_efficiency(small, real, powers, PhaseShifts(theta)) <=
            best * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("csv row layout") {
  NetworkConfig cfg;
  cfg.clusters = 2;
  cfg.ues_per_cluster = 2;
  cfg.irs_elements = 2;
  RngStream rng(49);
  const ChannelRealization real = random_realization(2, 2, 2, rng);
  const auto report =
      irsuav::compute_metrics(cfg, real, PowerAllocation{{1.0, 2.0}}, PhaseShifts::identity(2));
  const std::string header = irsuav::metrics_csv_header(cfg);
  const std::string row = irsuav::metrics_csv_row(report);
  const auto count_commas = [](const std::string& s) {
    return std::count(s.begin(), s.end(), ',');
  };
  CHECK(count_commas(header) == count_commas(row));
  CHECK(header.substr(0, 9) == "sinr_0_0,");
  CHECK(header.find("total_rate,total_power,ee,ee_norm") != std::string::npos);
}

TEST_SUITE_END();
