#include <doctest.h>

#include "bcsgap/error.hpp"
#include "bcsgap/model.hpp"

#include <cmath>
#include <random>
#include <string>

using namespace bcs;

namespace {

PhysicalParams defaults() { return validate_params(PhysicalParams{}); }

std::string config_message(const PhysicalParams& p) {
  try {
    validate_params(p);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults validate unchanged") {
  const PhysicalParams p = defaults();
  CHECK(p.epsilon == 1e-3);
  CHECK(p.hbar_omega_d == 1.0);
  CHECK(p.mu == 20.0);
  CHECK(p.u1 == 0.25);
  CHECK(p.u2 == 0.35);
}

TEST_CASE("each violated ordering is named") {
  PhysicalParams p;
  p.epsilon = 0.0;
  CHECK(config_message(p).find("cutoff must be positive") != std::string::npos);
  p = PhysicalParams{};
  p.epsilon = 2.0;
  CHECK(config_message(p).find("epsilon < hbar_omega_d") != std::string::npos);
  p = PhysicalParams{};
  p.mu = 0.5;
  CHECK(config_message(p).find("hbar_omega_d < mu") != std::string::npos);
  p = PhysicalParams{};
  p.u1 = 0.4;
  CHECK(config_message(p).find("U1 < U2 violated") != std::string::npos);
  p = PhysicalParams{};
  p.u1 = -0.1;
  CHECK(config_message(p).find("U1 > 0") != std::string::npos);
  p = PhysicalParams{};
  p.n0 = 0.0;
  CHECK(config_message(p).find("n0 > 0") != std::string::npos);
}

TEST_CASE("constant kernel") {
  const auto p = defaults();
  Kernel k(ConstantPotential{0.3}, p);
  CHECK(k(0.5, 0.5) == 0.3);
  CHECK(k(p.epsilon, p.hbar_omega_d) == 0.3);
  CHECK(k.is_constant());
  CHECK(k.is_rank_one());
  CHECK(*k.factor(0.2) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-15));
}

TEST_CASE("constant outside the coupling bounds is rejected") {
  const auto p = defaults();
  CHECK_THROWS_AS(Kernel(ConstantPotential{0.4}, p), ConfigError);
  CHECK_THROWS_AS(Kernel(ConstantPotential{0.25}, p), ConfigError);
  try {
    Kernel(ConstantPotential{0.4}, p);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("u1 < U(x,xi) < u2") != std::string::npos);
  }
}

TEST_CASE("separable kernel is the product of its factors") {
  const auto p = defaults();
  auto nodes = uniform_nodes(p, 2);
  Kernel k(SeparablePotential{nodes, {std::sqrt(0.3), std::sqrt(0.3)}}, p);
  CHECK(k(0.1, 0.7) == doctest::Approx(0.3).epsilon(1e-14));

  auto n5 = uniform_nodes(p, 5);
  std::vector<double> f = {0.53, 0.54, 0.55, 0.56, 0.57};
  Kernel s(SeparablePotential{n5, f}, p);
  for (double x : {0.01, 0.3, 0.77})
    for (double y : {0.002, 0.5, 0.99}) CHECK(s(x, y) == doctest::Approx(s(y, x)).epsilon(1e-15));
  CHECK(s(n5[1], n5[3]) == doctest::Approx(0.54 * 0.56).epsilon(1e-14));
}

TEST_CASE("tabulated kernel interpolates bilinearly") {
  const auto p = defaults();
  auto nodes = uniform_nodes(p, 2);
  Kernel k(TabulatedPotential{nodes, {0.28, 0.30, 0.30, 0.32}}, p);
  const double mid = 0.5 * (p.epsilon + p.hbar_omega_d);
  CHECK(k(mid, mid) == doctest::Approx(0.30).epsilon(1e-14));
  CHECK(k(p.epsilon, p.epsilon) == doctest::Approx(0.28).epsilon(1e-14));
  CHECK_FALSE(k.is_rank_one());
  CHECK_FALSE(k.factor(0.5).has_value());
  CHECK_THROWS_AS(Kernel(TabulatedPotential{nodes, {0.3, 0.3, 0.3}}, p), ConfigError);
}

TEST_CASE("kernel samples stay inside the bounds") {
  const auto p = defaults();
  auto nodes = uniform_nodes(p, 9);
  std::vector<double> f(9), t(81);
  for (std::size_t i = 0; i < 9; ++i) f[i] = std::sqrt(0.27 + 0.06 * i / 8.0);
  for (std::size_t i = 0; i < 81; ++i) t[i] = 0.26 + 0.08 * static_cast<double>((i * 37) % 81) / 81.0;
  Kernel ks(SeparablePotential{nodes, f}, p);
  Kernel kt(TabulatedPotential{nodes, t}, p);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(p.epsilon, p.hbar_omega_d);
  for (int n = 0; n < 1000; ++n) {
    const double x = d(rng), y = d(rng);
    for (const Kernel* k : {&ks, &kt}) {
      const double u = (*k)(x, y);
      CHECK(u > p.u1);
      CHECK(u < p.u2);
    }
  }
}

TEST_CASE("kernel domain is the shell") {
  const auto p = defaults();
  Kernel k(ConstantPotential{0.3}, p);
  CHECK_THROWS_AS(k(0.5 * p.epsilon, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(k(0.5, 1.5), std::invalid_argument);
}

TEST_CASE("malformed separable and tabulated specs") {
  const auto p = defaults();
  CHECK_THROWS_AS(Kernel(SeparablePotential{{0.5, 0.6}, {0.55, 0.55}}, p), ConfigError);
  CHECK_THROWS_AS(Kernel(SeparablePotential{uniform_nodes(p, 3), {0.55, 0.55}}, p), ConfigError);
  CHECK_THROWS_AS(Kernel(SeparablePotential{uniform_nodes(p, 2), {-0.55, -0.55}}, p), ConfigError);
}

TEST_CASE("flat shell density of states") {
  const auto p = defaults();
  DosModel d(DosKind::FlatShell, p);
  for (double xi : {-p.mu, -1.0, 0.0, 0.5, 3.0, 100.0}) CHECK(d(xi) == p.n0);
  CHECK_THROWS_AS(d(-p.mu - 1.0), std::invalid_argument);
}

TEST_CASE("square-root band density of states") {
  const auto p = defaults();
  DosModel d(DosKind::SqrtBand, p);
  CHECK(d(0.5 * p.hbar_omega_d) == p.n0);
  CHECK(d(0.0) == doctest::Approx(p.n0 * std::sqrt(p.mu / (p.mu + p.epsilon))).epsilon(1e-14));
  CHECK(d(3.0 * p.mu) == doctest::Approx(2.0 * p.n0 * std::sqrt(p.mu / (p.mu + p.hbar_omega_d))).epsilon(1e-14));
  CHECK(d(-p.mu) == 0.0);
  CHECK_THROWS_AS(d(-p.mu - 1e-9), std::invalid_argument);
}

TEST_CASE("square-root band is continuous at the shell edges") {
  const auto p = defaults();
  DosModel d(DosKind::SqrtBand, p);
  const double h = 1e-6 * p.mu;
  for (double edge : {p.epsilon, p.hbar_omega_d}) {
    const double jump = std::abs(d(edge + h) - d(edge - h));
    CHECK(jump < 1e-5 * p.n0);
  }
  CHECK(d(p.epsilon) == p.n0);
  CHECK(d(p.hbar_omega_d) == p.n0);
}

TEST_CASE("dos names parse") {
  CHECK(parse_dos_kind("flat_shell") == DosKind::FlatShell);
  CHECK(parse_dos_kind("sqrt_band") == DosKind::SqrtBand);
  CHECK_THROWS_AS(parse_dos_kind("parabolic"), ConfigError);
}
