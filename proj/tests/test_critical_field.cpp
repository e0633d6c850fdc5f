#include <doctest.h>

#include "bcsgap/critical_field.hpp"
#include "bcsgap/error.hpp"
#include "bcsgap/simple_gap.hpp"

#include <cmath>
#include <numbers>
#include <string>

using namespace bcs;

namespace {

constexpr double kPi = std::numbers::pi;

PhysicalParams defaults() { return validate_params(PhysicalParams{}); }

const GapSolver& constant_solver() {
  static const GapSolver s(Kernel(ConstantPotential{0.3}, defaults()), defaults());
  return s;
}

const VFunction& constant_v() {
  static const VFunction v = extract_v(constant_solver());
  return v;
}

struct Fixture {
  ThermoCurve thermo;
  HcCurve curve;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    const auto& s = constant_solver();
    const double Tc = s.find_Tc();
    std::vector<double> temps;
    for (int k = 0; k < 24; ++k) temps.push_back(Tc * k / 24.0);
    for (double t : linear_law_window(Tc)) temps.push_back(t);
    temps.push_back(Tc);
    temps.push_back(1.05 * Tc);
    const auto surf = s.sweep(temps);
    DosModel dos(DosKind::SqrtBand, s.params());
    Fixture out;
    out.thermo = thermo_curve(s, surf, dos);
    const double hc0 = hc_zero(s, surf.slices.front());
    out.curve = hc_curve(out.thermo, constant_v(), s.params(), hc0, surf.meta.tau3, surf.meta.tau);
    return out;
  }();
  return f;
}

}  // namespace

TEST_CASE("critical field from the condensation potential") {
  CHECK(hc(0.0) == 0.0);
  CHECK(hc(-1.0 / (8.0 * kPi)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hc(-2.0) > hc(-1.0));
  CHECK(hc(1e-15) == 0.0);
  try {
    hc(1e-6);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("positive Psi") != std::string::npos);
  }
}

TEST_CASE("critical-field slope") {
  CHECK(hc_slope(-1.0, 0.5) < 0.0);
  CHECK(hc_slope(-1.0, 0.5) == doctest::Approx(-4.0 * kPi * 0.5 / std::sqrt(8.0 * kPi)));
  CHECK(hc_slope(-1.0, 1.0) == doctest::Approx(2.0 * hc_slope(-1.0, 0.5)));
  CHECK(hc_slope(-4.0, 1.0) == doctest::Approx(hc_slope(-1.0, 1.0) / 2.0));
  CHECK_THROWS_AS(hc_slope(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("slope at Tc from v") {
  const auto p = defaults();
  const auto& v = constant_v();
  const double s = slope_at_Tc(v, p);
  CHECK(s < 0.0);
  const double d2 = psi_second_derivative_at_Tc(v, p);
  CHECK(d2 < 0.0);
  CHECK(s * s == doctest::Approx(-4.0 * kPi * d2).epsilon(1e-8));
  CHECK(delta_cv(v, p) == doctest::Approx(-v.Tc * d2).epsilon(1e-8));
}

TEST_CASE("zero-temperature field matches the condensation potential") {
  const auto& s = constant_solver();
  const auto sl = s.solve_at_T(0.0);
  CHECK(hc_zero(s, sl) == doctest::Approx(hc(psi(s, sl))).epsilon(1e-10));
}

TEST_CASE("small-gap asymptote of Hc(0)") {
  PhysicalParams p;
  p.u1 = 0.19998;
  p.u2 = 0.25;
  p.epsilon = 0.999 * std::exp(-1.0 / 0.2);
  p = validate_params(p);
  GapSolver s(Kernel(ConstantPotential{0.2}, p), p);
  const auto sl = s.solve_at_T(0.0);
  const double u0 = sl.values.front();
  CHECK(u0 < 0.1 * p.epsilon);
  const double quartic = integrate([&](double xi) { return std::pow(u0, 4) / (xi * xi * xi); }, p.epsilon,
                                   p.hbar_omega_d, 1e-13)
                             .value;
  const double asym = std::sqrt(2.0 * kPi * p.n0 * quartic);
  CHECK(hc_zero(s, sl) == doctest::Approx(asym).epsilon(0.02));
}

TEST_CASE("field curve shape") {
  const auto& f = fixture();
  const auto& c = f.curve;
  REQUIRE(c.records.size() == f.thermo.records.size());
  CHECK(c.hc0 > 0.0);
  CHECK(c.records.front().hc == doctest::Approx(c.hc0).epsilon(1e-10));
  CHECK(c.records.front().dhc_dT == 0.0);
  for (std::size_t k = 0; k < c.records.size(); ++k) {
    const auto& r = c.records[k];
    CHECK(r.hc >= 0.0);
    if (r.T >= c.Tc) {
      CHECK(r.hc == 0.0);
    } else if (r.T > 0.0) {
      CHECK(r.dhc_dT < 0.0);
    }
    if (k > 0 && r.T < c.Tc) CHECK(r.hc < c.records[k - 1].hc);
    CHECK(r.linear_form == (r.T < c.Tc && (c.Tc - r.T) / c.Tc < kLinearSwitch));
    CHECK(r.outside_proven == (r.T > c.tau3 && r.T < c.tau));
  }
}

TEST_CASE("slope formula agrees with differences of Hc") {
  const auto& s = constant_solver();
  const double Tc = s.find_Tc();
  for (double f : {0.2, 0.5, 0.8, 0.95}) {
    const double T = f * Tc;
    const auto sl = s.solve_at_T(T);
    const double ana = hc_slope(psi(s, sl), psi_derivative(s, sl, s.du_dT(sl)));
    double errs[2];
    int k = 0;
    for (double h : {2e-3 * T, 1e-3 * T}) {
      const double fd = (hc(psi(s, s.solve_at_T(T + h))) - hc(psi(s, s.solve_at_T(T - h)))) / (2.0 * h);
      errs[k++] = std::abs(fd - ana);
    }
    CHECK(errs[0] < 1e-3 * std::abs(ana));
    CHECK(errs[0] / errs[1] > 3.0);
    CHECK(errs[0] / errs[1] < 5.0);
  }
}

TEST_CASE("slope near Tc approaches the closed form") {
  const auto& s = constant_solver();
  const double Tc = s.find_Tc();
  const double closed = slope_at_Tc(constant_v(), s.params());
  double prev_err = 1e300;
  for (int k : {6, 8, 10}) {
    const double T = Tc * (1.0 - std::ldexp(1.0, -k));
    const auto sl = s.solve_at_T(T);
    const double sv = hc_slope(psi(s, sl), psi_derivative(s, sl, s.du_dT(sl)));
    const double err = std::abs(sv / closed - 1.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 0.01);
}

TEST_CASE("linear law near Tc") {
  const auto& f = fixture();
  const auto r = linear_law_check(f.curve);
  CHECK(r.points == 8);
  CHECK(r.relative_error < 0.02);
  CHECK(std::abs(r.intercept) < 1e-3 * r.hc0);
  CHECK(r.coefficient_over_hc0 == doctest::Approx(r.coefficient / r.hc0));
  CHECK(r.predicted == doctest::Approx(f.curve.Tc * std::abs(f.curve.slope_at_Tc)));
}

TEST_CASE("linear-law window") {
  const double Tc = 0.04;
  const auto w = linear_law_window(Tc);
  REQUIRE(w.size() == 8);
  CHECK(w.front() == doctest::Approx(0.97 * Tc));
  CHECK(w.back() == doctest::Approx(Tc * (1.0 - 1.0 / 1024.0)));
  for (std::size_t k = 1; k < w.size(); ++k) CHECK(w[k] > w[k - 1]);
}
