#pragma once

#include "bcsgap/gap_solver.hpp"
#include "bcsgap/thermo.hpp"

#include <vector>

namespace bcs {

/// sqrt(-8 pi Psi). Psi above `tol` throws NumericalError("positive Psi").
double hc(double psi_value, double tol = 1e-14);

/// -4 pi dPsi / sqrt(-8 pi Psi), for Psi < 0 strictly.
double hc_slope(double psi_value, double dpsi_value);

/// Closed-form slope at Tc from v: -sqrt(-(pi N0 / (2 Tc^2)) int v(2 Tc eta)^2 g(eta) d eta).
double slope_at_Tc(const VFunction& v, const PhysicalParams& p, double tol = kDefaultQuadTol);

/// Second derivative of Psi at Tc via the specific-heat jump, in the energy variable.
double psi_second_derivative_at_Tc(const VFunction& v, const PhysicalParams& p);

/// sqrt(8 pi N0 int (E - xi)^2 / E) for the converged T = 0 slice.
double hc_zero(const GapSolver& solver, const GapSlice& slice0);

struct HcRecord {
  double T = 0.0;
  double hc = 0.0;
  double dhc_dT = 0.0;
  bool linear_form = false;      // near-Tc closed form used
  bool outside_proven = false;   // tau3 < T < tau
};

struct HcCurve {
  std::vector<HcRecord> records;
  double hc0 = 0.0;
  double slope_at_Tc = 0.0;
  double Tc = 0.0;
  double tau3 = 0.0;
  double tau = 0.0;
};

/// Switch to the linear law when (Tc - T)/Tc falls below this.
inline constexpr double kLinearSwitch = 1.0 / 1024.0;

HcCurve hc_curve(const ThermoCurve& thermo, const VFunction& v, const PhysicalParams& p, double hc0,
                 double tau3, double tau);

struct LinearLawReport {
  double coefficient = 0.0;   // fitted d hc / d(1 - T/Tc)
  double intercept = 0.0;     // fitted hc at T = Tc
  double predicted = 0.0;     // Tc |slope_at_Tc|
  double relative_error = 0.0;
  double hc0 = 0.0;
  double coefficient_over_hc0 = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through hc over the window T/Tc in [lo, 1).
LinearLawReport linear_law_check(const HcCurve& curve, double lo = 0.97);

/// Temperatures for the linear-law window: `count` points on [lo Tc, Tc) ending at Tc (1 - 2^-10).
std::vector<double> linear_law_window(double Tc, double lo = 0.97, std::size_t count = 8);

}  // namespace bcs
