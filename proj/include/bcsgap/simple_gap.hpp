#pragma once

#include "bcsgap/model.hpp"

#include <vector>

namespace bcs {

/// Positive root of 2/z = tanh z.
double solve_z0();

/// Closed-form zero-temperature gap of the constant-coupling equation.
/// Throws NumericalError("cutoff too large for this coupling") when eps*e^{1/U} >= hbar_omega_d.
double delta_at_zero(double u_const, const PhysicalParams& p);

/// U * int_eps^hw tanh(E/2T)/E dxi with E = sqrt(xi^2 + delta^2); T = 0 drops the tanh.
double simple_gap_rhs(double delta, double T, double u_const, const PhysicalParams& p);

/// U * int_eps^hw tanh(xi/2tau)/xi dxi.
double tau_rhs(double tau, double u_const, const PhysicalParams& p);

/// Temperature where the constant-coupling gap closes.
/// Throws NumericalError("no transition for this coupling/cutoff") if U ln(hw/eps) <= 1.
double solve_tau(double u_const, const PhysicalParams& p);

/// Gap of the constant-coupling equation at T; exactly 0 for T >= tau.
double solve_simple_gap(double T, double u_const, const PhysicalParams& p);

/// Same, reusing a known tau for the zero branch.
double solve_simple_gap(double T, double u_const, const PhysicalParams& p, double tau);

/// The crossing Delta_1(tau0) = 2 z0 tau0 on (0, tau1).
double solve_tau0(const PhysicalParams& p);

/// Low-temperature regime boundary, fixed at tau0 / 2.
double tau3_from_tau0(double tau0);

struct SimpleGapSample {
  double T;
  double delta;
  double residual;  // U * rhs - 1 at the returned delta (0 on the zero branch)
};

struct SimpleGapCurve {
  double coupling = 0.0;
  double tau = 0.0;
  std::vector<SimpleGapSample> samples;
};

/// Delta(T) on the given temperatures, solved concurrently, stored in input order.
SimpleGapCurve simple_gap_curve(double u_const, const PhysicalParams& p,
                                const std::vector<double>& temperatures);

}  // namespace bcs
