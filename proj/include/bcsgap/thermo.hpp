#pragma once

#include "bcsgap/gap_solver.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/quadrature.hpp"

#include <vector>

namespace bcs {

/// -(1/eta^2)(tanh(eta)/eta - sech^2(eta)) for eta > 0, -2/3 at eta = 0.
double g_weight(double eta);

/// The five pieces of the normal-state potential, in their natural order.
struct OmegaTerms {
  double shell_energy = 0.0;   // -2 N0 int_eps^hw xi
  double shell_thermal = 0.0;  // -4 N0 T int_eps^hw ln(1 + e^{-xi/T})
  double band_energy = 0.0;    // 2 int_{-mu}^{-hw} xi N(xi)
  double band_thermal = 0.0;   // -2 T int_{-mu}^{-hw} N(xi) ln(1 + e^{xi/T})
  double tail_thermal = 0.0;   // -2 T int_hw^inf N(xi) ln(1 + e^{-xi/T})
  double total() const { return shell_energy + shell_thermal + band_energy + band_thermal + tail_thermal; }
};

/// Term-by-term normal-state potential. T = 0 keeps only the energy terms.
OmegaTerms omega_normal_terms(double T, const PhysicalParams& p, const DosModel& dos,
                              double tol = kDefaultQuadTol);

/// Normal-state potential with each energy range integrated in one pass.
double omega_normal(double T, const PhysicalParams& p, const DosModel& dos, double tol = kDefaultQuadTol);

/// -T d^2(Omega_N)/dT^2 from the closed-form second-derivative integrands; 0 at T = 0.
double cv_normal(double T, const PhysicalParams& p, const DosModel& dos, double tol = kDefaultQuadTol);

/// The eta-substituted normal-state integral J at Tc; C_V^N(Tc) = 4 Tc J.
double j_integral(double Tc, const PhysicalParams& p, const DosModel& dos, double tol = kDefaultQuadTol);

/// Condensation potential of a converged slice.
double psi(const GapSolver& solver, const GapSlice& slice);

/// dPsi/dT given the slice and its temperature derivative (T > 0).
double psi_derivative(const GapSolver& solver, const GapSlice& slice, const std::vector<double>& du);

/// The limit v(x) of u(T, x)^2 / (Tc - T) as T rises to Tc.
struct VFunction {
  std::vector<double> x;
  std::vector<double> values;
  std::vector<double> fit_residual;  // per node RMS of the quotient fit
  double max_fit_residual = 0.0;
  double Tc = 0.0;
  int k_min = 3, k_max = 10;         // ladder T = Tc (1 - 2^-k)
};

/// Fits u^2/(Tc - T) = v + w (Tc - T) per node over the ladder k_min..k_max.
/// Throws NumericalError("positivity of v violated numerically") if some v <= 0.
VFunction extract_v(const GapSolver& solver, int k_min = 3, int k_max = 10);

/// F(x) = (int U(x, xi) sqrt(v(xi))/xi tanh(xi/2Tc) dxi)^2 on the grid nodes.
std::vector<double> v_map(const GapSolver& solver, const std::vector<double>& v, double Tc);

/// sup |v - F(v)| over the grid nodes.
double v_selfconsistency_residual(const GapSolver& solver, const VFunction& v);

/// Monotone cubic interpolant of v at energy xi.
double v_at(const VFunction& v, double xi);

/// int_{eps/2Tc}^{hw/2Tc} v(2 Tc eta)^2 g(eta) d eta (negative).
double v2g_integral(const VFunction& v, const PhysicalParams& p, double tol = kDefaultQuadTol);

/// Jump of the specific heat at Tc.
double delta_cv(const VFunction& v, const PhysicalParams& p, double tol = kDefaultQuadTol);

/// Jump divided by the normal specific heat at Tc, through J.
double cv_ratio(const VFunction& v, const PhysicalParams& p, const DosModel& dos,
                double tol = kDefaultQuadTol);

struct UniversalConstant {
  double value = 0.0;           // 1 / (A I)
  double sech_integral = 0.0;   // A = int_0^inf eta^2 sech^2(eta)
  double g_integral = 0.0;      // I = int_0^inf (-g)
  double g_tail = 0.0;          // analytic part of I beyond the cut
  double cut = 60.0;
};

UniversalConstant universal_constant(double tol = 1e-13);

struct ThermoRecord {
  double T = 0.0;
  double omega_n = 0.0;
  double psi = 0.0;
  double dpsi_dT = 0.0;
  double cv_normal = 0.0;
  double cv_super = 0.0;
};

struct ThermoCurve {
  std::vector<ThermoRecord> records;
  double Tc = 0.0;
};

/// Thermodynamics along a sweep. dPsi/dT uses the fixed-point tangent; C_V in the
/// superconducting phase is -T d^2(Omega_N + Psi)/dT^2 by second differences.
ThermoCurve thermo_curve(const GapSolver& solver, const GapSurface& surface, const DosModel& dos);

}  // namespace bcs
