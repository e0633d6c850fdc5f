#pragma once

#include "bcsgap/discretization.hpp"
#include "bcsgap/model.hpp"
#include "bcsgap/quadrature.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace bcs {

/// Zero entries mean "use the documented default", resolved by GapSolver.
struct SolverOptions {
  double tol = 0.0;             // sup-norm fixed-point tolerance, default 1e-10 * Delta_2(0)
  std::size_t max_iter = 500000;
  double zero_threshold = 0.0;  // default 1e-8 * Delta_2(0)
  double t_tol = 0.0;           // default 1e-8 * tau_2
  std::size_t energy_nodes = 129;
};

struct GapSlice {
  double T = 0.0;
  std::vector<double> values;
  std::size_t iterations = 0;
  double final_residual = 0.0;
  bool damped = false;
  std::size_t newton_steps = 0;           // Newton finish after slow Picard contraction
  bool zero = false;                      // imposed zero branch (no nonzero solution exists)
  std::vector<double> residual_history;   // first iterations, for contraction ratios
  double sup() const;
};

struct SurfaceMeta {
  double tol = 0.0;
  double zero_threshold = 0.0;
  double t_tol = 0.0;
  double tau1 = 0.0, tau2 = 0.0, tau0 = 0.0, tau3 = 0.0;
  double tau = 0.0;  // lower edge of the near-Tc regime
};

struct GapSurface {
  std::vector<double> x;
  std::vector<GapSlice> slices;
  double Tc = 0.0;
  SurfaceMeta meta;
};

struct ContractionReport {
  double a = 0.0;
  double b = 0.0;
  double gamma = 0.0;
  bool gamma_feasible = false;  // 1 - U2 a > 0
  double alpha = 0.0;
  double tau = 0.0;
  double Tc = 0.0;
  double tau0 = 0.0, tau3 = 0.0;
  double a_argmax_T = 0.0;
  double alpha_argmax_T = 0.0;
  double alpha_argmax_x = 0.0;
  std::size_t alpha_argmax_index = 0;
};

/// Fixed-point solver for the discretised gap equation on one kernel.
class GapSolver {
public:
  GapSolver(Kernel kernel, const PhysicalParams& params, SolverOptions opts = {});

  const EnergyGrid& grid() const { return grid_; }
  const Kernel& kernel() const { return kernel_; }
  const PhysicalParams& params() const { return p_; }
  const SolverOptions& options() const { return opts_; }
  const CompositeRule& rule() const { return rule_; }

  /// Interpolated slice (and optional tangent) at the composite-rule points.
  std::vector<double> sample(const std::vector<double>& u) const { return sampler_.sample(u); }
  std::vector<Dual> sample(const std::vector<Dual>& u) const { return sampler_.sample(u); }

  double tau1() const { return tau1_; }
  double tau2() const { return tau2_; }
  double delta1(double T) const;
  double delta2(double T) const;

  /// (Au)(T, x_i) by the composite rule on the interpolated slice.
  std::vector<double> apply_A(double T, const std::vector<double>& u) const;

  /// Temperature derivative of Au for a slice u with node derivatives du (T > 0).
  std::vector<double> apply_dA_dT(double T, const std::vector<double>& u,
                                  const std::vector<double>& du) const;

  /// Jacobian of u -> Au at fixed T, n x n row-major.
  std::vector<double> jacobian(double T, const std::vector<double>& u) const;

  /// Perron root of the linearisation at u = 0; the zero solution is the only one iff <= 1.
  double perron_root(double T) const;

  /// Converged slice at T, seeded at Delta_2(T) unless a seed is given.
  GapSlice solve_at_T(double T, const std::optional<std::vector<double>>& seed = std::nullopt) const;

  /// du/dT at a converged slice from the linearised fixed-point equation.
  std::vector<double> du_dT(const GapSlice& slice) const;

  /// Transition temperature, bisected on [tau1, tau2]; cached after the first call.
  double find_Tc() const;

  /// Independent solves on an ascending grid within [0, tau2], Tc attached.
  GapSurface sweep(const std::vector<double>& temperatures) const;

  /// Constants a, b, gamma (low-temperature regime) and alpha on [tau, Tc].
  ContractionReport contraction_diagnostics(double tau) const;

  /// The bracketed alpha expression at temperature T for every grid node.
  std::vector<double> alpha_row(double T, double delta2_tau) const;

  /// Same, at one node.
  double alpha_term(double T, std::size_t node, double delta2_tau) const;

  SurfaceMeta metadata() const;

  /// sum_q U(x_i, xi_q) phi_w[q] at every node; phi_w carries the rule weights.
  std::vector<double> contract(const std::vector<double>& phi_w) const;

private:
  // Newton steps on u - Au from a close Picard iterate; empty if they stop converging.
  std::optional<std::pair<std::vector<double>, int>> newton_polish(double T, std::vector<double> u) const;

  double weighted_sum(std::size_t i, const std::vector<double>& phi) const;

  Kernel kernel_;
  PhysicalParams p_;
  SolverOptions opts_;
  EnergyGrid grid_;
  CompositeRule rule_;
  PchipSampler sampler_;
  bool rank_one_;
  std::vector<double> fx_, fq_;   // rank-one factors at nodes and quadrature points
  std::vector<double> kmat_;      // n x Q kernel values otherwise
  double tau1_ = 0.0, tau2_ = 0.0;
  mutable std::optional<double> tc_;
};

/// du/dT by central differences across a sweep (one-sided at the ends).
std::vector<std::vector<double>> surface_du_dT(const GapSurface& surface);

}  // namespace bcs
