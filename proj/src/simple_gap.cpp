#include "bcsgap/simple_gap.hpp"

#include "bcsgap/error.hpp"
#include "bcsgap/quadrature.hpp"
#include "parallel.hpp"
#include "roots.hpp"

#include <cmath>

namespace bcs {

namespace {

constexpr double kRhsTol = 1e-14;

// int_eps^hw f(xi) dxi evaluated as int f(e^s) e^s ds, smooth across the cutoff layer.
template <class F>
double log_integral(F f, const PhysicalParams& p) {
  auto g = [&](double s) {
    const double xi = std::exp(s);
    return f(xi) * xi;
  };
  return integrate(g, std::log(p.epsilon), std::log(p.hbar_omega_d), kRhsTol).value;
}

}  // namespace

double solve_z0() {
  auto h = [](double z) { return 2.0 / z - std::tanh(z); };
  return detail::bracketed_root(h, 2.0, 2.1, h(2.0), h(2.1), 53, "solve_z0");
}

double delta_at_zero(double u_const, const PhysicalParams& p) {
  const double a = p.hbar_omega_d - p.epsilon * std::exp(1.0 / u_const);
  const double b = p.hbar_omega_d - p.epsilon * std::exp(-1.0 / u_const);
  if (!(a > 0.0)) throw NumericalError("cutoff too large for this coupling");
  return std::sqrt(a * b) / std::sinh(1.0 / u_const);
}

double simple_gap_rhs(double delta, double T, double u_const, const PhysicalParams& p) {
  const double d2 = delta * delta;
  if (T <= 0.0) return u_const * log_integral([&](double xi) { return 1.0 / std::sqrt(xi * xi + d2); }, p);
  return u_const * log_integral(
                       [&](double xi) {
                         const double e = std::sqrt(xi * xi + d2);
                         return std::tanh(e / (2.0 * T)) / e;
                       },
                       p);
}

double tau_rhs(double tau, double u_const, const PhysicalParams& p) {
  return simple_gap_rhs(0.0, tau, u_const, p);
}

double solve_tau(double u_const, const PhysicalParams& p) {
  if (!(u_const * std::log(p.hbar_omega_d / p.epsilon) > 1.0))
    throw NumericalError("no transition for this coupling/cutoff");
  auto f = [&](double log_tau) { return tau_rhs(std::exp(log_tau), u_const, p) - 1.0; };
  // f decreases in tau; grow the bracket geometrically around the weak-coupling guess.
  double lo = std::log(p.hbar_omega_d) - 1.0 / u_const;
  double hi = lo;
  double flo = f(lo), fhi = flo;
  while (flo <= 0.0) {
    hi = lo;
    fhi = flo;
    lo -= 1.0;
    flo = f(lo);
    if (lo < std::log(p.epsilon) - 40.0) throw NumericalError("solve_tau: lower bracket not found");
  }
  while (fhi >= 0.0) {
    lo = hi;
    flo = fhi;
    hi += 1.0;
    fhi = f(hi);
    if (hi > std::log(p.hbar_omega_d) + 40.0) throw NumericalError("solve_tau: upper bracket not found");
  }
  return std::exp(detail::bracketed_root(f, lo, hi, flo, fhi, 46, "solve_tau"));
}

double solve_simple_gap(double T, double u_const, const PhysicalParams& p, double tau) {
  if (T < 0.0) throw std::invalid_argument("solve_simple_gap: T must be nonnegative");
  if (T >= tau) return 0.0;
  auto f = [&](double d) { return simple_gap_rhs(d, T, u_const, p) - 1.0; };
  const double f0 = f(0.0);
  if (!(f0 > 0.0)) return 0.0;
  double hi = 10.0 * p.hbar_omega_d;
  double fhi = f(hi);
  while (fhi >= 0.0) {
    hi *= 2.0;
    fhi = f(hi);
    if (hi > 1e12 * p.hbar_omega_d) throw NumericalError("solve_simple_gap: no upper bracket");
  }
  return detail::bracketed_root(f, 0.0, hi, f0, fhi, 46, "solve_simple_gap");
}

double solve_simple_gap(double T, double u_const, const PhysicalParams& p) {
  return solve_simple_gap(T, u_const, p, solve_tau(u_const, p));
}

double solve_tau0(const PhysicalParams& p) {
  const double tau1 = solve_tau(p.u1, p);
  const double z0 = solve_z0();
  auto h = [&](double t) { return solve_simple_gap(t, p.u1, p, tau1) - 2.0 * z0 * t; };
  return detail::bracketed_root(h, 0.0, tau1, h(0.0), h(tau1), 46, "solve_tau0");
}

double tau3_from_tau0(double tau0) { return 0.5 * tau0; }

SimpleGapCurve simple_gap_curve(double u_const, const PhysicalParams& p,
                                const std::vector<double>& temperatures) {
  SimpleGapCurve curve;
  curve.coupling = u_const;
  curve.tau = solve_tau(u_const, p);
  curve.samples.resize(temperatures.size());
  detail::parallel_for(temperatures.size(), [&](std::size_t i) {
    const double T = temperatures[i];
    const double d = solve_simple_gap(T, u_const, p, curve.tau);
    const double r = d > 0.0 ? simple_gap_rhs(d, T, u_const, p) - 1.0 : 0.0;
    curve.samples[i] = {T, d, r};
  });
  return curve;
}

}  // namespace bcs
