#include "bcsgap/critical_field.hpp"

#include "bcsgap/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bcs {

using std::numbers::pi;

double hc(double psi_value, double tol) {
  if (psi_value > tol) {
    std::ostringstream os;
    os << "positive Psi (" << psi_value << ")";
    throw NumericalError(os.str());
  }
  return psi_value >= 0.0 ? 0.0 : std::sqrt(-8.0 * pi * psi_value);
}

double hc_slope(double psi_value, double dpsi_value) {
  if (!(psi_value < 0.0)) throw std::invalid_argument("hc_slope: needs Psi < 0; use slope_at_Tc at Tc");
  return -4.0 * pi * dpsi_value / std::sqrt(-8.0 * pi * psi_value);
}

double slope_at_Tc(const VFunction& v, const PhysicalParams& p, double tol) {
  const double integral = v2g_integral(v, p, tol);
  return -std::sqrt(-(pi * p.n0 / (2.0 * v.Tc * v.Tc)) * integral);
}

double psi_second_derivative_at_Tc(const VFunction& v, const PhysicalParams& p) {
  // -N0/(16 Tc^3) int_eps^hw v(xi)^2 g(xi/2Tc) dxi, composite Gauss on the v grid.
  const CompositeRule rule = composite_gauss(v.x, 16);
  const std::vector<double> slopes = pchip_slopes(v.x, v.values);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const double xi = rule.points[q];
    const double val = pchip_eval(v.x, v.values, slopes, xi);
    s += rule.weights[q] * val * val * g_weight(xi / (2.0 * v.Tc));
  }
  return p.n0 / (16.0 * v.Tc * v.Tc * v.Tc) * s;
}

double hc_zero(const GapSolver& solver, const GapSlice& slice0) {
  const auto& rule = solver.rule();
  const std::vector<double> uq = solver.sample(slice0.values);
  double s = 0.0;
  for (std::size_t q = 0; q < uq.size(); ++q) {
    const double u2 = uq[q] * uq[q], xi = rule.points[q];
    const double e = std::sqrt(xi * xi + u2);
    const double d = u2 / (e + xi);
    s += rule.weights[q] * d * d / e;
  }
  return std::sqrt(8.0 * pi * solver.params().n0 * s);
}

HcCurve hc_curve(const ThermoCurve& thermo, const VFunction& v, const PhysicalParams& p, double hc0,
                 double tau3, double tau) {
  HcCurve c;
  c.Tc = thermo.Tc;
  c.hc0 = hc0;
  c.slope_at_Tc = slope_at_Tc(v, p);
  c.tau3 = tau3;
  c.tau = tau;
  for (const auto& r : thermo.records) {
    HcRecord h;
    h.T = r.T;
    h.outside_proven = r.T > tau3 && r.T < tau;
    const double rel = (c.Tc - r.T) / c.Tc;
    if (rel <= 0.0) {
      h.hc = 0.0;
      h.dhc_dT = 0.0;
    } else if (rel < kLinearSwitch) {
      h.linear_form = true;
      h.hc = c.Tc * std::abs(c.slope_at_Tc) * rel;
      h.dhc_dT = c.slope_at_Tc;
    } else {
      h.hc = hc(r.psi);
      h.dhc_dT = r.T == 0.0 ? 0.0 : hc_slope(r.psi, r.dpsi_dT);
    }
    c.records.push_back(h);
  }
  return c;
}

LinearLawReport linear_law_check(const HcCurve& curve, double lo) {
  LinearLawReport rep;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t m = 0;
  for (const auto& r : curve.records) {
    const double t = r.T / curve.Tc;
    if (t < lo || t >= 1.0) continue;
    const double x = 1.0 - t;
    sx += x;
    sy += r.hc;
    sxx += x * x;
    sxy += x * r.hc;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("linear_law_check: the curve does not resolve the fit window");
  const double md = static_cast<double>(m);
  const double det = md * sxx - sx * sx;
  rep.coefficient = (md * sxy - sx * sy) / det;
  rep.intercept = (sxx * sy - sx * sxy) / det;
  rep.predicted = curve.Tc * std::abs(curve.slope_at_Tc);
  rep.relative_error = std::abs(rep.coefficient - rep.predicted) / rep.predicted;
  rep.hc0 = curve.hc0;
  rep.coefficient_over_hc0 = curve.hc0 > 0.0 ? rep.coefficient / curve.hc0 : 0.0;
  rep.points = m;
  return rep;
}

std::vector<double> linear_law_window(double Tc, double lo, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linear_law_window: need two points");
  std::vector<double> t(count);
  const double hi = 1.0 - kLinearSwitch;
  for (std::size_t i = 0; i < count; ++i)
    t[i] = Tc * (lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return t;
}

}  // namespace bcs
