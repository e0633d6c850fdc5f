#pragma once

#include "bcsgap/model.hpp"
#include "bcsgap/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace bcs {

/// Ascending energies on [epsilon, hbar_omega_d], first and last node pinned.
struct EnergyGrid {
  std::vector<double> nodes;
  std::size_t size() const { return nodes.size(); }
};

/// Geometric nodes from epsilon for the first half, uniform up to hbar_omega_d
/// after that, with the step continuous at the junction. Uniform throughout when
/// hbar_omega_d / epsilon is too small for a geometric layer to help.
EnergyGrid make_energy_grid(const PhysicalParams& p, std::size_t count = 129);

/// Value plus one tangent component, enough to push du/dT through the interpolant.
struct Dual {
  double v = 0.0;
  double d = 0.0;
  Dual() = default;
  Dual(double value, double tangent = 0.0) : v(value), d(tangent) {}
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
inline Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

/// Monotone piecewise-cubic (Fritsch-Carlson) node slopes.
template <class T>
std::vector<T> pchip_slopes(const std::vector<double>& x, const std::vector<T>& y) {
  const std::size_t n = x.size();
  std::vector<T> d(n, T(0.0));
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / T(x[1] - x[0]);
    return d;
  }
  std::vector<double> h(n - 1);
  std::vector<T> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / T(h[k]);
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double a = value_of(delta[k - 1]), b = value_of(delta[k]);
    if (a == 0.0 || b == 0.0 || (a > 0.0) != (b > 0.0)) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = T(w1 + w2) / (T(w1) / delta[k - 1] + T(w2) / delta[k]);
  }
  auto end_slope = [](double h0, double h1, const T& m0, const T& m1) {
    T s = (T(2.0 * h0 + h1) * m0 - T(h0) * m1) / T(h0 + h1);
    const double sv = value_of(s), m0v = value_of(m0), m1v = value_of(m1);
    if ((sv > 0.0) != (m0v > 0.0) || sv == 0.0) return T(0.0);
    if ((m0v > 0.0) != (m1v > 0.0) && std::abs(sv) > std::abs(3.0 * m0v)) return T(3.0) * m0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

/// Evaluates the monotone cubic interpolant of node data at the points of a
/// composite rule built on the same nodes.
class PchipSampler {
public:
  PchipSampler(const std::vector<double>& nodes, const CompositeRule& rule);

  template <class T>
  std::vector<T> sample(const std::vector<T>& y) const {
    const std::vector<T> d = pchip_slopes(nodes_, y);
    std::vector<T> out(cell_.size());
    for (std::size_t q = 0; q < cell_.size(); ++q) {
      const std::size_t c = cell_[q];
      const double t = t_[q];
      const double h = nodes_[c + 1] - nodes_[c];
      const double t2 = t * t, t3 = t2 * t;
      const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
      const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
      out[q] = T(h00) * y[c] + T(h10 * h) * d[c] + T(h01) * y[c + 1] + T(h11 * h) * d[c + 1];
    }
    return out;
  }

private:
  std::vector<double> nodes_;
  std::vector<std::size_t> cell_;
  std::vector<double> t_;
};

/// Monotone cubic interpolant evaluated at arbitrary points inside the node range.
double pchip_eval(const std::vector<double>& nodes, const std::vector<double>& y,
                  const std::vector<double>& slopes, double x);

}  // namespace bcs
