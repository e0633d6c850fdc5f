#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace bcs {

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

inline constexpr double kDefaultQuadTol = 1e-10;

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// Panels with the largest error estimate are bisected until the summed
/// estimate drops below max(tol, tol * |value|), or to the roundoff floor of the
/// summed panels. Throws QuadratureError
/// (carrying the best estimate) when the panel budget runs out.
QuadResult integrate(const Integrand& f, double a, double b, double tol = kDefaultQuadTol,
                     std::size_t max_panels = 4000);

/// Semi-infinite integral of f over [a, inf) for integrands that decay like
/// poly(xi) * exp(-xi / decay_scale). The range is cut at a + 60 * decay_scale.
QuadResult integrate_tail(const Integrand& f, double a, double decay_scale,
                          double tol = kDefaultQuadTol);

/// Finite-range integral of f over [a, b] for integrands concentrated within a
/// few decay_scale of a. Breakpoints at a + decay_scale * {1, 2, 4, ..., 32, 60}
/// keep the adaptive driver from missing a narrow peak.
QuadResult integrate_decaying(const Integrand& f, double a, double b, double decay_scale,
                              double tol = kDefaultQuadTol);

/// Tail cut used by integrate_tail, in units of the decay scale.
inline constexpr double kTailCut = 60.0;

/// Composite Gauss-Legendre rule over consecutive cells of `breaks`.
struct CompositeRule {
  std::vector<double> points;
  std::vector<double> weights;
  std::vector<std::size_t> cell;  // cell index of each point
  std::vector<double> local;      // position of each point inside its cell, in [0, 1]
};

/// `order` points per cell; supported orders are 4, 8 and 16.
CompositeRule composite_gauss(const std::vector<double>& breaks, int order = 8);

}  // namespace bcs
