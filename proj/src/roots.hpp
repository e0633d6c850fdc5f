#pragma once

#include "bcsgap/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace bcs::detail {

/// Root of f on [a, b] with f(a), f(b) of opposite sign (TOMS 748: bracketing
/// with inverse-cubic polish). `bits` sets the relative tolerance 2^(1-bits).
template <class F>
double bracketed_root(F f, double a, double b, double fa, double fb, int bits = 46,
                      const char* what = "root") {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw NumericalError(std::string(what) + ": bracket does not change sign");
  std::uintmax_t max_iter = 300;
  const auto r = boost::math::tools::toms748_solve(
      f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(bits), max_iter);
  return 0.5 * (r.first + r.second);
}

/// Root with an absolute tolerance on the argument.
template <class F>
double bracketed_root_abs(F f, double a, double b, double fa, double fb, double abs_tol,
                          const char* what = "root") {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw NumericalError(std::string(what) + ": bracket does not change sign");
  std::uintmax_t max_iter = 300;
  auto done = [abs_tol](double lo, double hi) { return std::abs(hi - lo) <= abs_tol; };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, done, max_iter);
  return 0.5 * (r.first + r.second);
}

}  // namespace bcs::detail
