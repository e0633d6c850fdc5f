#include "bcsgap/quadrature.hpp"

#include "bcsgap/error.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace bcs {

namespace {

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, double tol, std::size_t max_panels) {
  if (!(a <= b)) throw std::invalid_argument("integrate: need a <= b");
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: need tol > 0");
  QuadResult out;
  if (a == b) return out;

  auto counted = [&](double x) {
    ++out.evaluations;
    return f(x);
  };
  auto panel = [&](double lo, double hi) {
    double err = 0.0;
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(counted, lo, hi, 0, 0.0, &err);
    return Panel{lo, hi, v, err};
  };

  std::priority_queue<Panel> heap;
  Panel first = panel(a, b);
  double total = first.value;
  double total_err = first.err;
  heap.push(first);
  std::size_t panels = 1;

  double abs_sum = std::abs(first.value);
  // Estimates below the roundoff floor of the summed panels cannot improve further.
  auto target = [&] {
    return std::max({tol, tol * std::abs(total), 64.0 * std::numeric_limits<double>::epsilon() * abs_sum});
  };
  while (total_err > target()) {
    if (!std::isfinite(total)) throw NumericalError("integrate: non-finite integrand value");
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Panels that cannot be split further hold their roundoff-level error.
    if (panels >= max_panels || !(mid > worst.a && mid < worst.b)) {
      std::ostringstream os;
      os << "integrate: no convergence on [" << a << ", " << b << "] after " << panels
         << " panels (estimate " << total << ", error " << total_err << ")";
      throw QuadratureError(os.str(), total, total_err);
    }
    heap.pop();
    Panel left = panel(worst.a, mid);
    Panel right = panel(mid, worst.b);
    total += left.value + right.value - worst.value;
    abs_sum += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
    total_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to drop the running-update drift.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().err;
    heap.pop();
  }
  out.value = total;
  out.err_estimate = total_err;
  return out;
}

QuadResult integrate_tail(const Integrand& f, double a, double decay_scale, double tol) {
  if (!(decay_scale > 0.0)) throw std::invalid_argument("integrate_tail: decay_scale must be positive");
  // Split into unit-scale blocks so the adaptive driver starts near the decay length.
  QuadResult out;
  const int blocks = 12;
  const double width = kTailCut * decay_scale / blocks;
  for (int k = 0; k < blocks; ++k) {
    const QuadResult part = integrate(f, a + k * width, a + (k + 1) * width, tol / blocks);
    out.value += part.value;
    out.err_estimate += part.err_estimate;
    out.evaluations += part.evaluations;
  }
  return out;
}

QuadResult integrate_decaying(const Integrand& f, double a, double b, double decay_scale, double tol) {
  if (!(decay_scale > 0.0)) throw std::invalid_argument("integrate_decaying: decay_scale must be positive");
  if (!(a <= b)) throw std::invalid_argument("integrate_decaying: need a <= b");
  std::vector<double> breaks = {a};
  for (double m : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, kTailCut}) {
    const double x = a + m * decay_scale;
    if (x >= b) break;
    breaks.push_back(x);
  }
  breaks.push_back(b);
  QuadResult out;
  const double per = tol / static_cast<double>(breaks.size() - 1);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const QuadResult part = integrate(f, breaks[k], breaks[k + 1], per);
    out.value += part.value;
    out.err_estimate += part.err_estimate;
    out.evaluations += part.evaluations;
  }
  return out;
}

CompositeRule composite_gauss(const std::vector<double>& breaks, int order) {
  std::vector<double> x, w;
  auto expand = [&](const auto& absc, const auto& wts) {
    // Boost stores the non-negative half of the symmetric rule.
    for (std::size_t i = 0; i < absc.size(); ++i) {
      if (absc[i] == 0.0) {
        x.push_back(0.0);
        w.push_back(wts[i]);
      } else {
        x.push_back(-absc[i]);
        w.push_back(wts[i]);
        x.push_back(absc[i]);
        w.push_back(wts[i]);
      }
    }
  };
  switch (order) {
    case 4: expand(boost::math::quadrature::gauss<double, 4>::abscissa(),
                   boost::math::quadrature::gauss<double, 4>::weights()); break;
    case 8: expand(boost::math::quadrature::gauss<double, 8>::abscissa(),
                   boost::math::quadrature::gauss<double, 8>::weights()); break;
    case 16: expand(boost::math::quadrature::gauss<double, 16>::abscissa(),
                    boost::math::quadrature::gauss<double, 16>::weights()); break;
    default: throw std::invalid_argument("composite_gauss: order must be 4, 8 or 16");
  }
  CompositeRule rule;
  for (std::size_t c = 0; c + 1 < breaks.size(); ++c) {
    const double lo = breaks[c], hi = breaks[c + 1];
    const double half = 0.5 * (hi - lo);
    for (std::size_t k = 0; k < x.size(); ++k) {
      rule.points.push_back(lo + half * (x[k] + 1.0));
      rule.weights.push_back(half * w[k]);
      rule.cell.push_back(c);
      rule.local.push_back(0.5 * (x[k] + 1.0));
    }
  }
  return rule;
}

}  // namespace bcs
