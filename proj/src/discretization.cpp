#include "bcsgap/discretization.hpp"

#include "bcsgap/error.hpp"
#include "roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcs {

EnergyGrid make_energy_grid(const PhysicalParams& p, std::size_t count) {
  if (count < 16) throw ConfigError("grid.energy_nodes must be at least 16");
  const double eps = p.epsilon, hw = p.hbar_omega_d;
  const std::size_t last = count - 1;
  const std::size_t m = last / 2;     // geometric steps
  const std::size_t k = last - m;     // uniform steps
  EnergyGrid grid;
  grid.nodes.resize(count);
  const double uniform_step = (hw - eps) / static_cast<double>(last);
  if (hw / eps < 50.0 || eps > uniform_step) {
    for (std::size_t i = 0; i < count; ++i) grid.nodes[i] = eps + uniform_step * static_cast<double>(i);
  } else {
    const double md = static_cast<double>(m), kd = static_cast<double>(k);
    // Ratio r with last geometric step equal to the uniform step that follows.
    auto mismatch = [&](double log_r) {
      const double r = std::exp(log_r);
      const double xs = eps * std::pow(r, md);
      return xs * (1.0 - 1.0 / r) - (hw - xs) / kd;
    };
    const double hi = std::log(hw / eps) / md;
    const double log_r = detail::bracketed_root(mismatch, 1e-12, hi, mismatch(1e-12), mismatch(hi), 50,
                                                "make_energy_grid");
    const double r = std::exp(log_r);
    for (std::size_t i = 0; i <= m; ++i) grid.nodes[i] = eps * std::pow(r, static_cast<double>(i));
    const double xs = grid.nodes[m];
    const double h = (hw - xs) / kd;
    for (std::size_t j = 1; j <= k; ++j) grid.nodes[m + j] = xs + h * static_cast<double>(j);
  }
  grid.nodes.front() = eps;
  grid.nodes.back() = hw;
  return grid;
}

PchipSampler::PchipSampler(const std::vector<double>& nodes, const CompositeRule& rule)
    : nodes_(nodes), cell_(rule.cell), t_(rule.local) {
  if (nodes.size() < 2) throw std::invalid_argument("PchipSampler: need two nodes");
}

double pchip_eval(const std::vector<double>& nodes, const std::vector<double>& y,
                  const std::vector<double>& slopes, double x) {
  if (x <= nodes.front()) return y.front();
  if (x >= nodes.back()) return y.back();
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t c = static_cast<std::size_t>(it - nodes.begin()) - 1;
  const double h = nodes[c + 1] - nodes[c];
  const double t = (x - nodes[c]) / h, t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y[c] + (t3 - 2 * t2 + t) * h * slopes[c] + (-2 * t3 + 3 * t2) * y[c + 1] +
         (t3 - t2) * h * slopes[c + 1];
}

}  // namespace bcs
