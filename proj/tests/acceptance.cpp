// Acceptance suite: one PASS/FAIL line per criterion, details on indented lines.
#include "bcsgap/config.hpp"
#include "bcsgap/critical_field.hpp"
#include "bcsgap/run.hpp"
#include "bcsgap/simple_gap.hpp"
#include "bcsgap/thermo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <numbers>
#include <string>
#include <vector>

using namespace bcs;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

// Apery's series 5/2 sum (-1)^{k+1} / (k^3 C(2k, k)).
double zeta3() {
  double s = 0.0, binom = 1.0;
  for (int k = 1; k <= 40; ++k) {
    binom *= static_cast<double>(2 * (2 * k - 1)) / static_cast<double>(k);
    s += (k % 2 ? 1.0 : -1.0) / (static_cast<double>(k) * k * k * binom);
  }
  return 2.5 * s;
}

struct Check {
  std::string id;
  std::string title;
  bool pass = true;
  std::vector<std::string> lines;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    lines.push_back(std::string(ok ? "ok    " : "FAILED") + "  " + what);
  }
  void note(const std::string& what) { lines.push_back("note    " + what); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void run(const std::string& id, const std::string& title, double limit_s, const std::function<void(Check&)>& body) {
  Check c{id, title, true, {}};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0) c.require(secs < limit_s, fmt("runtime %.2f s (limit %.0f s)", secs, limit_s));
  else c.note(fmt("runtime %.2f s", secs));
  std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str());
  for (const auto& l : c.lines) std::printf("      %s\n", l.c_str());
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

double report_number(const Report& r, const char* key) {
  const ReportEntry* e = r.find(key);
  if (!e) throw std::runtime_error(std::string("report has no key ") + key);
  return e->number;
}

SeparablePotential wavy(const PhysicalParams& p) {
  auto nodes = uniform_nodes(p, 17);
  std::vector<double> f(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) f[i] = std::sqrt(0.3) * (1.0 + 0.06 * std::sin(3.0 * nodes[i]));
  return {nodes, f};
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  return t;
}

double max_ratio(const std::vector<double>& hist, double floor) {
  double m = 0.0;
  for (std::size_t k = 1; k < hist.size(); ++k)
    if (hist[k - 1] > floor && hist[k] > floor) m = std::max(m, hist[k] / hist[k - 1]);
  return m;
}

}  // namespace

int main() {
  const double universal_ref = 12.0 / (7.0 * zeta3());
  std::printf("reference 12/(7 zeta(3)) = %.15f (zeta(3) = %.15f from the Apery series)\n", universal_ref, zeta3());

  run("1", "universal constant 12/(7 zeta(3))", 1.0, [&](Check& c) {
    const Report r = universal_report();
    const double v = report_number(r, "universal");
    c.require(std::abs(v - universal_ref) <= 1e-6, fmt("universal = %.12f, |diff| = %.2e (<= 1e-6)", v, std::abs(v - universal_ref)));
  });

  const RunConfig cfg_small = parse_config("epsilon = 1e-6\npotential.type = constant\npotential.u0 = 0.3\n");
  Session small(cfg_small);

  run("2", "full-pipeline specific-heat ratio, U0 = 0.3", 120.0, [&](Check& c) {
    const Report r = small.ratio();
    const double ratio = report_number(r, "ratio");
    const double rel = ratio / universal_ref - 1.0;
    c.require(std::abs(rel) <= 0.02, fmt("ratio = %.6f, relative difference %+.3f%% (band 2%%)", ratio, 100.0 * rel));
    const double hw2 = report_number(r, "hbar_omega_over_2Tc"), e2 = report_number(r, "epsilon_over_2Tc");
    c.require(e2 <= 1e-4, fmt("epsilon/(2Tc) = %.3g (<= 1e-4)", e2));
    c.note(fmt("hbar_omega/(2Tc) = %.3f; >= 25 is unreachable at U0 = 0.3 (Tc ~ 1.134 hbar_omega e^{-1/U0})", hw2));
    c.note(fmt("flat-shell ratio %.6f, sqrt-band ratio %.6f, v fit residual %.2e", report_number(r, "ratio_flat_shell"),
               report_number(r, "ratio_sqrt_band"), report_number(r, "v_fit_residual")));
  });

  run("2b", "specific-heat ratio with both scale conditions met (U0 = 0.24)", 120.0, [&](Check& c) {
    Session s(parse_config("epsilon = 1e-6\nu1 = 0.2\nu2 = 0.3\npotential.type = constant\npotential.u0 = 0.24\n"));
    const Report r = s.ratio();
    const double ratio = report_number(r, "ratio");
    const double rel = ratio / universal_ref - 1.0;
    const double hw2 = report_number(r, "hbar_omega_over_2Tc"), e2 = report_number(r, "epsilon_over_2Tc");
    c.require(hw2 >= 25.0, fmt("hbar_omega/(2Tc) = %.3f (>= 25)", hw2));
    c.require(e2 <= 1e-4, fmt("epsilon/(2Tc) = %.3g (<= 1e-4)", e2));
    c.require(std::abs(rel) <= 0.02, fmt("ratio = %.6f, relative difference %+.3f%% (band 2%%)", ratio, 100.0 * rel));
  });

  run("3", "closed-form zero-temperature gap", 1.0, [&](Check& c) {
    double worst = 0.0;
    for (double U : {0.2, 0.3, 0.4})
      for (double eps : {1e-6, 1e-3}) {
        PhysicalParams p;
        p.epsilon = eps;
        p.u1 = 0.1;
        p.u2 = 0.5;
        p = validate_params(p);
        const double hw = p.hbar_omega_d;
        const double closed =
            std::sqrt((hw - eps * std::exp(1.0 / U)) * (hw - eps * std::exp(-1.0 / U))) / std::sinh(1.0 / U);
        const double numeric = solve_simple_gap(0.0, U, p);
        const double rel = std::abs(numeric / closed - 1.0);
        worst = std::max(worst, rel);
        c.require(rel <= 1e-8, fmt("U = %.1f eps = %.0e: numeric %.15f closed %.15f rel %.1e", U, eps, numeric, closed, rel));
      }
    c.note(fmt("worst relative difference %.2e", worst));
  });

  run("4", "z0, the root of 2/z = tanh z", 1.0, [&](Check& c) {
    const double z = solve_z0();
    const double res = std::abs(2.0 / z - std::tanh(z));
    c.require(std::abs(z - 2.07) <= 0.01, fmt("z0 = %.15f, |z0 - 2.07| = %.4f (<= 0.01)", z, std::abs(z - 2.07)));
    c.require(res <= 1e-12, fmt("residual %.1e (<= 1e-12)", res));
  });

  const PhysicalParams base = validate_params(PhysicalParams{});
  const GapSolver separable(Kernel(wavy(base), base), base);

  run("5", "sandwich and monotonicity, separable kernel, 33 x 129 surface", 60.0, [&](Check& c) {
    const Kernel& k = separable.kernel();
    c.note(fmt("kernel %s", k.describe().c_str()));
    const auto temps = linspace(0.0, separable.tau2(), 33);
    const GapSurface surf = separable.sweep(temps);
    double worst_low = 0.0, worst_high = 0.0, worst_rise = 0.0;
    for (std::size_t t = 0; t < temps.size(); ++t) {
      const double d1 = separable.delta1(temps[t]), d2 = separable.delta2(temps[t]);
      for (std::size_t i = 0; i < surf.x.size(); ++i) {
        const double u = surf.slices[t].values[i];
        worst_low = std::max(worst_low, d1 - u);
        worst_high = std::max(worst_high, u - d2);
        if (t > 0) worst_rise = std::max(worst_rise, u - surf.slices[t - 1].values[i]);
      }
    }
    c.require(worst_low <= 1e-8, fmt("max(Delta1 - u) = %.2e (<= 1e-8)", worst_low));
    c.require(worst_high <= 1e-8, fmt("max(u - Delta2) = %.2e (<= 1e-8)", worst_high));
    c.require(worst_rise <= 2.0 * separable.options().tol,
              fmt("largest increase between adjacent temperatures %.2e (<= 2 tol = %.2e)", worst_rise,
                  2.0 * separable.options().tol));
    c.note(fmt("Tc = %.12f in [tau1, tau2] = [%.6f, %.6f]", surf.Tc, separable.tau1(), separable.tau2()));
  });

  const GapSolver constant(Kernel(ConstantPotential{0.3}, base), base);

  run("6", "constant-kernel slices equal the simple-gap root", 60.0, [&](Check& c) {
    const double tau = solve_tau(0.3, base);
    const auto temps = linspace(0.0, constant.tau2(), 33);
    const GapSurface surf = constant.sweep(temps);
    double worst = 0.0;
    for (std::size_t t = 0; t < temps.size(); ++t) {
      const double d = solve_simple_gap(temps[t], 0.3, base, tau);
      for (double u : surf.slices[t].values) worst = std::max(worst, std::abs(u - d));
    }
    c.require(worst <= 1e-8, fmt("max |u - Delta| over 33 temperatures = %.2e (<= 1e-8)", worst));
    c.note(fmt("Tc = %.15f, simple-gap tau = %.15f", surf.Tc, tau));
  });

  run("7", "contraction near Tc", 300.0, [&](Check& c) {
    const GapSolver& s = separable;
    const double Tc = s.find_Tc();
    double best_alpha = std::numeric_limits<double>::infinity(), best_tau = 0.0;
    for (int k = 1; k <= 10; ++k) {
      const double tau = Tc * (1.0 - std::ldexp(1.0, -k));
      const ContractionReport r = s.contraction_diagnostics(tau);
      if (r.alpha < best_alpha) {
        best_alpha = r.alpha;
        best_tau = tau;
      }
    }
    c.require(best_alpha < 1.0, fmt("smallest alpha over tau = Tc(1 - 2^-k), k = 1..10: %.4g at tau = %.8f (needs < 1)",
                                    best_alpha, best_tau));
    const double tau = best_tau;
    const double tol = s.options().tol;
    double worst_ratio = 0.0, worst_seed = 0.0;
    for (double f : {0.0, 0.5, 0.9}) {
      const double T = tau + f * (Tc - tau);
      const GapSlice hi = s.solve_at_T(T);
      const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(hi.sup(), 1e-300);
      worst_ratio = std::max(worst_ratio, max_ratio(hi.residual_history, floor));
      const double low = std::max(s.delta1(T), 1e-2 * s.delta2(T));
      const GapSlice lo = s.solve_at_T(T, std::vector<double>(hi.values.size(), low));
      worst_ratio = std::max(worst_ratio, max_ratio(lo.residual_history, floor));
      for (std::size_t i = 0; i < hi.values.size(); ++i)
        worst_seed = std::max(worst_seed, std::abs(hi.values[i] - lo.values[i]));
    }
    c.require(worst_ratio <= best_alpha + 0.05,
              fmt("largest measured residual ratio on [tau, Tc) = %.6f (<= alpha + 0.05)", worst_ratio));
    c.require(worst_seed <= 2.0 * tol,
              fmt("seeds Delta2(T) and max(Delta1(T), Delta2(T)/100) agree to %.2e (<= 2 tol = %.2e)", worst_seed,
                  2.0 * tol));
  });

  run("8", "thermodynamic endpoints and dPsi/dT", 120.0, [&](Check& c) {
    const GapSolver& s = constant;
    const double Tc = s.find_Tc();
    const double psi0 = psi(s, s.solve_at_T(0.0));
    const double psic = psi(s, s.solve_at_T(Tc));
    c.require(std::abs(psic) <= 1e-8 * std::abs(psi0), fmt("|Psi(Tc)| = %.2e, |Psi(0)| = %.6e", std::abs(psic), std::abs(psi0)));
    const auto temps = linspace(0.0, Tc, 33);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < temps.size(); ++k) worst = std::max(worst, psi(s, s.solve_at_T(temps[k])));
    c.require(worst < 0.0, fmt("largest Psi on 32 temperatures below Tc = %.3e (< 0)", worst));
    const double T = 0.5 * Tc;
    const GapSlice sl = s.solve_at_T(T);
    const double ana = psi_derivative(s, sl, s.du_dT(sl));
    std::vector<double> errs;
    for (double h : {4e-3 * T, 2e-3 * T, 1e-3 * T}) {
      const double fd = (psi(s, s.solve_at_T(T + h)) - psi(s, s.solve_at_T(T - h))) / (2.0 * h);
      errs.push_back(std::abs(fd - ana));
    }
    const double r1 = errs[0] / errs[1], r2 = errs[1] / errs[2];
    c.require(errs[0] <= 1e-3 * std::abs(ana), fmt("dPsi/dT = %.10e, central-difference errors %.2e %.2e %.2e", ana,
                                                   errs[0], errs[1], errs[2]));
    c.require(r1 > 3.0 && r1 < 5.0 && r2 > 3.0 && r2 < 5.0,
              fmt("error ratios under step halving %.3f %.3f (second order: 4)", r1, r2));
  });

  run("9", "critical-field laws, U0 = 0.3, epsilon = 1e-6", 180.0, [&](Check& c) {
    const GapSolver& s = small.solver();
    const VFunction& v = small.vfunction();
    const PhysicalParams& p = small.config().params;
    const double Tc = s.find_Tc();
    std::vector<double> temps = linspace(0.0, Tc, 33);
    const auto [table, rep] = small.hc(temps);
    const std::size_t cols = table.columns.size();
    double hc_at_tc = -1.0;
    for (std::size_t r = 0; r < table.rows(); ++r)
      if (table.data[r * cols] == Tc) hc_at_tc = table.data[r * cols + 1];
    c.require(hc_at_tc == 0.0, fmt("(a) hc(Tc) = %.3g", hc_at_tc));

    const double rel = report_number(rep, "coefficient_relative_error");
    c.require(rel <= 0.02, fmt("(b) fitted coefficient %.8f vs Tc |slope_at_Tc| %.8f, relative error %.3f%% (<= 2%%)",
                               report_number(rep, "fitted_coefficient"), report_number(rep, "predicted_coefficient"),
                               100.0 * rel));
    const double ratio = report_number(rep, "coefficient_over_hc0");
    c.require(ratio >= 1.70 && ratio <= 1.78, fmt("(c) coefficient / hc0 = %.5f (in [1.70, 1.78])", ratio));

    const double hc0 = report_number(rep, "hc0");
    std::vector<double> quot;
    for (int k = 3; k <= 6; ++k) {
      const double h = Tc * std::ldexp(1.0, -k);
      quot.push_back(std::abs(hc(psi(s, s.solve_at_T(h))) - hc0) / h);
    }
    bool halves = true;
    std::string qs;
    for (std::size_t k = 0; k < quot.size(); ++k) {
      qs += fmt(" %.3e", quot[k]);
      if (k > 0) halves = halves && quot[k] <= 0.55 * quot[k - 1];
    }
    c.require(halves, fmt("(d) |hc(h) - hc0| / h for h = Tc 2^-3..2^-6:%s (each <= 0.55 x previous)", qs.c_str()));

    const double slope = slope_at_Tc(v, p);
    const double d2 = psi_second_derivative_at_Tc(v, p);
    const double e = std::abs(slope * slope / (4.0 * kPi * std::abs(d2)) - 1.0);
    c.require(e <= 1e-8, fmt("(e) slope_at_Tc^2 = %.12e, 4 pi |Psi''(Tc)| = %.12e, relative %.1e (<= 1e-8)",
                             slope * slope, 4.0 * kPi * std::abs(d2), e));
  });

  run("10", "quadrature oracles", 5.0, [&](Check& c) {
    const UniversalConstant u = universal_constant();
    const double a = kPi * kPi / 12.0;
    c.require(std::abs(u.sech_integral - a) <= 1e-10,
              fmt("(a) int eta^2 sech^2 = %.15f vs pi^2/12, diff %.1e (<= 1e-10)", u.sech_integral,
                  std::abs(u.sech_integral - a)));
    const double stated = 7.0 * zeta3() / 4.0;
    c.require(std::abs(u.g_integral - stated) <= 1e-6,
              fmt("(b) int (-g) = %.12f vs 7 zeta(3)/4 = %.12f, diff %.3e (<= 1e-6)", u.g_integral, stated,
                  std::abs(u.g_integral - stated)));
    const double truth = 7.0 * zeta3() / (kPi * kPi);
    c.note(fmt("int (-g) vs 7 zeta(3)/pi^2 = %.12f: diff %.1e", truth, std::abs(u.g_integral - truth)));
    c.require(g_weight(0.0) == -2.0 / 3.0, fmt("(c) g(0) = %.17g", g_weight(0.0)));
  });

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
