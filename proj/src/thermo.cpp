#include "bcsgap/thermo.hpp"

#include "bcsgap/discretization.hpp"
#include "bcsgap/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcs {

namespace {

double sech2(double z) {
  z = std::abs(z);
  if (z > 350.0) return 0.0;
  const double c = std::cosh(z);
  return 1.0 / (c * c);
}

// 1 / (1 + e^z) without overflow.
double fermi(double z) {
  if (z > 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

// 1 - tanh(y) for y >= 0, free of cancellation.
double one_minus_tanh(double y) {
  const double e = std::exp(-2.0 * y);
  return 2.0 * e / (1.0 + e);
}

double integrate_cells(const std::vector<double>& breaks, const Integrand& f, double tol) {
  double s = 0.0;
  const double per = tol / static_cast<double>(breaks.size());
  for (std::size_t c = 0; c + 1 < breaks.size(); ++c) s += integrate(f, breaks[c], breaks[c + 1], per).value;
  return s;
}

// int_{-mu}^{-hw} g(xi) dxi through xi = -mu + s^2, which removes the square-root
// edge of the band; `scale` is the decay length of g away from -hw.
double band_integral(const Integrand& g, const PhysicalParams& p, double scale, double tol) {
  const double smax = std::sqrt(p.mu - p.hbar_omega_d);
  auto h = [&](double t) {
    const double s = smax - t;
    return 2.0 * s * g(-p.mu + s * s);
  };
  return integrate_decaying(h, 0.0, smax, scale / (2.0 * smax), tol).value;
}

}  // namespace

double g_weight(double eta) {
  if (eta < 0.0) throw std::invalid_argument("g_weight: eta must be nonnegative");
  if (eta == 0.0) return -2.0 / 3.0;
  if (eta < 0.5) {
    // -(sinh 2eta - 2eta) / (2 eta^3 cosh^2 eta), with sinh x - x summed as a series.
    const double x = 2.0 * eta, x2 = x * x;
    double term = x * x2 / 6.0, sum = term;
    for (int k = 2; term > 1e-18 * sum; ++k) {
      term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
      sum += term;
    }
    const double c = std::cosh(eta);
    return -sum / (2.0 * eta * eta * eta * c * c);
  }
  return -(std::tanh(eta) / eta - sech2(eta)) / (eta * eta);
}

OmegaTerms omega_normal_terms(double T, const PhysicalParams& p, const DosModel& dos, double tol) {
  if (T < 0.0) throw std::invalid_argument("omega_normal: T must be nonnegative");
  const double n0 = p.n0, eps = p.epsilon, hw = p.hbar_omega_d;
  OmegaTerms t;
  t.shell_energy = -2.0 * n0 * integrate([](double xi) { return xi; }, eps, hw, tol).value;
  t.band_energy = 2.0 * band_integral([&](double xi) { return xi * dos(xi); }, p, p.mu, tol);
  if (T == 0.0) return t;
  t.shell_thermal =
      -4.0 * n0 * T * integrate_decaying([&](double xi) { return std::log1p(std::exp(-xi / T)); }, eps, hw, T, tol).value;
  t.band_thermal =
      -2.0 * T * band_integral([&](double xi) { return dos(xi) * std::log1p(std::exp(xi / T)); }, p, T, tol);
  t.tail_thermal =
      -2.0 * T * integrate_tail([&](double xi) { return dos(xi) * std::log1p(std::exp(-xi / T)); }, hw, T, tol).value;
  return t;
}

double omega_normal(double T, const PhysicalParams& p, const DosModel& dos, double tol) {
  if (T < 0.0) throw std::invalid_argument("omega_normal: T must be nonnegative");
  const double n0 = p.n0;
  const bool hot = T > 0.0;
  const double scale = hot ? T : p.mu;
  auto shell = [&](double xi) { return -2.0 * n0 * xi - (hot ? 4.0 * n0 * T * std::log1p(std::exp(-xi / T)) : 0.0); };
  auto band = [&](double xi) {
    return dos(xi) * (2.0 * xi - (hot ? 2.0 * T * std::log1p(std::exp(xi / T)) : 0.0));
  };
  double total = integrate_decaying(shell, p.epsilon, p.hbar_omega_d, scale, tol).value +
                 band_integral(band, p, scale, tol);
  if (hot)
    total -= 2.0 * T *
             integrate_tail([&](double xi) { return dos(xi) * std::log1p(std::exp(-xi / T)); }, p.hbar_omega_d, T, tol)
                 .value;
  return total;
}

double cv_normal(double T, const PhysicalParams& p, const DosModel& dos, double tol) {
  if (T < 0.0) throw std::invalid_argument("cv_normal: T must be nonnegative");
  if (T == 0.0) return 0.0;
  auto w = [&](double xi) { return xi * xi * sech2(xi / (2.0 * T)); };
  const double shell = p.n0 * integrate_decaying(w, p.epsilon, p.hbar_omega_d, T, tol).value;
  const double band = 0.5 * band_integral([&](double xi) { return dos(xi) * w(xi); }, p, T, tol);
  const double tail = 0.5 * integrate_tail([&](double xi) { return dos(xi) * w(xi); }, p.hbar_omega_d, T, tol).value;
  return (shell + band + tail) / (T * T);
}

double j_integral(double Tc, const PhysicalParams& p, const DosModel& dos, double tol) {
  if (!(Tc > 0.0)) throw std::invalid_argument("j_integral: Tc must be positive");
  const double s = 2.0 * Tc;
  auto w = [](double eta) { return eta * eta * sech2(eta); };
  const double shell = 2.0 * p.n0 * integrate_decaying(w, p.epsilon / s, p.hbar_omega_d / s, 0.5, tol).value;
  const double band = band_integral([&](double xi) { return dos(xi) * w(xi / s); }, p, Tc, tol) / s;
  const double tail =
      integrate_tail([&](double eta) { return dos(s * eta) * w(eta); }, p.hbar_omega_d / s, 0.5, tol).value;
  return shell + band + tail;
}

double psi(const GapSolver& solver, const GapSlice& slice) {
  if (slice.zero || slice.sup() == 0.0) return 0.0;
  const double T = slice.T;
  const auto& rule = solver.rule();
  const std::vector<double> uq = solver.sample(slice.values);
  double s = 0.0;
  for (std::size_t q = 0; q < uq.size(); ++q) {
    const double u = uq[q], xi = rule.points[q];
    if (u == 0.0) continue;
    const double u2 = u * u, e = std::sqrt(xi * xi + u2);
    const double d = u2 / (e + xi);  // E - xi
    double val = d * d / e;
    if (T > 0.0) {
      const double ln = std::log1p(std::exp(-xi / T)) - std::log1p(std::exp(-e / T));
      val += u2 / e * one_minus_tanh(e / (2.0 * T)) - 4.0 * T * ln;
    }
    s += rule.weights[q] * val;
  }
  return -solver.params().n0 * s;
}

double psi_derivative(const GapSolver& solver, const GapSlice& slice, const std::vector<double>& du) {
  const double T = slice.T;
  if (!(T > 0.0)) throw std::invalid_argument("psi_derivative: T must be positive (the T = 0 value is 0)");
  if (du.size() != slice.values.size()) throw std::invalid_argument("psi_derivative: size mismatch");
  if (slice.zero || slice.sup() == 0.0) {
    bool all_zero = true;
    for (double d : du) all_zero = all_zero && d == 0.0;
    if (all_zero) return 0.0;
  }
  std::vector<Dual> ud(du.size());
  for (std::size_t i = 0; i < du.size(); ++i) ud[i] = Dual(slice.values[i], du[i]);
  const std::vector<Dual> uq = solver.sample(ud);
  const auto& rule = solver.rule();
  double s = 0.0;
  for (std::size_t q = 0; q < uq.size(); ++q) {
    const double u = uq[q].v, dudt = uq[q].d, xi = rule.points[q];
    const double u2 = u * u, e2 = xi * xi + u2, e = std::sqrt(e2);
    const double y = e / (2.0 * T);
    const double th = std::tanh(y);
    const double udu = u * dudt;
    double k = u2 / (2.0 * T * e2) * sech2(y) * (udu - e2 / T);
    k += 4.0 * (std::log1p(std::exp(-xi / T)) - std::log1p(std::exp(-e / T)));
    k += 4.0 * xi / T * fermi(xi / T);
    k += 4.0 * fermi(e / T) * (udu / e - e / T);
    const double val = -2.0 * udu / e * one_minus_tanh(y) - u2 * udu / (e2 * e) * th + k;
    s += rule.weights[q] * val;
  }
  return solver.params().n0 * s;
}

VFunction extract_v(const GapSolver& solver, int k_min, int k_max) {
  if (k_min < 1 || k_max < k_min + 1) throw std::invalid_argument("extract_v: need 1 <= k_min < k_max");
  const double Tc = solver.find_Tc();
  const std::size_t m = static_cast<std::size_t>(k_max - k_min + 1);
  std::vector<GapSlice> slices(m);
  std::vector<double> s(m);
  for (std::size_t j = 0; j < m; ++j) s[j] = Tc * std::ldexp(1.0, -(k_min + static_cast<int>(j)));
  detail::parallel_for(m, [&](std::size_t j) { slices[j] = solver.solve_at_T(Tc - s[j]); });

  VFunction v;
  v.x = solver.grid().nodes;
  v.Tc = Tc;
  v.k_min = k_min;
  v.k_max = k_max;
  const std::size_t n = v.x.size();
  v.values.resize(n);
  v.fit_residual.resize(n);
  double sm = 0.0, ss = 0.0;
  for (double x : s) {
    sm += x;
    ss += x * x;
  }
  const double md = static_cast<double>(m);
  const double det = md * ss - sm * sm;
  for (std::size_t i = 0; i < n; ++i) {
    double qm = 0.0, qs = 0.0;
    std::vector<double> q(m);
    for (std::size_t j = 0; j < m; ++j) {
      q[j] = slices[j].values[i] * slices[j].values[i] / s[j];
      qm += q[j];
      qs += q[j] * s[j];
    }
    const double intercept = (ss * qm - sm * qs) / det;
    const double slope = (md * qs - sm * qm) / det;
    double r2 = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double r = q[j] - (intercept + slope * s[j]);
      r2 += r * r;
    }
    v.values[i] = intercept;
    v.fit_residual[i] = std::sqrt(r2 / md);
    v.max_fit_residual = std::max(v.max_fit_residual, v.fit_residual[i]);
    if (!(intercept > 0.0)) throw NumericalError("positivity of v violated numerically");
  }
  return v;
}

std::vector<double> v_map(const GapSolver& solver, const std::vector<double>& v, double Tc) {
  const auto& rule = solver.rule();
  const std::vector<double> vq = solver.sample(v);
  std::vector<double> w(vq.size());
  for (std::size_t q = 0; q < vq.size(); ++q) {
    const double xi = rule.points[q];
    w[q] = rule.weights[q] * std::sqrt(std::max(vq[q], 0.0)) / xi * std::tanh(xi / (2.0 * Tc));
  }
  std::vector<double> f = solver.contract(w);
  for (auto& x : f) x *= x;
  return f;
}

double v_selfconsistency_residual(const GapSolver& solver, const VFunction& v) {
  const std::vector<double> f = v_map(solver, v.values, v.Tc);
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) r = std::max(r, std::abs(v.values[i] - f[i]));
  return r;
}

double v_at(const VFunction& v, double xi) {
  return pchip_eval(v.x, v.values, pchip_slopes(v.x, v.values), xi);
}

double v2g_integral(const VFunction& v, const PhysicalParams& p, double tol) {
  (void)p;
  const double s = 2.0 * v.Tc;
  const std::vector<double> slopes = pchip_slopes(v.x, v.values);
  std::vector<double> breaks(v.x.size());
  for (std::size_t i = 0; i < v.x.size(); ++i) breaks[i] = v.x[i] / s;
  auto f = [&](double eta) {
    const double val = pchip_eval(v.x, v.values, slopes, s * eta);
    return val * val * g_weight(eta);
  };
  return integrate_cells(breaks, f, tol);
}

double delta_cv(const VFunction& v, const PhysicalParams& p, double tol) {
  return -p.n0 / (8.0 * v.Tc) * v2g_integral(v, p, tol);
}

double cv_ratio(const VFunction& v, const PhysicalParams& p, const DosModel& dos, double tol) {
  const double J = j_integral(v.Tc, p, dos, tol);
  return -p.n0 / (32.0 * v.Tc * v.Tc * J) * v2g_integral(v, p, tol);
}

UniversalConstant universal_constant(double tol) {
  UniversalConstant u;
  const double cut = u.cut;
  u.sech_integral = integrate([](double eta) { return eta * eta * sech2(eta); }, 0.0, cut, tol).value;
  // Beyond the cut -g(eta) = 1/eta^3 to double precision.
  u.g_tail = 1.0 / (2.0 * cut * cut);
  u.g_integral = integrate([](double eta) { return -g_weight(eta); }, 0.0, cut, tol).value + u.g_tail;
  u.value = 1.0 / (u.sech_integral * u.g_integral);
  return u;
}

ThermoCurve thermo_curve(const GapSolver& solver, const GapSurface& surface, const DosModel& dos) {
  const auto& p = solver.params();
  ThermoCurve c;
  c.Tc = surface.Tc;
  const std::size_t m = surface.slices.size();
  c.records.resize(m);
  detail::parallel_for(m, [&](std::size_t k) {
    const GapSlice& sl = surface.slices[k];
    ThermoRecord r;
    r.T = sl.T;
    r.omega_n = omega_normal(sl.T, p, dos);
    r.psi = psi(solver, sl);
    r.dpsi_dT = sl.T > 0.0 ? psi_derivative(solver, sl, solver.du_dT(sl)) : 0.0;
    r.cv_normal = cv_normal(sl.T, p, dos);
    c.records[k] = r;
  });
  if (m >= 3) {
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t j = std::clamp<std::size_t>(k, 1, m - 2);
      const auto& a = c.records[j - 1];
      const auto& b = c.records[j];
      const auto& d = c.records[j + 1];
      const double h1 = b.T - a.T, h2 = d.T - b.T;
      const double fa = a.omega_n + a.psi, fb = b.omega_n + b.psi, fd = d.omega_n + d.psi;
      const double d2 = 2.0 * ((fd - fb) / h2 - (fb - fa) / h1) / (h1 + h2);
      c.records[k].cv_super = -c.records[k].T * d2;
    }
  }
  return c;
}

}  // namespace bcs
