#include "bcsgap/gap_solver.hpp"

#include "bcsgap/error.hpp"
#include "bcsgap/simple_gap.hpp"
#include "parallel.hpp"
#include "roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bcs {

namespace {

constexpr std::size_t kHistoryCap = 4096;
constexpr std::size_t kStallLimit = 5;
constexpr double kDamping = 0.5;
constexpr std::size_t kRateWindow = 8;
constexpr double kSlowRate = 0.99;
constexpr int kNewtonSteps = 20;
constexpr int kGaussOrder = 8;
constexpr std::size_t kDiagnosticTemps = 33;

double sech2(double z) {
  z = std::abs(z);
  if (z > 350.0) return 0.0;
  const double c = std::cosh(z);
  return 1.0 / (c * c);
}

// u/E tanh(E/2T); T = 0 drops the tanh.
double phi(double u, double xi, double T) {
  if (u == 0.0) return 0.0;
  const double e = std::sqrt(xi * xi + u * u);
  return T > 0.0 ? u / e * std::tanh(e / (2.0 * T)) : u / e;
}

double sup_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

}  // namespace

double GapSlice::sup() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

GapSolver::GapSolver(Kernel kernel, const PhysicalParams& params, SolverOptions opts)
    : kernel_(std::move(kernel)),
      p_(validate_params(params)),
      opts_(opts),
      grid_(make_energy_grid(p_, opts.energy_nodes)),
      rule_(composite_gauss(grid_.nodes, kGaussOrder)),
      sampler_(grid_.nodes, rule_),
      rank_one_(kernel_.is_rank_one()) {
  const std::size_t n = grid_.size(), nq = rule_.points.size();
  if (rank_one_) {
    fx_.resize(n);
    fq_.resize(nq);
    for (std::size_t i = 0; i < n; ++i) fx_[i] = *kernel_.factor(grid_.nodes[i]);
    for (std::size_t q = 0; q < nq; ++q) fq_[q] = *kernel_.factor(rule_.points[q]);
  } else {
    kmat_.resize(n * nq);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t q = 0; q < nq; ++q) kmat_[i * nq + q] = kernel_(grid_.nodes[i], rule_.points[q]);
  }
  tau1_ = solve_tau(p_.u1, p_);
  tau2_ = solve_tau(p_.u2, p_);
  const double d20 = solve_simple_gap(0.0, p_.u2, p_, tau2_);
  if (opts_.tol <= 0.0) opts_.tol = 1e-10 * d20;
  if (opts_.zero_threshold <= 0.0) opts_.zero_threshold = 1e-8 * d20;
  if (opts_.t_tol <= 0.0) opts_.t_tol = 1e-8 * tau2_;
  if (opts_.max_iter == 0) throw ConfigError("solver.max_iter must be positive");
}

double GapSolver::delta1(double T) const { return solve_simple_gap(T, p_.u1, p_, tau1_); }
double GapSolver::delta2(double T) const { return solve_simple_gap(T, p_.u2, p_, tau2_); }

double GapSolver::weighted_sum(std::size_t i, const std::vector<double>& phi_w) const {
  const std::size_t nq = rule_.points.size();
  const double* row = kmat_.data() + i * nq;
  double s = 0.0;
  for (std::size_t q = 0; q < nq; ++q) s += row[q] * phi_w[q];
  return s;
}

// sum_q U(x_i, xi_q) phi_w[q] for every node, phi_w already carrying the weights.
std::vector<double> GapSolver::contract(const std::vector<double>& phi_w) const {
  const std::size_t n = grid_.size();
  std::vector<double> out(n);
  if (rank_one_) {
    double s = 0.0;
    for (std::size_t q = 0; q < phi_w.size(); ++q) s += fq_[q] * phi_w[q];
    for (std::size_t i = 0; i < n; ++i) out[i] = fx_[i] * s;
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = weighted_sum(i, phi_w);
  }
  return out;
}

std::vector<double> GapSolver::apply_A(double T, const std::vector<double>& u) const {
  if (u.size() != grid_.size()) throw std::invalid_argument("apply_A: slice size mismatch");
  if (T < 0.0) throw std::invalid_argument("apply_A: T must be nonnegative");
  const std::vector<double> uq = sampler_.sample(u);
  std::vector<double> w(uq.size());
  for (std::size_t q = 0; q < uq.size(); ++q) w[q] = rule_.weights[q] * phi(uq[q], rule_.points[q], T);
  return contract(w);
}

std::vector<double> GapSolver::apply_dA_dT(double T, const std::vector<double>& u,
                                           const std::vector<double>& du) const {
  if (!(T > 0.0)) throw std::invalid_argument("apply_dA_dT: T must be positive (the T = 0 limit is 0)");
  if (u.size() != grid_.size() || du.size() != grid_.size())
    throw std::invalid_argument("apply_dA_dT: slice size mismatch");
  std::vector<Dual> ud(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) ud[i] = Dual(u[i], du[i]);
  const std::vector<Dual> uq = sampler_.sample(ud);
  std::vector<double> w(uq.size());
  for (std::size_t q = 0; q < uq.size(); ++q) {
    const double uv = uq[q].v, xi = rule_.points[q];
    const double e2 = xi * xi + uv * uv, e = std::sqrt(e2);
    const double z = e / (2.0 * T);
    const double th = std::tanh(z), s2 = sech2(z);
    const double i1 = uq[q].d * xi * xi / (e2 * e) * th;
    const double i2 = uq[q].d * uv * uv / (2.0 * T * e2) * s2;
    const double i3 = -uv / (2.0 * T * T) * s2;
    w[q] = rule_.weights[q] * (i1 + i2 + i3);
  }
  return contract(w);
}

std::vector<double> GapSolver::jacobian(double T, const std::vector<double>& u) const {
  const std::size_t n = grid_.size(), nq = rule_.points.size();
  const std::vector<double> uq = sampler_.sample(u);
  std::vector<double> dphi(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const double uv = uq[q], xi = rule_.points[q];
    const double e2 = xi * xi + uv * uv, e = std::sqrt(e2);
    if (T > 0.0) {
      const double z = e / (2.0 * T);
      dphi[q] = xi * xi / (e2 * e) * std::tanh(z) + uv * uv / (2.0 * T * e2) * sech2(z);
    } else {
      dphi[q] = xi * xi / (e2 * e);
    }
    dphi[q] *= rule_.weights[q];
  }
  std::vector<double> jac(n * n);
  std::vector<Dual> ud(n);
  for (std::size_t i = 0; i < n; ++i) ud[i] = Dual(u[i]);
  for (std::size_t j = 0; j < n; ++j) {
    ud[j].d = 1.0;
    const std::vector<Dual> col = sampler_.sample(ud);
    ud[j].d = 0.0;
    std::vector<double> w(nq);
    for (std::size_t q = 0; q < nq; ++q) w[q] = dphi[q] * col[q].d;
    const std::vector<double> c = contract(w);
    for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = c[i];
  }
  return jac;
}

double GapSolver::perron_root(double T) const {
  const std::size_t nq = rule_.points.size();
  std::vector<double> lin(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const double xi = rule_.points[q];
    lin[q] = rule_.weights[q] * (T > 0.0 ? std::tanh(xi / (2.0 * T)) : 1.0) / xi;
  }
  auto L = [&](const std::vector<double>& v) {
    const std::vector<double> vq = sampler_.sample(v);
    std::vector<double> w(nq);
    for (std::size_t q = 0; q < nq; ++q) w[q] = lin[q] * vq[q];
    return contract(w);
  };
  if (rank_one_) {
    // The image of L is spanned by f, so f is the eigenvector.
    const std::vector<double> lf = L(fx_);
    return lf[0] / fx_[0];
  }
  std::vector<double> v(grid_.size(), 1.0);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    std::vector<double> lv = L(v);
    double m = 0.0;
    for (double x : lv) m = std::max(m, x);
    for (auto& x : lv) x /= m;
    const double change = sup_norm_diff(lv, v);
    v = std::move(lv);
    const bool done = std::abs(m - lambda) <= 1e-15 * m && change <= 1e-13;
    lambda = m;
    if (done) break;
  }
  return lambda;
}

GapSlice GapSolver::solve_at_T(double T, const std::optional<std::vector<double>>& seed) const {
  if (T < 0.0) throw std::invalid_argument("solve_at_T: T must be nonnegative");
  const std::size_t n = grid_.size();
  GapSlice slice;
  slice.T = T;
  if (T >= tau2_ || (T > 0.0 && perron_root(T) <= 1.0)) {
    slice.values.assign(n, 0.0);
    slice.zero = true;
    return slice;
  }
  std::vector<double> u = seed ? *seed : std::vector<double>(n, delta2(T));
  if (u.size() != n) throw std::invalid_argument("solve_at_T: seed size mismatch");

  double prev = std::numeric_limits<double>::infinity();
  double damping = 1.0;
  std::size_t stall = 0;
  std::vector<double> rates;  // last kRateWindow step ratios, oldest first
  for (std::size_t it = 0; it < opts_.max_iter; ++it) {
    std::vector<double> au = apply_A(T, u);
    const double r = sup_norm_diff(u, au);
    if (slice.residual_history.size() < kHistoryCap) slice.residual_history.push_back(r);
    if (std::isfinite(prev) && prev > 0.0) {
      if (rates.size() == kRateWindow) rates.erase(rates.begin());
      rates.push_back(r / prev);
    }
    // Worst recent ratio, so one noisy step cannot fake a fast rate.
    const double q = rates.size() == kRateWindow ? *std::max_element(rates.begin(), rates.end()) : 1.0;
    double scale = 0.0;
    for (double x : u) scale = std::max(scale, std::abs(x));
    const bool floor_hit = r <= 64.0 * std::numeric_limits<double>::epsilon() * scale;
    // Stop once the residual and the a-posteriori error r q / (1 - q) of Au both meet tol.
    if (r <= opts_.tol && ((q < 1.0 && r * q <= opts_.tol * (1.0 - q)) || floor_hit)) {
      slice.values = std::move(au);
      slice.iterations = it + 1;
      slice.final_residual = r;
      slice.damped = damping < 1.0;
      return slice;
    }
    // Slow contraction near Tc: finish with Newton once the iterate is close.
    if (q >= kSlowRate && q < 1.0 && r * q / (1.0 - q) <= 1e-3 * scale) {
      if (auto polished = newton_polish(T, u)) {
        slice.iterations = it + 1;
        slice.newton_steps = polished->second;
        slice.final_residual = sup_norm_diff(polished->first, apply_A(T, polished->first));
        slice.values = std::move(polished->first);
        slice.damped = damping < 1.0;
        return slice;
      }
    }
    stall = r >= prev ? stall + 1 : 0;
    if (stall >= kStallLimit && damping == 1.0) damping = kDamping;
    prev = r;
    if (damping == 1.0) {
      u = std::move(au);
    } else {
      for (std::size_t i = 0; i < n; ++i) u[i] = (1.0 - damping) * u[i] + damping * au[i];
    }
  }
  std::ostringstream os;
  os << "solve_at_T: no convergence at T = " << T << " after " << opts_.max_iter
     << " iterations (residual " << prev << ")";
  throw SolverError(os.str(), prev, u);
}

std::optional<std::pair<std::vector<double>, int>> GapSolver::newton_polish(double T, std::vector<double> u) const {
  const std::size_t n = grid_.size();
  double last = std::numeric_limits<double>::infinity();
  for (int step = 1; step <= kNewtonSteps; ++step) {
    const std::vector<double> au = apply_A(T, u);
    const std::vector<double> jac = jacobian(T, u);
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd b(n);
    for (std::size_t i = 0; i < n; ++i) {
      b(i) = au[i] - u[i];
      for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - jac[i * n + j];
    }
    const Eigen::VectorXd d = m.partialPivLu().solve(b);
    const double size = d.cwiseAbs().maxCoeff();
    if (!std::isfinite(size) || (step > 1 && size > 0.5 * last)) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i) u[i] += d(i);
    // Quadratic convergence: the remaining error is far below the last correction.
    if (size <= opts_.tol) return std::make_pair(std::move(u), step);
    last = size;
  }
  return std::nullopt;
}

std::vector<double> GapSolver::du_dT(const GapSlice& slice) const {
  const std::size_t n = grid_.size();
  if (slice.zero || slice.T <= 0.0 || slice.sup() == 0.0) return std::vector<double>(n, 0.0);
  const std::vector<double> rhs = apply_dA_dT(slice.T, slice.values, std::vector<double>(n, 0.0));
  const std::vector<double> jac = jacobian(slice.T, slice.values);
  Eigen::MatrixXd m(n, n);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i) = rhs[i];
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? 1.0 : 0.0) - jac[i * n + j];
  }
  const Eigen::VectorXd x = m.partialPivLu().solve(b);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
  return out;
}

double GapSolver::find_Tc() const {
  if (tc_) return *tc_;
  auto f = [&](double T) { return perron_root(T) - 1.0; };
  double lo = tau1_, hi = tau2_;
  double flo = f(lo), fhi = f(hi);
  // Quadrature error can put the envelopes a hair inside the root; widen slightly.
  for (int k = 0; k < 20 && flo <= 0.0; ++k) {
    lo *= 0.99;
    flo = f(lo);
  }
  for (int k = 0; k < 20 && fhi >= 0.0; ++k) {
    hi *= 1.01;
    fhi = f(hi);
  }
  if ((flo > 0.0) == (fhi > 0.0)) throw NumericalError("find_Tc: bracket [tau1, tau2] does not change sign");
  tc_ = detail::bracketed_root_abs(f, lo, hi, flo, fhi, opts_.t_tol, "find_Tc");
  return *tc_;
}

SurfaceMeta GapSolver::metadata() const {
  SurfaceMeta m;
  m.tol = opts_.tol;
  m.zero_threshold = opts_.zero_threshold;
  m.t_tol = opts_.t_tol;
  m.tau1 = tau1_;
  m.tau2 = tau2_;
  m.tau0 = solve_tau0(p_);
  m.tau3 = tau3_from_tau0(m.tau0);
  m.tau = find_Tc() * (1.0 - 0.125);
  return m;
}

GapSurface GapSolver::sweep(const std::vector<double>& temperatures) const {
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (temperatures[k] < 0.0) throw std::invalid_argument("sweep: temperatures must be nonnegative");
    if (k > 0 && !(temperatures[k] > temperatures[k - 1]))
      throw std::invalid_argument("sweep: temperatures must be strictly ascending");
  }
  GapSurface s;
  s.x = grid_.nodes;
  s.Tc = find_Tc();
  s.meta = metadata();
  s.slices.resize(temperatures.size());
  detail::parallel_for(temperatures.size(), [&](std::size_t k) { s.slices[k] = solve_at_T(temperatures[k]); });
  return s;
}

std::vector<double> GapSolver::alpha_row(double T, double delta2_tau) const {
  const std::size_t nq = rule_.points.size();
  const double d2 = delta2(T);
  const double c = delta2_tau * delta2_tau / (2.0 * p_.epsilon * p_.epsilon);
  std::vector<double> w(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    const double xi = rule_.points[q];
    const double e = std::sqrt(xi * xi + d2 * d2);
    w[q] = rule_.weights[q] * (std::tanh(e / (2.0 * T)) / e + c * std::tanh(xi / (2.0 * T)) / xi);
  }
  return contract(w);
}

double GapSolver::alpha_term(double T, std::size_t node, double delta2_tau) const {
  return alpha_row(T, delta2_tau).at(node);
}

ContractionReport GapSolver::contraction_diagnostics(double tau) const {
  ContractionReport r;
  r.Tc = find_Tc();
  if (!(tau > 0.0 && tau < r.Tc)) throw std::invalid_argument("contraction_diagnostics: need 0 < tau < Tc");
  r.tau = tau;
  r.tau0 = solve_tau0(p_);
  r.tau3 = tau3_from_tau0(r.tau0);

  std::vector<double> a_vals(kDiagnosticTemps);
  detail::parallel_for(kDiagnosticTemps, [&](std::size_t k) {
    const double T = r.tau3 * static_cast<double>(k) / static_cast<double>(kDiagnosticTemps - 1);
    a_vals[k] = simple_gap_rhs(delta1(T), r.tau0, 1.0, p_);
  });
  const auto amax = std::max_element(a_vals.begin(), a_vals.end());
  r.a = *amax;
  r.a_argmax_T = r.tau3 * static_cast<double>(amax - a_vals.begin()) / static_cast<double>(kDiagnosticTemps - 1);
  const double d13 = delta1(r.tau3);
  r.b = 32.0 * r.tau3 * r.tau3 / (d13 * d13) * std::atan(p_.hbar_omega_d / d13);
  r.gamma_feasible = 1.0 - p_.u2 * r.a > 0.0;
  r.gamma = r.gamma_feasible ? p_.u2 * r.b / (1.0 - p_.u2 * r.a) : std::numeric_limits<double>::quiet_NaN();

  const double d2tau = delta2(tau);
  std::vector<std::vector<double>> rows(kDiagnosticTemps);
  std::vector<double> temps(kDiagnosticTemps);
  detail::parallel_for(kDiagnosticTemps, [&](std::size_t k) {
    const double T = tau + (r.Tc - tau) * static_cast<double>(k) / static_cast<double>(kDiagnosticTemps - 1);
    temps[k] = T;
    rows[k] = alpha_row(T, d2tau);
  });
  r.alpha = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < kDiagnosticTemps; ++k)
    for (std::size_t i = 0; i < grid_.size(); ++i)
      if (rows[k][i] > r.alpha) {
        r.alpha = rows[k][i];
        r.alpha_argmax_T = temps[k];
        r.alpha_argmax_index = i;
        r.alpha_argmax_x = grid_.nodes[i];
      }
  return r;
}

std::vector<std::vector<double>> surface_du_dT(const GapSurface& surface) {
  const auto& sl = surface.slices;
  const std::size_t m = sl.size();
  if (m < 2) throw std::invalid_argument("surface_du_dT: need at least two slices");
  std::vector<std::vector<double>> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == m ? m - 1 : k + 1;
    const double dt = sl[hi].T - sl[lo].T;
    std::vector<double> d(sl[k].values.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (sl[hi].values[i] - sl[lo].values[i]) / dt;
    out[k] = std::move(d);
  }
  return out;
}

}  // namespace bcs
