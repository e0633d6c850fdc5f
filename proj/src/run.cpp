#include "bcsgap/run.hpp"

#include "bcsgap/error.hpp"
#include "bcsgap/simple_gap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace bcs {

namespace {

constexpr double kZeta3 = 1.2020569031595942854;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* version_string() { return BCSGAP_VERSION; }

void Report::add(const std::string& key, double value) { entries.push_back({key, fmt(value), value}); }

void Report::add(const std::string& key, const std::string& text) {
  entries.push_back({key, text, std::numeric_limits<double>::quiet_NaN()});
}

const ReportEntry* Report::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

Session::Session(RunConfig cfg) : cfg_(std::move(cfg)) {}

void Session::set_quad_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  cfg_.quad_tol = tol;
  refresh_echo(cfg_);
}

const GapSolver& Session::solver() const {
  if (!solver_) solver_ = std::make_unique<GapSolver>(Kernel(cfg_.potential, cfg_.params), cfg_.params, cfg_.solver);
  return *solver_;
}

const VFunction& Session::vfunction() const {
  if (!v_) v_ = extract_v(solver());
  return *v_;
}

std::vector<double> Session::temperatures(double t_min, double t_max, std::size_t points) const {
  if (t_max <= 0.0) t_max = solver().tau2();
  if (points < 2) throw std::invalid_argument("temperature grid needs at least two points");
  if (!(t_min >= 0.0 && t_max > t_min)) throw std::invalid_argument("temperature grid needs 0 <= t_min < t_max");
  std::vector<double> t(points);
  for (std::size_t k = 0; k < points; ++k)
    t[k] = t_min + (t_max - t_min) * static_cast<double>(k) / static_cast<double>(points - 1);
  t.back() = t_max;
  return t;
}

Report Session::metadata() const {
  Report r;
  r.add("version", std::string(version_string()));
  for (const auto& [k, v] : cfg_.echo) r.add("config." + k, v);
  const GapSolver& s = solver();
  if (!meta_) meta_ = s.metadata();
  r.add("kernel", s.kernel().describe());
  r.add("energy_nodes", static_cast<double>(s.grid().size()));
  r.add("solver.tol", meta_->tol);
  r.add("zero_threshold", meta_->zero_threshold);
  r.add("t_tol", meta_->t_tol);
  r.add("tau1", meta_->tau1);
  r.add("tau2", meta_->tau2);
  r.add("tau0", meta_->tau0);
  r.add("tau3", meta_->tau3);
  r.add("tau", meta_->tau);
  r.add("Tc", s.find_Tc());
  return r;
}

Table Session::simple_gap(const std::string& coupling, std::size_t t_points) const {
  double u = 0.0;
  if (coupling == "u1") {
    u = cfg_.params.u1;
  } else if (coupling == "u2") {
    u = cfg_.params.u2;
  } else {
    throw std::invalid_argument("coupling must be u1 or u2");
  }
  const double t_max = cfg_.grid.t_max > 0.0 ? cfg_.grid.t_max : solver().tau2();
  const SimpleGapCurve c = simple_gap_curve(u, cfg_.params, temperatures(cfg_.grid.t_min, t_max, t_points));
  Table t{{"T", "delta", "residual"}, {}};
  for (const auto& s : c.samples) t.data.insert(t.data.end(), {s.T, s.delta, s.residual});
  return t;
}

Table Session::gap(double T) const {
  const GapSolver& s = solver();
  const GapSlice sl = s.solve_at_T(T);
  const std::vector<double> au = s.apply_A(T, sl.values);
  Table t{{"x", "u", "residual", "iterations"}, {}};
  for (std::size_t i = 0; i < sl.values.size(); ++i)
    t.data.insert(t.data.end(), {s.grid().nodes[i], sl.values[i], std::abs(sl.values[i] - au[i]),
                                 static_cast<double>(sl.iterations)});
  return t;
}

Table Session::sweep(const std::vector<double>& temps) const {
  const GapSurface surf = solver().sweep(temps);
  Table t{{"T", "x", "u", "residual", "iterations"}, {}};
  for (const auto& sl : surf.slices)
    for (std::size_t i = 0; i < sl.values.size(); ++i)
      t.data.insert(t.data.end(), {sl.T, surf.x[i], sl.values[i], sl.final_residual,
                                   static_cast<double>(sl.iterations)});
  return t;
}

Report Session::tc() const {
  const GapSolver& s = solver();
  Report r;
  const double Tc = s.find_Tc();
  r.add("Tc", Tc);
  r.add("tau1", s.tau1());
  r.add("tau2", s.tau2());
  r.add("perron_root_at_Tc", s.perron_root(Tc));
  r.add("t_tol", s.options().t_tol);
  r.add("zero_threshold", s.options().zero_threshold);
  // The zero branch is decided by the linearisation, so the threshold cannot move Tc.
  SolverOptions half = s.options();
  half.zero_threshold *= 0.5;
  const GapSolver s2(s.kernel(), s.params(), half);
  r.add("Tc_half_threshold", s2.find_Tc());
  r.add("hbar_omega_over_2Tc", cfg_.params.hbar_omega_d / (2.0 * Tc));
  r.add("epsilon_over_2Tc", cfg_.params.epsilon / (2.0 * Tc));
  return r;
}

Report Session::diagnose(double tau) const {
  const GapSolver& s = solver();
  const double Tc = s.find_Tc();
  if (tau <= 0.0) tau = Tc * (1.0 - 0.125);
  const ContractionReport c = s.contraction_diagnostics(tau);
  Report r;
  r.add("tau", c.tau);
  r.add("Tc", c.Tc);
  r.add("tau0", c.tau0);
  r.add("tau3", c.tau3);
  r.add("a", c.a);
  r.add("a_argmax_T", c.a_argmax_T);
  r.add("b", c.b);
  r.add("gamma_feasible", c.gamma_feasible ? 1.0 : 0.0);
  r.add("gamma", c.gamma);
  r.add("alpha", c.alpha);
  r.add("alpha_below_one", c.alpha < 1.0 ? 1.0 : 0.0);
  r.add("alpha_argmax_T", c.alpha_argmax_T);
  r.add("alpha_argmax_x", c.alpha_argmax_x);
  // Observed contraction on the same band: the largest residual ratio of a solve there.
  const double T = 0.5 * (tau + Tc);
  const GapSlice sl = s.solve_at_T(T);
  double worst = 0.0;
  for (std::size_t k = 1; k < sl.residual_history.size(); ++k)
    if (sl.residual_history[k - 1] > 0.0)
      worst = std::max(worst, sl.residual_history[k] / sl.residual_history[k - 1]);
  r.add("observed_T", T);
  r.add("observed_max_ratio", worst);
  r.add("observed_iterations", static_cast<double>(sl.iterations));
  r.add("observed_damped", sl.damped ? 1.0 : 0.0);
  r.add("observed_newton_steps", static_cast<double>(sl.newton_steps));
  return r;
}

Table Session::thermo(const std::vector<double>& temps) const {
  const GapSurface surf = solver().sweep(temps);
  const ThermoCurve c = thermo_curve(solver(), surf, dos());
  Table t{{"T", "omega_n", "psi", "dpsi_dT", "cv_normal", "cv_super"}, {}};
  for (const auto& r : c.records)
    t.data.insert(t.data.end(), {r.T, r.omega_n, r.psi, r.dpsi_dT, r.cv_normal, r.cv_super});
  return t;
}

Report Session::ratio() const {
  const VFunction& v = vfunction();
  const PhysicalParams& p = cfg_.params;
  const double tol = cfg_.quad_tol;
  Report r;
  const double dcv = delta_cv(v, p, tol);
  const double cvn = cv_normal(v.Tc, p, dos(), tol);
  const double ratio = cv_ratio(v, p, dos(), tol);
  const UniversalConstant u = universal_constant();
  r.add("Tc", v.Tc);
  r.add("dos", dos().name());
  r.add("delta_cv", dcv);
  r.add("cv_normal_Tc", cvn);
  r.add("ratio", ratio);
  r.add("ratio_direct", dcv / cvn);
  r.add("ratio_flat_shell", cv_ratio(v, p, DosModel(DosKind::FlatShell, p), tol));
  r.add("ratio_sqrt_band", cv_ratio(v, p, DosModel(DosKind::SqrtBand, p), tol));
  r.add("universal", u.value);
  r.add("ratio_minus_universal", ratio - u.value);
  r.add("hbar_omega_over_2Tc", p.hbar_omega_d / (2.0 * v.Tc));
  r.add("epsilon_over_2Tc", p.epsilon / (2.0 * v.Tc));
  r.add("v_fit_residual", v.max_fit_residual);
  return r;
}

Table Session::vfun() const {
  const VFunction& v = vfunction();
  Table t{{"x", "v", "fit_residual"}, {}};
  for (std::size_t i = 0; i < v.x.size(); ++i) t.data.insert(t.data.end(), {v.x[i], v.values[i], v.fit_residual[i]});
  return t;
}

std::pair<Table, Report> Session::hc(const std::vector<double>& temps) const {
  const GapSolver& s = solver();
  const VFunction& v = vfunction();
  if (!meta_) meta_ = s.metadata();
  std::vector<double> all = temps;
  const std::vector<double> window = linear_law_window(v.Tc);
  all.insert(all.end(), window.begin(), window.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  const GapSurface surf = s.sweep(all);
  const ThermoCurve th = thermo_curve(s, surf, dos());
  const double h0 = hc_zero(s, s.solve_at_T(0.0));
  const HcCurve c = hc_curve(th, v, cfg_.params, h0, meta_->tau3, meta_->tau);
  Table t{{"T", "hc", "dhc_dT", "linear_form", "outside_proven_regime"}, {}};
  for (const auto& r : c.records)
    t.data.insert(t.data.end(), {r.T, r.hc, r.dhc_dT, r.linear_form ? 1.0 : 0.0, r.outside_proven ? 1.0 : 0.0});
  const LinearLawReport law = linear_law_check(c);
  Report rep;
  rep.add("Tc", c.Tc);
  rep.add("hc0", c.hc0);
  rep.add("slope_at_Tc", c.slope_at_Tc);
  rep.add("fitted_coefficient", law.coefficient);
  rep.add("fitted_intercept", law.intercept);
  rep.add("predicted_coefficient", law.predicted);
  rep.add("coefficient_relative_error", law.relative_error);
  if (s.kernel().is_constant()) {
    rep.add("coefficient_over_hc0", law.coefficient_over_hc0);
    rep.add("reference_1_74_difference", law.coefficient_over_hc0 - 1.74);
  }
  rep.add("tau3", c.tau3);
  rep.add("tau", c.tau);
  return {t, rep};
}

Report universal_report() {
  const UniversalConstant u = universal_constant();
  const double ref = 12.0 / (7.0 * kZeta3);
  Report r;
  r.add("universal", u.value);
  r.add("reference_12_over_7zeta3", ref);
  r.add("abs_difference", std::abs(u.value - ref));
  r.add("sech_integral", u.sech_integral);
  r.add("g_integral", u.g_integral);
  r.add("g_tail", u.g_tail);
  return r;
}

}  // namespace bcs
