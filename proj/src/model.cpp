#include "bcsgap/model.hpp"

#include "bcsgap/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bcs {

PhysicalParams validate_params(const PhysicalParams& raw) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (!(raw.epsilon > 0.0)) fail("cutoff must be positive (epsilon > 0)");
  if (!(raw.epsilon < raw.hbar_omega_d)) fail("epsilon < hbar_omega_d violated");
  if (!(raw.hbar_omega_d < raw.mu)) fail("hbar_omega_d < mu violated");
  if (!(raw.u1 > 0.0)) fail("U1 > 0 violated");
  if (!(raw.u1 < raw.u2)) fail("U1 < U2 violated");
  if (!(raw.n0 > 0.0)) fail("n0 > 0 violated");
  return raw;
}

std::vector<double> uniform_nodes(const PhysicalParams& p, std::size_t count) {
  if (count < 2) throw ConfigError("at least two sample nodes are required");
  std::vector<double> nodes(count);
  const double h = (p.hbar_omega_d - p.epsilon) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) nodes[i] = p.epsilon + h * static_cast<double>(i);
  nodes.back() = p.hbar_omega_d;
  return nodes;
}

namespace {

// Cell index i with nodes[i] <= x <= nodes[i+1]; x is assumed clamped.
std::size_t locate(const std::vector<double>& nodes, double x) {
  auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  std::size_t i = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
  return std::min(i, nodes.size() - 2);
}

double lerp_at(const std::vector<double>& nodes, const std::vector<double>& f, double x) {
  const std::size_t i = locate(nodes, x);
  const double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
  return (1.0 - t) * f[i] + t * f[i + 1];
}

void check_nodes(const std::vector<double>& nodes, const PhysicalParams& p, const char* what) {
  if (nodes.size() < 2) throw ConfigError(std::string(what) + ": need at least two nodes");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i] > nodes[i - 1]))
      throw ConfigError(std::string(what) + ": nodes must be strictly ascending");
  const double slack = 1e-12 * p.hbar_omega_d;
  if (std::abs(nodes.front() - p.epsilon) > slack || std::abs(nodes.back() - p.hbar_omega_d) > slack)
    throw ConfigError(std::string(what) + ": nodes must span [epsilon, hbar_omega_d]");
}

}  // namespace

Kernel::Kernel(PotentialSpec spec, const PhysicalParams& params)
    : spec_(std::move(spec)), params_(params) {
  if (auto* c = std::get_if<ConstantPotential>(&spec_)) {
    min_ = max_ = c->u0;
  } else if (auto* s = std::get_if<SeparablePotential>(&spec_)) {
    check_nodes(s->nodes, params_, "separable potential");
    if (s->f.size() != s->nodes.size())
      throw ConfigError("separable potential: f_values and nodes differ in length");
    const auto [lo, hi] = std::minmax_element(s->f.begin(), s->f.end());
    if (!(*lo > 0.0)) throw ConfigError("separable potential: f must be positive");
    min_ = *lo * *lo;
    max_ = *hi * *hi;
  } else {
    auto& t = std::get<TabulatedPotential>(spec_);
    check_nodes(t.nodes, params_, "tabulated potential");
    if (t.values.size() != t.nodes.size() * t.nodes.size())
      throw ConfigError("tabulated potential: table must hold nodes^2 values");
    const auto [lo, hi] = std::minmax_element(t.values.begin(), t.values.end());
    min_ = *lo;
    max_ = *hi;
  }
  if (!(min_ > params_.u1 && max_ < params_.u2)) {
    std::ostringstream os;
    os << "potential range [" << min_ << ", " << max_
       << "] violates the coupling bound u1 < U(x,xi) < u2 with u1 = " << params_.u1
       << ", u2 = " << params_.u2;
    throw ConfigError(os.str());
  }
}

double Kernel::clamp_to_shell(double x) const {
  const double slack = 1e-12 * params_.hbar_omega_d;
  if (x < params_.epsilon - slack || x > params_.hbar_omega_d + slack || std::isnan(x))
    throw std::invalid_argument("kernel argument outside [epsilon, hbar_omega_d]");
  return std::clamp(x, params_.epsilon, params_.hbar_omega_d);
}

double Kernel::operator()(double x, double xi) const {
  x = clamp_to_shell(x);
  xi = clamp_to_shell(xi);
  if (auto* c = std::get_if<ConstantPotential>(&spec_)) return c->u0;
  if (auto* s = std::get_if<SeparablePotential>(&spec_))
    return lerp_at(s->nodes, s->f, x) * lerp_at(s->nodes, s->f, xi);
  const auto& t = std::get<TabulatedPotential>(spec_);
  const std::size_t n = t.nodes.size();
  const std::size_t i = locate(t.nodes, x);
  const std::size_t j = locate(t.nodes, xi);
  const double a = (x - t.nodes[i]) / (t.nodes[i + 1] - t.nodes[i]);
  const double b = (xi - t.nodes[j]) / (t.nodes[j + 1] - t.nodes[j]);
  auto v = [&](std::size_t r, std::size_t c) { return t.values[r * n + c]; };
  return (1 - a) * (1 - b) * v(i, j) + a * (1 - b) * v(i + 1, j) + (1 - a) * b * v(i, j + 1) +
         a * b * v(i + 1, j + 1);
}

std::optional<double> Kernel::factor(double x) const {
  x = clamp_to_shell(x);
  if (auto* c = std::get_if<ConstantPotential>(&spec_)) return std::sqrt(c->u0);
  if (auto* s = std::get_if<SeparablePotential>(&spec_)) return lerp_at(s->nodes, s->f, x);
  return std::nullopt;
}

std::string Kernel::describe() const {
  auto num = [](double x) {
    char buf[40];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, x).ptr);
  };
  std::ostringstream os;
  if (auto* c = std::get_if<ConstantPotential>(&spec_)) {
    os << "constant(u0=" << num(c->u0) << ")";
  } else if (auto* s = std::get_if<SeparablePotential>(&spec_)) {
    os << "separable(" << s->nodes.size() << " samples, U in [" << num(min_) << ", " << num(max_) << "])";
  } else {
    const std::size_t n = std::get<TabulatedPotential>(spec_).nodes.size();
    os << "tabulated(" << n << "x" << n << ", U in [" << num(min_) << ", " << num(max_) << "])";
  }
  return os.str();
}

double DosModel::operator()(double xi) const {
  if (xi < -p_.mu || std::isnan(xi)) throw std::invalid_argument("density of states needs xi >= -mu");
  if (kind_ == DosKind::FlatShell || (xi >= p_.epsilon && xi <= p_.hbar_omega_d)) return p_.n0;
  // Square-root band normalised to meet n0 at both shell edges.
  if (xi > p_.hbar_omega_d) return p_.n0 * std::sqrt((xi + p_.mu) / (p_.hbar_omega_d + p_.mu));
  return p_.n0 * std::sqrt((xi + p_.mu) / (p_.epsilon + p_.mu));
}

std::string DosModel::name() const { return kind_ == DosKind::FlatShell ? "flat_shell" : "sqrt_band"; }

DosKind parse_dos_kind(const std::string& name) {
  if (name == "flat_shell" || name == "flat") return DosKind::FlatShell;
  if (name == "sqrt_band" || name == "sqrt") return DosKind::SqrtBand;
  throw ConfigError("dos.type must be flat_shell or sqrt_band, got '" + name + "'");
}

}  // namespace bcs
