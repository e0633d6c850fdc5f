#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bcs {

/// Physical constants of one model instance. Energies share one unit; k_B = 1.
struct PhysicalParams {
  double epsilon = 1e-3;      // lower cutoff of the pairing shell
  double hbar_omega_d = 1.0;  // Debye energy, upper edge of the shell
  double mu = 20.0;           // chemical potential
  double n0 = 1.0;            // density of states on the shell
  double u1 = 0.25;           // lower coupling bound
  double u2 = 0.35;           // upper coupling bound
};

/// Returns `raw` unchanged when 0 < epsilon < hbar_omega_d < mu, 0 < u1 < u2 and n0 > 0.
/// Throws ConfigError naming the first violated ordering otherwise.
PhysicalParams validate_params(const PhysicalParams& raw);

struct ConstantPotential {
  double u0;
};

/// U(x, xi) = f(x) f(xi), with f sampled at ascending nodes and interpolated linearly.
struct SeparablePotential {
  std::vector<double> nodes;
  std::vector<double> f;
};

/// Square table on a node grid, row index x, column index xi, bilinear in between.
struct TabulatedPotential {
  std::vector<double> nodes;
  std::vector<double> values;  // row-major, nodes.size()^2 entries
};

using PotentialSpec = std::variant<ConstantPotential, SeparablePotential, TabulatedPotential>;

/// Uniform nodes on [epsilon, hbar_omega_d], the layout used by config-file samples.
std::vector<double> uniform_nodes(const PhysicalParams& p, std::size_t count);

/// Validated interaction kernel on [epsilon, hbar_omega_d]^2.
class Kernel {
public:
  /// Throws ConfigError if the spec is malformed or leaves the open interval (u1, u2).
  Kernel(PotentialSpec spec, const PhysicalParams& params);

  /// U(x, xi). Arguments outside the shell throw std::invalid_argument.
  double operator()(double x, double xi) const;

  /// For rank-one kernels U(x, xi) = f(x) f(xi), returns f(x). Empty for tables.
  std::optional<double> factor(double x) const;
  bool is_rank_one() const { return !std::holds_alternative<TabulatedPotential>(spec_); }
  bool is_constant() const { return std::holds_alternative<ConstantPotential>(spec_); }

  double min_value() const { return min_; }
  double max_value() const { return max_; }
  const PotentialSpec& spec() const { return spec_; }
  std::string describe() const;

private:
  double clamp_to_shell(double x) const;

  PotentialSpec spec_;
  PhysicalParams params_;
  double min_ = 0.0;
  double max_ = 0.0;
};

enum class DosKind { FlatShell, SqrtBand };

/// Density of states N(xi) on [-mu, inf), equal to n0 on the shell.
class DosModel {
public:
  DosModel(DosKind kind, const PhysicalParams& params) : kind_(kind), p_(params) {}

  /// Throws std::invalid_argument for xi < -mu.
  double operator()(double xi) const;
  DosKind kind() const { return kind_; }
  std::string name() const;

private:
  DosKind kind_;
  PhysicalParams p_;
};

DosKind parse_dos_kind(const std::string& name);

}  // namespace bcs
