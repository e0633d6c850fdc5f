#pragma once

#include "bcsgap/config.hpp"
#include "bcsgap/critical_field.hpp"
#include "bcsgap/gap_solver.hpp"
#include "bcsgap/thermo.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bcs {

struct Table {
  std::vector<std::string> columns;
  std::vector<double> data;  // row-major
  std::size_t rows() const { return columns.empty() ? 0 : data.size() / columns.size(); }
};

struct ReportEntry {
  std::string key;
  std::string text;
  double number;  // NaN for text entries
};

struct Report {
  std::vector<ReportEntry> entries;
  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& text);
  const ReportEntry* find(const std::string& key) const;
};

/// One configured model plus lazily built solver state shared by the subcommands.
class Session {
public:
  explicit Session(RunConfig cfg);

  const RunConfig& config() const { return cfg_; }
  void set_quad_tol(double tol);
  const GapSolver& solver() const;
  const VFunction& vfunction() const;
  DosModel dos() const { return DosModel(cfg_.dos, cfg_.params); }

  /// Ascending temperatures from the grid settings or explicit overrides (t_max <= 0: tau_2).
  std::vector<double> temperatures(double t_min, double t_max, std::size_t points) const;

  /// Config echo, version and the regime temperatures.
  Report metadata() const;

  Table simple_gap(const std::string& coupling, std::size_t t_points) const;
  Table gap(double T) const;
  Table sweep(const std::vector<double>& temps) const;
  Report tc() const;
  Report diagnose(double tau) const;
  Table thermo(const std::vector<double>& temps) const;
  Report ratio() const;
  Table vfun() const;
  std::pair<Table, Report> hc(const std::vector<double>& temps) const;

private:
  RunConfig cfg_;
  mutable std::unique_ptr<GapSolver> solver_;
  mutable std::optional<VFunction> v_;
  mutable std::optional<SurfaceMeta> meta_;
};

Report universal_report();

const char* version_string();

}  // namespace bcs
