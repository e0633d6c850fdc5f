#include "bcsgap/bcsgap.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Failure {
  bcs_status status;
  std::string message;
};

void check(bcs_status s) {
  if (s != BCS_OK) throw Failure{s, bcs_last_error()};
}

using TablePtr = std::unique_ptr<bcs_table, decltype(&bcs_table_free)>;
using ReportPtr = std::unique_ptr<bcs_report, decltype(&bcs_report_free)>;
using ContextPtr = std::unique_ptr<bcs_context, decltype(&bcs_context_free)>;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& os, const bcs_table* t) {
  const size_t rows = bcs_table_rows(t), cols = bcs_table_cols(t);
  for (size_t j = 0; j < cols; ++j) os << (j ? "," : "") << bcs_table_column_name(t, j);
  os << '\n';
  const double* d = bcs_table_data(t);
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) os << (j ? "," : "") << format_number(d[i * cols + j]);
    os << '\n';
  }
}

void write_report(std::ostream& os, const bcs_report* r) {
  for (size_t i = 0; i < bcs_report_size(r); ++i) os << bcs_report_key(r, i) << " = " << bcs_report_value(r, i) << '\n';
}

std::optional<std::string> report_text(const bcs_report* r, const std::string& key) {
  for (size_t i = 0; i < bcs_report_size(r); ++i)
    if (key == bcs_report_key(r, i)) return std::string(bcs_report_value(r, i));
  return std::nullopt;
}

struct Output {
  std::string out;  // --out, or output.dir from the config
  bool quiet = false;

  // Destination path for an artifact, or empty for stdout.
  fs::path target(const std::string& default_name) const {
    if (out.empty()) return {};
    fs::path p(out);
    if (p.extension() == ".csv" || p.extension() == ".txt") {
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      return p;
    }
    fs::create_directories(p);
    return p / default_name;
  }
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Failure{BCS_ERR_CONFIG, "cannot write '" + path.string() + "'"};
  body(os);
}

void emit_table(const Output& o, const std::string& name, const bcs_table* t, const bcs_report* meta) {
  const fs::path p = o.target(name + ".csv");
  if (p.empty()) {
    write_csv(std::cout, t);
    return;
  }
  write_file(p, [&](std::ostream& os) { write_csv(os, t); });
  write_file(fs::path(p.string() + ".meta"), [&](std::ostream& os) { write_report(os, meta); });
  if (!o.quiet) std::cerr << "wrote " << p.string() << '\n';
}

void emit_report(const Output& o, const std::string& name, const bcs_report* r, const bcs_report* meta) {
  if (!o.quiet || o.out.empty()) write_report(std::cout, r);
  if (o.out.empty()) return;
  fs::path p(o.out);
  if (p.extension() == ".csv" || p.extension() == ".txt") p = p.parent_path().empty() ? fs::path(".") : p.parent_path();
  fs::create_directories(p);
  write_file(p / (name + ".txt"), [&](std::ostream& os) { write_report(os, r); });
  if (meta) write_file(p / (name + ".txt.meta"), [&](std::ostream& os) { write_report(os, meta); });
}

int exit_code(bcs_status s) {
  switch (s) {
    case BCS_OK: return 0;
    case BCS_ERR_ARGUMENT:
    case BCS_ERR_CONFIG: return 2;
    case BCS_ERR_NUMERICAL: return 3;
    default: return 1;
  }
}

const char* status_name(bcs_status s) {
  switch (s) {
    case BCS_ERR_ARGUMENT: return "argument";
    case BCS_ERR_CONFIG: return "config";
    case BCS_ERR_NUMERICAL: return "numerical";
    default: return "internal";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutoff BCS gap equation: gaps, Tc, thermodynamics and critical field"};
  app.set_version_flag("--version", std::string(bcs_version()));
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  std::string out;
  double tol = 0.0;
  bool quiet = false;
  app.add_option("--config", config, "Configuration file (key = value)");
  app.add_option("--out", out, "Output directory, or a .csv file path");
  app.add_option("--tol", tol, "Quadrature tolerance override")->check(CLI::PositiveNumber);
  app.add_flag("--quiet", quiet, "Suppress progress messages and report echo");

  std::string coupling = "u1";
  size_t t_points = 0;
  double t = 0.0, t_min = -1.0, t_max = 0.0, tau = 0.0;
  bool sweep_flag = false;

  auto* simple = app.add_subcommand("simple-gap", "Constant-coupling gap Delta(T)");
  simple->add_option("--coupling", coupling, "u1 or u2")->check(CLI::IsMember({"u1", "u2"}));
  simple->add_option("--t-points", t_points, "Number of temperatures");

  auto* gap = app.add_subcommand("gap", "Gap slice u(T, x) at one temperature");
  gap->add_option("--t", t, "Temperature")->required()->check(CLI::NonNegativeNumber);

  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--t-min", t_min, "Lowest temperature");
    sub->add_option("--t-max", t_max, "Highest temperature (default tau_2)");
    sub->add_option("--t-points", t_points, "Number of temperatures");
  };
  auto* sweep = app.add_subcommand("sweep", "Gap surface over a temperature grid");
  add_grid(sweep);
  app.add_subcommand("tc", "Transition temperature");
  auto* diagnose = app.add_subcommand("diagnose", "Contraction constants a, b, gamma, alpha");
  diagnose->add_option("--tau", tau, "Lower edge of the near-Tc band (default Tc (1 - 1/8))");
  auto* thermo = app.add_subcommand("thermo", "Thermodynamic curve");
  add_grid(thermo);
  thermo->add_flag("--sweep", sweep_flag, "Use the sweep grid (default)");
  app.add_subcommand("ratio", "Specific-heat jump ratio at Tc");
  app.add_subcommand("vfun", "Limit v(x) of u^2/(Tc - T)");
  auto* hc = app.add_subcommand("hc", "Critical magnetic field curve");
  add_grid(hc);
  hc->add_flag("--sweep", sweep_flag, "Use the sweep grid (default)");
  app.add_subcommand("universal", "Universal jump constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    Output o{out, quiet};
    if (cmd == "universal") {
      bcs_report* r = nullptr;
      check(bcs_universal(&r));
      ReportPtr rp(r, bcs_report_free);
      emit_report(o, "universal", r, nullptr);
      return 0;
    }
    if (config.empty()) throw Failure{BCS_ERR_CONFIG, "--config is required for " + cmd};
    bcs_context* c = nullptr;
    check(bcs_context_load(config.c_str(), &c));
    ContextPtr ctx(c, bcs_context_free);
    if (tol > 0.0) check(bcs_context_set_quad_tol(ctx.get(), tol));
    bcs_report* m = nullptr;
    check(bcs_context_metadata(ctx.get(), &m));
    ReportPtr meta(m, bcs_report_free);
    if (o.out.empty()) {
      const auto dir = report_text(meta.get(), "config.output.dir");
      if (dir && *dir != "stdout") o.out = *dir;
    }

    auto table = [&](const std::string& name, const std::function<bcs_status(bcs_table**)>& f) {
      bcs_table* tb = nullptr;
      check(f(&tb));
      TablePtr tp(tb, bcs_table_free);
      emit_table(o, name, tb, meta.get());
    };
    auto report = [&](const std::string& name, const std::function<bcs_status(bcs_report**)>& f) {
      bcs_report* rb = nullptr;
      check(f(&rb));
      ReportPtr rp(rb, bcs_report_free);
      emit_report(o, name, rb, meta.get());
    };

    if (cmd == "simple-gap") {
      table("simple_gap_" + coupling,
            [&](bcs_table** p) { return bcs_simple_gap_table(ctx.get(), coupling.c_str(), t_points, p); });
    } else if (cmd == "gap") {
      table("gap", [&](bcs_table** p) { return bcs_gap_slice(ctx.get(), t, p); });
    } else if (cmd == "sweep") {
      table("sweep", [&](bcs_table** p) { return bcs_sweep(ctx.get(), t_min, t_max, t_points, p); });
    } else if (cmd == "tc") {
      report("tc", [&](bcs_report** p) { return bcs_tc(ctx.get(), p); });
    } else if (cmd == "diagnose") {
      report("diagnose", [&](bcs_report** p) { return bcs_diagnose(ctx.get(), tau, p); });
    } else if (cmd == "thermo") {
      table("thermo", [&](bcs_table** p) { return bcs_thermo(ctx.get(), t_min, t_max, t_points, p); });
    } else if (cmd == "ratio") {
      report("ratio", [&](bcs_report** p) { return bcs_ratio(ctx.get(), p); });
    } else if (cmd == "vfun") {
      table("vfun", [&](bcs_table** p) { return bcs_vfun(ctx.get(), p); });
    } else if (cmd == "hc") {
      bcs_table* tb = nullptr;
      bcs_report* rb = nullptr;
      check(bcs_hc(ctx.get(), t_min, t_max, t_points, &tb, &rb));
      TablePtr tp(tb, bcs_table_free);
      ReportPtr rp(rb, bcs_report_free);
      emit_table(o, "hc", tb, meta.get());
      if (o.out.empty()) std::cout << '\n';
      emit_report(o, "hc_summary", rb, meta.get());
    }
    return 0;
  } catch (const Failure& f) {
    std::cerr << "error: kind=" << status_name(f.status) << " exit=" << exit_code(f.status)
              << " message=\"" << f.message << "\"\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: kind=io exit=2 message=\"" << e.what() << "\"\n";
    return 2;
  }
}
