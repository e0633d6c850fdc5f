#include "bcsgap/bcsgap.h"

#include "bcsgap/error.hpp"
#include "bcsgap/run.hpp"
#include "bcsgap/simple_gap.hpp"

#include <cmath>
#include <limits>
#include <new>
#include <string>

struct bcs_context {
  bcs::Session session;
};

struct bcs_table {
  bcs::Table table;
};

struct bcs_report {
  bcs::Report report;
};

namespace {

thread_local std::string last_error;

template <class F>
bcs_status guard(F&& f) {
  try {
    last_error.clear();
    f();
    return BCS_OK;
  } catch (const bcs::ConfigError& e) {
    last_error = e.what();
    return BCS_ERR_CONFIG;
  } catch (const bcs::NumericalError& e) {
    last_error = e.what();
    return BCS_ERR_NUMERICAL;
  } catch (const std::invalid_argument& e) {
    last_error = e.what();
    return BCS_ERR_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return BCS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return BCS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return BCS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " must not be null");
}

std::vector<double> temps(const bcs_context* ctx, double t_min, double t_max, size_t t_points) {
  const auto& g = ctx->session.config().grid;
  if (t_min < 0.0) t_min = g.t_min;
  if (t_max <= 0.0) t_max = g.t_max;
  if (t_points == 0) t_points = g.t_points;
  return ctx->session.temperatures(t_min, t_max, t_points);
}

bcs_status emit(bcs_table** out, bcs::Table t) {
  *out = new bcs_table{std::move(t)};
  return BCS_OK;
}

}  // namespace

extern "C" {

const char* bcs_version(void) { return bcs::version_string(); }

const char* bcs_last_error(void) { return last_error.c_str(); }

bcs_status bcs_context_load(const char* path, bcs_context** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new bcs_context{bcs::Session(bcs::load_config(path))};
  });
}

bcs_status bcs_context_parse(const char* text, bcs_context** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new bcs_context{bcs::Session(bcs::parse_config(text))};
  });
}

void bcs_context_free(bcs_context* ctx) { delete ctx; }

bcs_status bcs_context_set_quad_tol(bcs_context* ctx, double tol) {
  return guard([&] {
    need(ctx, "ctx");
    ctx->session.set_quad_tol(tol);
  });
}

bcs_status bcs_context_metadata(bcs_context* ctx, bcs_report** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = new bcs_report{ctx->session.metadata()};
  });
}

bcs_status bcs_z0(double* out) {
  return guard([&] {
    need(out, "out");
    *out = bcs::solve_z0();
  });
}

bcs_status bcs_universal(bcs_report** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(out, "out");
    *out = new bcs_report{bcs::universal_report()};
  });
}

bcs_status bcs_simple_gap_table(bcs_context* ctx, const char* coupling, size_t t_points, bcs_table** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(coupling, "coupling");
    need(out, "out");
    if (t_points == 0) t_points = ctx->session.config().grid.t_points;
    emit(out, ctx->session.simple_gap(coupling, t_points));
  });
}

bcs_status bcs_gap_slice(bcs_context* ctx, double T, bcs_table** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    emit(out, ctx->session.gap(T));
  });
}

bcs_status bcs_sweep(bcs_context* ctx, double t_min, double t_max, size_t t_points, bcs_table** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    emit(out, ctx->session.sweep(temps(ctx, t_min, t_max, t_points)));
  });
}

bcs_status bcs_tc(bcs_context* ctx, bcs_report** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = new bcs_report{ctx->session.tc()};
  });
}

bcs_status bcs_diagnose(bcs_context* ctx, double tau, bcs_report** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = new bcs_report{ctx->session.diagnose(tau)};
  });
}

bcs_status bcs_thermo(bcs_context* ctx, double t_min, double t_max, size_t t_points, bcs_table** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    emit(out, ctx->session.thermo(temps(ctx, t_min, t_max, t_points)));
  });
}

bcs_status bcs_ratio(bcs_context* ctx, bcs_report** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    *out = new bcs_report{ctx->session.ratio()};
  });
}

bcs_status bcs_vfun(bcs_context* ctx, bcs_table** out) {
  if (out) *out = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(out, "out");
    emit(out, ctx->session.vfun());
  });
}

bcs_status bcs_hc(bcs_context* ctx, double t_min, double t_max, size_t t_points, bcs_table** table,
                  bcs_report** summary) {
  if (table) *table = nullptr;
  if (summary) *summary = nullptr;
  return guard([&] {
    need(ctx, "ctx");
    need(table, "table");
    need(summary, "summary");
    auto [t, r] = ctx->session.hc(temps(ctx, t_min, t_max, t_points));
    *table = new bcs_table{std::move(t)};
    *summary = new bcs_report{std::move(r)};
  });
}

size_t bcs_table_rows(const bcs_table* t) { return t ? t->table.rows() : 0; }
size_t bcs_table_cols(const bcs_table* t) { return t ? t->table.columns.size() : 0; }

const char* bcs_table_column_name(const bcs_table* t, size_t col) {
  if (!t || col >= t->table.columns.size()) return nullptr;
  return t->table.columns[col].c_str();
}

const double* bcs_table_data(const bcs_table* t) { return t ? t->table.data.data() : nullptr; }
void bcs_table_free(bcs_table* t) { delete t; }

size_t bcs_report_size(const bcs_report* r) { return r ? r->report.entries.size() : 0; }

const char* bcs_report_key(const bcs_report* r, size_t i) {
  if (!r || i >= r->report.entries.size()) return nullptr;
  return r->report.entries[i].key.c_str();
}

const char* bcs_report_value(const bcs_report* r, size_t i) {
  if (!r || i >= r->report.entries.size()) return nullptr;
  return r->report.entries[i].text.c_str();
}

double bcs_report_number(const bcs_report* r, size_t i) {
  if (!r || i >= r->report.entries.size()) return std::numeric_limits<double>::quiet_NaN();
  return r->report.entries[i].number;
}

int bcs_report_find(const bcs_report* r, const char* key, double* value) {
  if (!r || !key) return 0;
  const bcs::ReportEntry* e = r->report.find(key);
  if (!e) return 0;
  if (value) *value = e->number;
  return 1;
}

void bcs_report_free(bcs_report* r) { delete r; }

}  // extern "C"
