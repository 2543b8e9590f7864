#include "goco/goco.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "goco/bench/config.hpp"
#include "goco/bench/experiment.hpp"
#include "goco/error.hpp"
#include "goco/gauge.hpp"
#include "goco/verify.hpp"

struct goco_body {
  std::shared_ptr<const goco::ConvexBody> body;
};

struct goco_report {
  goco::bench::RegretReport report;
  std::string summary;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

goco_status map_code(goco::ErrorCode code) {
  switch (code) {
    case goco::ErrorCode::invalid_argument: return GOCO_ERR_INVALID_ARGUMENT;
    case goco::ErrorCode::dimension_mismatch: return GOCO_ERR_DIMENSION;
    case goco::ErrorCode::config: return GOCO_ERR_CONFIG;
    case goco::ErrorCode::unsupported: return GOCO_ERR_UNSUPPORTED;
    case goco::ErrorCode::numeric: return GOCO_ERR_NUMERIC;
    case goco::ErrorCode::io: return GOCO_ERR_IO;
    case goco::ErrorCode::internal: return GOCO_ERR_INTERNAL;
  }
  return GOCO_ERR_INTERNAL;
}

template <class F>
goco_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    fn();
    return GOCO_OK;
  } catch (const goco::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return GOCO_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GOCO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GOCO_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return GOCO_ERR_INTERNAL;
  }
}

goco_status null_argument(const char* what) {
  g_last_error = std::string(what) + " must not be NULL";
  return GOCO_ERR_NULL_ARGUMENT;
}

goco::Vec to_vec(const double* x, size_t dim) {
  return Eigen::Map<const goco::Vec>(x, static_cast<Eigen::Index>(dim));
}

goco::bench::ExperimentConfig with_options(const char* config_json, const goco_run_options* options) {
  goco::bench::ExperimentConfig cfg = goco::bench::parse_config(nlohmann::json::parse(config_json));
  if (options) {
    if (options->has_seed) cfg.seed = options->seed;
    if (options->out_dir) cfg.output.dir = options->out_dir;
    if (options->full_interval_scan) cfg.output.full_interval_scan = true;
  }
  return cfg;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* goco_version(void) { return "1.0.0"; }

const char* goco_last_error(void) { return g_last_error.c_str(); }

const char* goco_status_string(goco_status status) {
  switch (status) {
    case GOCO_OK: return "ok";
    case GOCO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case GOCO_ERR_DIMENSION: return "dimension mismatch";
    case GOCO_ERR_CONFIG: return "configuration error";
    case GOCO_ERR_UNSUPPORTED: return "unsupported";
    case GOCO_ERR_NUMERIC: return "numeric failure";
    case GOCO_ERR_IO: return "I/O error";
    case GOCO_ERR_INTERNAL: return "internal error";
    case GOCO_ERR_NULL_ARGUMENT: return "null argument";
  }
  return "unknown status";
}

goco_status goco_body_create(const char* body_json, goco_body** out) {
  if (!body_json) return null_argument("body_json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    nlohmann::json doc{{"body", nlohmann::json::parse(body_json)}};
    const goco::bench::ExperimentConfig cfg = goco::bench::parse_config(doc);
    auto handle = std::make_unique<goco_body>();
    handle->body = goco::bench::build_body(cfg.body, cfg.horizon, cfg.seed);
    *out = handle.release();
  });
}

void goco_body_free(goco_body* body) { delete body; }

goco_status goco_body_dim(const goco_body* body, int* out) {
  if (!body) return null_argument("body");
  if (!out) return null_argument("out");
  *out = body->body->dim();
  return GOCO_OK;
}

goco_status goco_body_geometry(const goco_body* body, double* inner_radius, double* diameter) {
  if (!body) return null_argument("body");
  if (inner_radius) *inner_radius = body->body->inner_radius();
  if (diameter) *diameter = body->body->diameter();
  return GOCO_OK;
}

goco_status goco_body_contains(const goco_body* body, const double* x, size_t dim, int* inside) {
  if (!body) return null_argument("body");
  if (!x) return null_argument("x");
  if (!inside) return null_argument("inside");
  return guarded([&] { *inside = body->body->contains(to_vec(x, dim)) ? 1 : 0; });
}

goco_status goco_body_calls(const goco_body* body, uint64_t* calls) {
  if (!body) return null_argument("body");
  if (!calls) return null_argument("calls");
  *calls = body->body->counter().calls();
  return GOCO_OK;
}

goco_status goco_body_reset_calls(goco_body* body) {
  if (!body) return null_argument("body");
  body->body->counter().reset();
  return GOCO_OK;
}

goco_status goco_gauge(const goco_body* body, const double* x, size_t dim, double tolerance, double* gamma,
                       double* projection, uint64_t* calls_used) {
  if (!body) return null_argument("body");
  if (!x) return null_argument("x");
  if (!gamma) return null_argument("gamma");
  return guarded([&] {
    const goco::GaugeEvaluation g = goco::gauge_bisect(*body->body, to_vec(x, dim), tolerance);
    *gamma = g.gamma;
    if (projection) std::memcpy(projection, g.projection.data(), dim * sizeof(double));
    if (calls_used) *calls_used = g.calls_used;
  });
}

goco_status goco_run(const char* config_json, const goco_run_options* options, goco_report** out) {
  if (!config_json) return null_argument("config_json");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const goco::bench::ExperimentConfig cfg = with_options(config_json, options);
    auto handle = std::make_unique<goco_report>();
    handle->report = goco::bench::run_experiment(cfg);
    handle->summary = goco::bench::summary_json(handle->report).dump(2);
    handle->csv = goco::bench::csv_text(handle->report);
    if (options && options->write_artifacts) goco::bench::write_artifacts(handle->report, cfg.output.dir);
    *out = handle.release();
  });
}

void goco_report_free(goco_report* report) { delete report; }

goco_status goco_report_horizon(const goco_report* report, int* horizon) {
  if (!report) return null_argument("report");
  if (!horizon) return null_argument("horizon");
  *horizon = report->report.config.horizon;
  return GOCO_OK;
}

goco_status goco_report_cumulative_regret(const goco_report* report, double* regret) {
  if (!report) return null_argument("report");
  if (!regret) return null_argument("regret");
  *regret = report->report.cumulative_regret;
  return GOCO_OK;
}

goco_status goco_report_worst_interval(const goco_report* report, int* start, int* end, double* regret) {
  if (!report) return null_argument("report");
  const auto& w = report->report.scan.worst;
  if (start) *start = w.start;
  if (end) *end = w.end;
  if (regret) *regret = w.regret;
  return GOCO_OK;
}

goco_status goco_report_total_calls(const goco_report* report, uint64_t* calls) {
  if (!report) return null_argument("report");
  if (!calls) return null_argument("calls");
  *calls = report->report.total_calls;
  return GOCO_OK;
}

goco_status goco_report_round(const goco_report* report, int t, double* player_loss, uint64_t* calls,
                              uint32_t* events) {
  if (!report) return null_argument("report");
  const auto& rows = report->report.rows;
  if (t < 1 || t > static_cast<int>(rows.size())) {
    g_last_error = "round index outside [1, T]";
    return GOCO_ERR_INVALID_ARGUMENT;
  }
  const auto& row = rows[static_cast<std::size_t>(t - 1)];
  if (player_loss) *player_loss = row.player_loss;
  if (calls) *calls = row.oracle_calls;
  if (events) *events = row.events;
  return GOCO_OK;
}

const char* goco_report_summary_json(const goco_report* report) { return report ? report->summary.c_str() : nullptr; }

const char* goco_report_csv(const goco_report* report) { return report ? report->csv.c_str() : nullptr; }

goco_status goco_report_write(const goco_report* report, const char* dir) {
  if (!report) return null_argument("report");
  if (!dir) return null_argument("dir");
  return guarded([&] { goco::bench::write_artifacts(report->report, dir); });
}

goco_status goco_sweep(const char* config_json, const int* horizons, size_t count, const goco_run_options* options,
                       char** summary_json) {
  if (!config_json) return null_argument("config_json");
  if (!horizons && count > 0) return null_argument("horizons");
  if (!summary_json) return null_argument("summary_json");
  *summary_json = nullptr;
  return guarded([&] {
    if (count == 0) throw goco::Error(goco::ErrorCode::invalid_argument, "a sweep needs at least one horizon");
    const goco::bench::ExperimentConfig cfg = with_options(config_json, options);
    const goco::bench::SweepResult sweep =
        goco::bench::run_sweep(cfg, std::vector<int>(horizons, horizons + count));
    if (options && options->write_artifacts)
      for (const auto& r : sweep.reports) goco::bench::write_artifacts(r, cfg.output.dir);
    *summary_json = copy_string(goco::bench::sweep_json(sweep).dump(2));
  });
}

void goco_string_free(char* s) { std::free(s); }

goco_status goco_builtin_config(const char* name, char** config_json) {
  if (!name) return null_argument("name");
  if (!config_json) return null_argument("config_json");
  *config_json = nullptr;
  return guarded([&] { *config_json = copy_string(goco::bench::builtin_config(name).dump(2)); });
}

goco_status goco_verify(uint64_t seed, goco_check_callback callback, void* user, int* failures) {
  if (!failures) return null_argument("failures");
  return guarded([&] {
    int failed = 0;
    for (const goco::CheckResult& c : goco::run_verification(seed)) {
      if (!c.passed) ++failed;
      if (callback) callback(c.name.c_str(), c.passed ? 1 : 0, c.detail.c_str(), user);
    }
    *failures = failed;
  });
}

}  // extern "C"
