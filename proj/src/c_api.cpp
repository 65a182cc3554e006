#include "fbel/fbel.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "fbel/error.hpp"
#include "fbel/fd_oracle.hpp"
#include "fbel/frac_core.hpp"
#include "fbel/run.hpp"

struct fbel_config {
  fbel::RunConfig cfg;
};

struct fbel_result {
  fbel::RunReport report;
};

namespace {

thread_local std::string last_error;

fbel_status status_of(fbel::ErrorKind kind) {
  switch (kind) {
    case fbel::ErrorKind::invalid_argument: return FBEL_ERR_INVALID_ARGUMENT;
    case fbel::ErrorKind::domain: return FBEL_ERR_DOMAIN;
    case fbel::ErrorKind::numerical: return FBEL_ERR_NUMERICAL;
    case fbel::ErrorKind::parse: return FBEL_ERR_PARSE;
    case fbel::ErrorKind::io: return FBEL_ERR_IO;
  }
  return FBEL_ERR_INTERNAL;
}

template <class F>
fbel_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FBEL_OK;
  } catch (const fbel::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FBEL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FBEL_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return FBEL_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw fbel::InvalidArgument(std::string(what) + " is NULL");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

extern "C" {

const char* fbel_last_error(void) { return last_error.c_str(); }

const char* fbel_status_name(fbel_status status) {
  switch (status) {
    case FBEL_OK: return "ok";
    case FBEL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FBEL_ERR_DOMAIN: return "domain error";
    case FBEL_ERR_NUMERICAL: return "numerical error";
    case FBEL_ERR_PARSE: return "parse error";
    case FBEL_ERR_IO: return "i/o error";
    case FBEL_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fbel_version(void) { return "1.0.0"; }

fbel_status fbel_config_create(fbel_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new fbel_config();
  });
}

void fbel_config_destroy(fbel_config* config) { delete config; }

fbel_status fbel_config_set(fbel_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->cfg.set(key, value);
  });
}

fbel_status fbel_config_load(fbel_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->cfg.merge_file(path);
  });
}

fbel_status fbel_config_resolved(const fbel_config* config, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    require(config, "config");
    const std::string text = config->cfg.resolved();
    if (needed) *needed = text.size() + 1;
    if (buffer && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

fbel_status fbel_run(const fbel_config* config, fbel_result** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = nullptr;
    auto* r = new fbel_result();
    try {
      r->report = fbel::run(config->cfg);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

void fbel_result_destroy(fbel_result* result) { delete result; }

size_t fbel_result_row_count(const fbel_result* result) { return result ? result->report.rows.size() : 0; }

fbel_status fbel_result_row(const fbel_result* result, size_t index, fbel_row* row) {
  return guarded([&] {
    require(result, "result");
    require(row, "row");
    if (index >= result->report.rows.size()) throw fbel::InvalidArgument("row index out of range");
    const fbel::ResultRow& r = result->report.rows[index];
    row->quantity = r.quantity.c_str();
    row->component = r.component.c_str();
    row->estimate = r.estimate;
    row->std_error = r.std_error.value_or(kNaN);
    row->n_paths = r.n_paths;
    row->target = r.target.value_or(kNaN);
    row->tolerance = r.tolerance.value_or(kNaN);
    row->pass = r.pass ? (*r.pass ? 1 : 0) : -1;
  });
}

size_t fbel_result_advisory_count(const fbel_result* result) {
  return result ? result->report.advisories.size() : 0;
}

const char* fbel_result_advisory(const fbel_result* result, size_t index) {
  if (!result || index >= result->report.advisories.size()) return nullptr;
  return result->report.advisories[index].c_str();
}

const char* fbel_result_results_path(const fbel_result* result) {
  return result ? result->report.results_path.c_str() : nullptr;
}

const char* fbel_result_config_path(const fbel_result* result) {
  return result ? result->report.config_path.c_str() : nullptr;
}

int fbel_result_failed(const fbel_result* result) { return result && result->report.failed ? 1 : 0; }

fbel_status fbel_cov_rh(double h, double t, double s, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fbel::cov_rh(fbel::HurstParam(h), t, s);
  });
}

fbel_status fbel_kernel_kh(double h, double t, double s, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fbel::kernel_kh(fbel::HurstParam(h), t, s);
  });
}

fbel_status fbel_c_h(double h, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fbel::c_h(fbel::HurstParam(h));
  });
}

fbel_status fbel_big_c_h(double h, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fbel::big_c_h(fbel::HurstParam(h));
  });
}

fbel_status fbel_gaussian_digital_delta(double x, double strike, double horizon, double h, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = fbel::gaussian_digital_delta(x, strike, horizon, fbel::HurstParam(h));
  });
}

}  // extern "C"
