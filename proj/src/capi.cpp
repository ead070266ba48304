#include "scaledyn/scaledyn.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <vector>

#include "scaledyn/diagnostics.hpp"
#include "scaledyn/error.hpp"
#include "scaledyn/exp_integral.hpp"
#include "scaledyn/kepler.hpp"

struct sd_kepler {
  scaledyn::KeplerSystem sys;
};

struct sd_ground_state {
  scaledyn::KeplerSystem sys;
  scaledyn::GroundState state;
};

struct sd_report {
  scaledyn::ResidualReport report;
};

namespace {

thread_local char tl_error[512] = "";

void set_error(const char* msg) {
  std::strncpy(tl_error, msg, sizeof(tl_error) - 1);
  tl_error[sizeof(tl_error) - 1] = '\0';
}

sd_status null_pointer(const char* name) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "null pointer: %s", name);
  set_error(buf);
  return SD_ERR_NULL_POINTER;
}

template <class Fn>
sd_status guarded(Fn&& fn) {
  try {
    fn();
    tl_error[0] = '\0';
    return SD_OK;
  } catch (const scaledyn::DomainError& e) {
    set_error(e.what());
    return SD_ERR_DOMAIN;
  } catch (const scaledyn::InvalidArgument& e) {
    set_error(e.what());
    return SD_ERR_INVALID_ARGUMENT;
  } catch (const scaledyn::Unsupported& e) {
    set_error(e.what());
    return SD_ERR_UNSUPPORTED;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return SD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return SD_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return SD_ERR_INTERNAL;
  }
}

#define SD_CHECK_PTR(p) \
  do { if (!(p)) return null_pointer(#p); } while (0)

scaledyn::KeplerParameters to_params(const sd_kepler_params& p) {
  scaledyn::KeplerParameters out;
  out.G = p.G;
  out.M = p.M;
  out.m = p.m;
  out.Lambda = p.lambda;
  if (p.has_kconst) out.K = p.kconst;
  if (p.eta == 1)
    out.eta = scaledyn::EtaParameter::Value::plus_one;
  else if (p.eta == -1)
    out.eta = scaledyn::EtaParameter::Value::minus_one;
  else
    throw scaledyn::InvalidArgument("eta must be +1 or -1");
  return out;
}

}  // namespace

extern "C" {

const char* sd_version(void) { return SCALEDYN_VERSION_STRING; }

const char* sd_last_error(void) { return tl_error; }

const char* sd_status_string(sd_status status) {
  switch (status) {
    case SD_OK: return "ok";
    case SD_ERR_NULL_POINTER: return "null pointer";
    case SD_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SD_ERR_DOMAIN: return "domain error";
    case SD_ERR_UNSUPPORTED: return "unsupported";
    case SD_ERR_INDEX: return "index out of range";
    case SD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

sd_status sd_ei(double x, double* out) {
  SD_CHECK_PTR(out);
  return guarded([&] { *out = scaledyn::exp_integral(x); });
}

void sd_kepler_params_default(sd_kepler_params* params) {
  if (!params) return;
  *params = sd_kepler_params{1.0, 1.0, 1.0, 1.0, 0, 0.0, -1};
}

sd_status sd_kepler_create(const sd_kepler_params* params, sd_kepler** out) {
  SD_CHECK_PTR(params);
  SD_CHECK_PTR(out);
  *out = nullptr;
  return guarded([&] { *out = new sd_kepler{scaledyn::KeplerSystem(to_params(*params))}; });
}

void sd_kepler_destroy(sd_kepler* sys) { delete sys; }

sd_status sd_kepler_info_get(const sd_kepler* sys, sd_kepler_info* out) {
  SD_CHECK_PTR(sys);
  SD_CHECK_PTR(out);
  return guarded([&] {
    const auto& s = sys->sys;
    *out = sd_kepler_info{s.k(),  s.r0(), s.e0_paper(), s.e0_oracle(), s.K(), s.q(), scaledyn::orbital_speed(s),
                          s.linear_schrodinger() ? 1 : 0};
  });
}

sd_status sd_rotation_curve(const sd_kepler* sys, const double* r, size_t n, sd_rotation_row* rows) {
  SD_CHECK_PTR(sys);
  if (n == 0) return SD_OK;
  SD_CHECK_PTR(r);
  SD_CHECK_PTR(rows);
  return guarded([&] {
    const auto table = scaledyn::rotation_curve(sys->sys, std::vector<double>(r, r + n));
    for (size_t i = 0; i < n; ++i) {
      const auto& row = table[i];
      rows[i] = sd_rotation_row{row.r, row.v_kepler, row.v_scale, row.vsq.potential, row.vsq.extra, row.vsq.total};
    }
  });
}

sd_status sd_ground_state_create(const sd_kepler* sys, const sd_ground_state_options* options, sd_ground_state** out) {
  SD_CHECK_PTR(sys);
  SD_CHECK_PTR(out);
  *out = nullptr;
  return guarded([&] {
    std::optional<double> c1;
    double c2 = 0.0;
    if (options) {
      if (options->has_c1) c1 = options->c1;
      c2 = options->c2;
    }
    const auto& s = sys->sys;
    auto state = s.linear_schrodinger() ? scaledyn::sqrtP_linear(s, c1, c2) : scaledyn::sqrtP_nonlinear(s, c1, c2);
    *out = new sd_ground_state{s, std::move(state)};
  });
}

void sd_ground_state_destroy(sd_ground_state* state) { delete state; }

sd_status sd_ground_state_info_get(const sd_ground_state* state, sd_ground_state_info* out) {
  SD_CHECK_PTR(state);
  SD_CHECK_PTR(out);
  const auto& g = state->state;
  *out = sd_ground_state_info{g.kind == scaledyn::GroundStateKind::linear ? SD_GROUND_STATE_LINEAR
                                                                           : SD_GROUND_STATE_NONLINEAR,
                              g.c1, g.c2, g.r_lower, g.r_upper};
  return SD_OK;
}

sd_status sd_ground_state_evaluate(const sd_ground_state* state, double r, sd_ground_state_row* out) {
  SD_CHECK_PTR(state);
  SD_CHECK_PTR(out);
  return guarded([&] {
    if (!state->state.contains(r)) throw scaledyn::DomainError("radius outside the ground-state validity domain");
    *out = sd_ground_state_row{r, state->state.sqrt_p(r), scaledyn::u_add_from_density(state->sys, state->state.sqrt_p, r),
                               scaledyn::u_add_closed(state->sys, r)};
  });
}

sd_status sd_virial_balance(const sd_ground_state* state, const double* r, size_t n, sd_virial_row* rows) {
  SD_CHECK_PTR(state);
  if (n == 0) return SD_OK;
  SD_CHECK_PTR(r);
  SD_CHECK_PTR(rows);
  return guarded([&] {
    const auto table = scaledyn::virial_balance(state->sys, state->state, std::vector<double>(r, r + n));
    for (size_t i = 0; i < n; ++i) {
      const auto& row = table[i];
      rows[i] = sd_virial_row{row.r, row.two_k_real, row.gamma_u, row.lambda_m_divv_real, row.residual};
    }
  });
}

sd_status sd_residual_report_create(const sd_kepler* sys, const double* r, size_t n, double energy_factor,
                                    sd_report** out) {
  SD_CHECK_PTR(sys);
  SD_CHECK_PTR(out);
  *out = nullptr;
  if (n > 0) SD_CHECK_PTR(r);
  return guarded([&] {
    scaledyn::ResidualOptions options;
    options.energy_factor = energy_factor;
    *out = new sd_report{scaledyn::residual_report(sys->sys, std::vector<double>(r, r + n), options)};
  });
}

void sd_residual_report_destroy(sd_report* report) { delete report; }

sd_status sd_residual_report_size(const sd_report* report, size_t* out) {
  SD_CHECK_PTR(report);
  SD_CHECK_PTR(out);
  *out = report->report.entries.size();
  return SD_OK;
}

sd_status sd_residual_report_entry(const sd_report* report, size_t index, sd_residual_entry* out) {
  SD_CHECK_PTR(report);
  SD_CHECK_PTR(out);
  if (index >= report->report.entries.size()) {
    set_error("residual entry index out of range");
    return SD_ERR_INDEX;
  }
  const auto& e = report->report.entries[index];
  *out = sd_residual_entry{e.name.c_str(), e.max_abs_residual, e.tolerance, e.passed() ? 1 : 0};
  return SD_OK;
}

sd_status sd_residual_report_passed(const sd_report* report, int* out) {
  SD_CHECK_PTR(report);
  SD_CHECK_PTR(out);
  *out = report->report.passed() ? 1 : 0;
  return SD_OK;
}

sd_status sd_residual_report_radii(const sd_report* report, size_t* out) {
  SD_CHECK_PTR(report);
  SD_CHECK_PTR(out);
  *out = report->report.radii.size();
  return SD_OK;
}

}  // extern "C"
