// SPDX-License-Identifier: Apache-2.0
#include "evrg.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "evrg/attraction.hpp"
#include "evrg/distribution.hpp"
#include "evrg/mc.hpp"
#include "evrg/perturbation.hpp"
#include "evrg/rescaling.hpp"
#include "evrg/rg.hpp"

namespace {

thread_local std::string g_last_error;

evrg_status to_status(evrg::Errc code) {
  switch (code) {
    case evrg::Errc::invalid_argument: return EVRG_ERR_INVALID_ARGUMENT;
    case evrg::Errc::unknown_id: return EVRG_ERR_UNKNOWN_ID;
    case evrg::Errc::domain: return EVRG_ERR_DOMAIN;
    case evrg::Errc::support_mismatch: return EVRG_ERR_SUPPORT_MISMATCH;
    case evrg::Errc::no_convergence: return EVRG_ERR_NO_CONVERGENCE;
    case evrg::Errc::extraction: return EVRG_ERR_EXTRACTION;
    case evrg::Errc::unsupported: return EVRG_ERR_UNSUPPORTED;
    case evrg::Errc::internal: return EVRG_ERR_INTERNAL;
  }
  return EVRG_ERR_INTERNAL;
}

template <class Fn>
evrg_status guarded(Fn&& fn) {
  try {
    fn();
    return EVRG_OK;
  } catch (const evrg::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EVRG_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EVRG_ERR_INTERNAL;
  }
}

evrg_status require(bool ok, const char* message) {
  if (ok) return EVRG_OK;
  g_last_error = message;
  return EVRG_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct evrg_dist {
  evrg::Distribution value;
};
struct evrg_group {
  evrg::RescalingGroup value;
};
struct evrg_expansion {
  evrg::PerturbationExpansion value;
};
struct evrg_series {
  evrg::CorrectionSeries value;
};
struct evrg_density {
  evrg::PredictionDensity value;
};
struct evrg_result {
  evrg::ExperimentResult value;
};

extern "C" {

const char* evrg_version(void) { return "0.1.0"; }

const char* evrg_status_name(evrg_status status) {
  switch (status) {
    case EVRG_OK: return "ok";
    case EVRG_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case EVRG_ERR_UNKNOWN_ID: return "unknown-id";
    case EVRG_ERR_DOMAIN: return "domain";
    case EVRG_ERR_SUPPORT_MISMATCH: return "support-mismatch";
    case EVRG_ERR_NO_CONVERGENCE: return "no-convergence";
    case EVRG_ERR_EXTRACTION: return "extraction";
    case EVRG_ERR_UNSUPPORTED: return "unsupported";
    case EVRG_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* evrg_last_error(void) { return g_last_error.c_str(); }

/* ---------------- distributions ---------------- */

evrg_status evrg_dist_open(const char* id, evrg_dist** out) {
  if (auto st = require(id && out, "evrg_dist_open: null argument")) return st;
  return guarded([&] { *out = new evrg_dist{evrg::make_distribution(id)}; });
}

void evrg_dist_close(evrg_dist* d) { delete d; }

evrg_status evrg_dist_support(const evrg_dist* d, double* lower, double* upper) {
  if (auto st = require(d != nullptr, "evrg_dist_support: null handle")) return st;
  const auto sup = d->value.support();
  if (lower) *lower = sup.lower;
  if (upper) *upper = sup.upper;
  return EVRG_OK;
}

evrg_status evrg_dist_cdf(const evrg_dist* d, double x, double* out) {
  if (auto st = require(d && out, "evrg_dist_cdf: null argument")) return st;
  return guarded([&] { *out = d->value.cdf(x); });
}

evrg_status evrg_dist_pdf(const evrg_dist* d, double x, double* out) {
  if (auto st = require(d && out, "evrg_dist_pdf: null argument")) return st;
  return guarded([&] { *out = d->value.pdf(x); });
}

evrg_status evrg_dist_survival(const evrg_dist* d, double x, double* out) {
  if (auto st = require(d && out, "evrg_dist_survival: null argument")) return st;
  return guarded([&] { *out = d->value.survival(x); });
}

evrg_status evrg_dist_quantile(const evrg_dist* d, double p, double* out) {
  if (auto st = require(d && out, "evrg_dist_quantile: null argument")) return st;
  return guarded([&] { *out = d->value.quantile(p); });
}

/* ---------------- groups ---------------- */

evrg_status evrg_group_open(const char* id, evrg_group** out) {
  if (auto st = require(id && out, "evrg_group_open: null argument")) return st;
  return guarded([&] { *out = new evrg_group{evrg::make_group(id)}; });
}

void evrg_group_close(evrg_group* g) { delete g; }

evrg_status evrg_group_map(const evrg_group* g, double s, double x, double* out) {
  if (auto st = require(g && out, "evrg_group_map: null argument")) return st;
  return guarded([&] { *out = evrg::rescale(g->value, s, x); });
}

evrg_status evrg_group_generator(const evrg_group* g, double x, double* out) {
  if (auto st = require(g && out, "evrg_group_generator: null argument")) return st;
  return guarded([&] { *out = evrg::generator(g->value, x); });
}

evrg_status evrg_dist_transform(const evrg_dist* d, const evrg_group* g, double n,
                                evrg_dist** out) {
  if (auto st = require(d && g && out, "evrg_dist_transform: null argument")) return st;
  if (auto st = require(n >= 1.0 && std::isfinite(n),
                        "evrg_dist_transform: n must be finite and >= 1"))
    return st;
  return guarded([&] {
    *out = new evrg_dist{evrg::rg_transform(g->value, std::log(n), d->value)};
  });
}

/* ---------------- classification ---------------- */

evrg_status evrg_classify(const evrg_dist* d, evrg_verdict* out) {
  if (auto st = require(d && out, "evrg_classify: null argument")) return st;
  return guarded([&] {
    const auto v = evrg::classify(d->value);
    std::memset(out, 0, sizeof(*out));
    out->converges = v.converges ? 1 : 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out->alpha = v.alpha_hat.value_or(nan);
    out->lambda = v.lambda_hat.value_or(nan);
    out->n_probes = std::min<size_t>(v.diagnostics.size(), EVRG_MAX_PROBES);
    for (size_t i = 0; i < out->n_probes; ++i) {
      out->probe_x[i] = v.diagnostics[i].first;
      out->probe_ratio[i] = v.diagnostics[i].second;
    }
    std::snprintf(out->note, sizeof(out->note), "%s", v.note.c_str());
  });
}

/* ---------------- perturbation ---------------- */

evrg_status evrg_expand(const evrg_dist* d, double alpha, double lambda, int max_order,
                        evrg_expansion** out) {
  if (auto st = require(d && out, "evrg_expand: null argument")) return st;
  return guarded([&] {
    const evrg::FixedPoint fp(evrg::Case::two, alpha, lambda);
    *out = new evrg_expansion{
        evrg::extract_expansion(d->value, fp, max_order)};
  });
}

void evrg_expansion_close(evrg_expansion* e) { delete e; }

size_t evrg_expansion_size(const evrg_expansion* e) {
  return e ? e->value.terms.size() : 0;
}

evrg_status evrg_expansion_term(const evrg_expansion* e, size_t i, double* beta,
                                double* coeff) {
  if (auto st = require(e != nullptr, "evrg_expansion_term: null handle")) return st;
  if (i >= e->value.terms.size()) {
    g_last_error = "evrg_expansion_term: index out of range";
    return EVRG_ERR_INVALID_ARGUMENT;
  }
  if (beta) *beta = e->value.terms[i].first;
  if (coeff) *coeff = e->value.terms[i].second;
  return EVRG_OK;
}

evrg_status evrg_eigenvalue(double beta, double alpha, double n, double* out) {
  if (auto st = require(out != nullptr, "evrg_eigenvalue: null output")) return st;
  return guarded([&] { *out = evrg::eigenvalue(beta, alpha, n); });
}

evrg_status evrg_predict(const evrg_expansion* e, double target_order,
                         evrg_series** out) {
  if (auto st = require(e && out, "evrg_predict: null argument")) return st;
  return guarded([&] {
    const auto target = evrg::Rational::from_double(target_order, 64);
    if (!target)
      evrg::fail(evrg::Errc::invalid_argument,
                 "target order must be a small rational (e.g. 0.5, 1, 1.5)");
    *out = new evrg_series{evrg::predict_corrections(e->value, *target)};
  });
}

void evrg_series_close(evrg_series* s) { delete s; }

size_t evrg_series_size(const evrg_series* s) { return s ? s->value.terms().size() : 0; }

evrg_status evrg_series_order(const evrg_series* s, size_t k, double* exponent,
                              double* amplitude) {
  if (auto st = require(s != nullptr, "evrg_series_order: null handle")) return st;
  if (k >= s->value.terms().size()) {
    g_last_error = "evrg_series_order: index out of range";
    return EVRG_ERR_INVALID_ARGUMENT;
  }
  if (exponent) *exponent = s->value.terms()[k].exponent.value();
  if (amplitude) *amplitude = s->value.terms()[k].amplitude;
  return EVRG_OK;
}

evrg_status evrg_series_delta_term(const evrg_series* s, size_t k, double x,
                                   double* out) {
  if (auto st = require(s && out, "evrg_series_delta_term: null argument")) return st;
  if (k >= s->value.terms().size()) {
    g_last_error = "evrg_series_delta_term: index out of range";
    return EVRG_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] { *out = s->value.delta_term(k, x); });
}

evrg_status evrg_series_delta(const evrg_series* s, double n, double x, double* out) {
  if (auto st = require(s && out, "evrg_series_delta: null argument")) return st;
  return guarded([&] { *out = s->value.delta(n, x); });
}

evrg_status evrg_series_amplitude(const evrg_series* s, double n, double* out) {
  if (auto st = require(s && out, "evrg_series_amplitude: null argument")) return st;
  return guarded([&] { *out = s->value.amplitude(n); });
}

/* ---------------- prediction densities ---------------- */

evrg_status evrg_density_from_dist(const evrg_dist* d, evrg_density** out) {
  if (auto st = require(d && out, "evrg_density_from_dist: null argument")) return st;
  return guarded([&] { *out = new evrg_density{evrg::prediction_from(d->value)}; });
}

evrg_status evrg_density_from_series(const evrg_series* s, double n, evrg_density** out) {
  if (auto st = require(s && out, "evrg_density_from_series: null argument")) return st;
  if (auto st = require(n >= 1.0, "evrg_density_from_series: n must be >= 1")) return st;
  return guarded([&] { *out = new evrg_density{evrg::prediction_from(s->value, n)}; });
}

void evrg_density_close(evrg_density* d) { delete d; }

evrg_status evrg_density_value(const evrg_density* d, double x, double* out) {
  if (auto st = require(d && out, "evrg_density_value: null argument")) return st;
  return guarded([&] { *out = d->value.value(x); });
}

evrg_status evrg_density_mass(const evrg_density* d, double lo, double hi, double* out) {
  if (auto st = require(d && out, "evrg_density_mass: null argument")) return st;
  return guarded([&] { *out = d->value.mass_below(hi) - d->value.mass_below(lo); });
}

/* ---------------- Monte Carlo ---------------- */

evrg_status evrg_simulate(const evrg_sim_config* config, evrg_result** out) {
  if (auto st = require(config && out && config->dist_id,
                        "evrg_simulate: null argument"))
    return st;
  return guarded([&] {
    evrg::ExperimentConfig c;
    c.dist_id = config->dist_id;
    c.block_size = config->block_size;
    c.replicas = config->replicas;
    c.bins = config->bins > 0 ? config->bins : 50;
    c.seed = config->seed;
    c.chunk_size = config->chunk_size > 0 ? config->chunk_size : 65536;
    c.workers = config->workers;
    *out = new evrg_result{evrg::run_experiment(c)};
  });
}

void evrg_result_close(evrg_result* r) { delete r; }

size_t evrg_result_bins(const evrg_result* r) { return r ? r->value.density.size() : 0; }

evrg_status evrg_result_bin(const evrg_result* r, size_t i, double* lo, double* hi,
                            double* density, double* std_error) {
  if (auto st = require(r != nullptr, "evrg_result_bin: null handle")) return st;
  if (i >= r->value.density.size()) {
    g_last_error = "evrg_result_bin: index out of range";
    return EVRG_ERR_INVALID_ARGUMENT;
  }
  if (lo) *lo = r->value.bin_edges[i];
  if (hi) *hi = r->value.bin_edges[i + 1];
  if (density) *density = r->value.density[i];
  if (std_error) *std_error = r->value.std_error[i];
  return EVRG_OK;
}

evrg_status evrg_result_count(const evrg_result* r, size_t i, uint64_t* count) {
  if (auto st = require(r && count, "evrg_result_count: null argument")) return st;
  if (i >= r->value.counts.size()) {
    g_last_error = "evrg_result_count: index out of range";
    return EVRG_ERR_INVALID_ARGUMENT;
  }
  *count = r->value.counts[i];
  return EVRG_OK;
}

evrg_status evrg_result_from_bins(const double* lo, const double* hi,
                                  const double* density, const double* std_error,
                                  size_t bins, uint64_t block_size, uint64_t replicas,
                                  evrg_result** out) {
  if (auto st = require(lo && hi && density && std_error && out && bins > 0,
                        "evrg_result_from_bins: null argument or zero bins"))
    return st;
  return guarded([&] {
    evrg::ExperimentResult r;
    r.config.block_size = block_size;
    r.config.replicas = replicas;
    r.config.bins = static_cast<int>(bins);
    r.bin_edges.resize(bins + 1);
    for (size_t b = 0; b < bins; ++b) {
      if (b > 0 && lo[b] != hi[b - 1])
        evrg::fail(evrg::Errc::invalid_argument, "bins must be contiguous");
      r.bin_edges[b] = lo[b];
    }
    r.bin_edges[bins] = hi[bins - 1];
    r.density.assign(density, density + bins);
    r.std_error.assign(std_error, std_error + bins);
    r.counts.assign(bins, 0);
    *out = new evrg_result{std::move(r)};
  });
}

evrg_status evrg_compare(const evrg_result* r, const evrg_density* prediction,
                         double scale_exponent, double* bin_mid, double* observed,
                         double* predicted, double* scaled_residual, double* z,
                         double* l1_total) {
  if (auto st = require(r && prediction, "evrg_compare: null argument")) return st;
  return guarded([&] {
    const auto table = evrg::compare(r->value, prediction->value, scale_exponent);
    for (size_t b = 0; b < table.rows.size(); ++b) {
      const auto& row = table.rows[b];
      if (bin_mid) bin_mid[b] = row.bin_mid;
      if (observed) observed[b] = row.observed;
      if (predicted) predicted[b] = row.predicted;
      if (scaled_residual) scaled_residual[b] = row.scaled_residual;
      if (z) z[b] = row.z;
    }
    if (l1_total) *l1_total = table.l1;
  });
}

} /* extern "C" */
