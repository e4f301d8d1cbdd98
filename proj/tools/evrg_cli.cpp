// SPDX-License-Identifier: Apache-2.0
//
// evrg command line: transform, classify, expand, predict, simulate, compare.
// Tabular output is CSV with a one-line header; verdicts and expansions are
// JSON. Every output file gets a <file>.manifest.json that reproduces the run.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evrg.h"
#include "json.hpp"

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void die(evrg_status status, const std::string& message) {
  json err{{"error", {{"status", evrg_status_name(status)},
                      {"code", static_cast<int>(status)},
                      {"message", message}}}};
  std::cerr << err.dump() << "\n";
  std::exit(static_cast<int>(status));
}

void check(evrg_status status) {
  if (status != EVRG_OK) die(status, evrg_last_error());
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string resolve_out(const std::string& out, const std::string& subcommand,
                        const char* extension) {
  if (!out.empty()) return out;
  std::string dir;
  if (const char* env = std::getenv("EVRG_OUT_DIR")) dir = env;
  if (!dir.empty() && dir.back() != '/') dir += '/';
  return dir + subcommand + extension;
}

void write_manifest(const std::string& out_path, const std::string& subcommand,
                    const json& parameters, std::optional<std::uint64_t> seed) {
  json manifest{{"subcommand", subcommand},
                {"parameters", parameters},
                {"tool_version", evrg_version()},
                {"timestamp", timestamp_utc()}};
  if (seed) manifest["seed"] = *seed;
  std::ofstream f(out_path + ".manifest.json");
  f << manifest.dump(2) << "\n";
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) die(EVRG_ERR_INVALID_ARGUMENT, "cannot open output file " + path);
  f << body;
}

template <class T, void (*Close)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  Handle& operator=(Handle&& o) noexcept {
    if (this != &o) {
      if (p) Close(p);
      p = o.p;
      o.p = nullptr;
    }
    return *this;
  }
  ~Handle() {
    if (p) Close(p);
  }
};

using DistHandle = Handle<evrg_dist, evrg_dist_close>;
using GroupHandle = Handle<evrg_group, evrg_group_close>;
using ExpansionHandle = Handle<evrg_expansion, evrg_expansion_close>;
using SeriesHandle = Handle<evrg_series, evrg_series_close>;
using DensityHandle = Handle<evrg_density, evrg_density_close>;
using ResultHandle = Handle<evrg_result, evrg_result_close>;

evrg_verdict classify_or_die(evrg_dist* dist) {
  evrg_verdict verdict;
  check(evrg_classify(dist, &verdict));
  if (!verdict.converges)
    die(EVRG_ERR_NO_CONVERGENCE,
        std::string("distribution does not classify into a compact-family fixed point: ") +
            verdict.note);
  return verdict;
}

// -------------------------------------------------------------------------
// transform
// -------------------------------------------------------------------------
int cmd_transform(const std::string& dist_id, const std::string& group_id, double n,
                  int grid, std::string out) {
  DistHandle dist;
  check(evrg_dist_open(dist_id.c_str(), &dist.p));
  GroupHandle group;
  check(evrg_group_open(group_id.c_str(), &group.p));
  DistHandle transformed;
  check(evrg_dist_transform(dist.p, group.p, n, &transformed.p));

  double lo, hi;
  check(evrg_dist_support(transformed.p, &lo, &hi));
  if (!std::isfinite(lo)) check(evrg_dist_quantile(transformed.p, 1e-3, &lo));
  if (!std::isfinite(hi)) check(evrg_dist_quantile(transformed.p, 1.0 - 1e-3, &hi));

  std::ostringstream csv;
  csv << "x,cdf,pdf\n";
  for (int i = 0; i < grid; ++i) {
    const double x = grid == 1 ? lo : lo + (hi - lo) * i / (grid - 1);
    double c, p;
    check(evrg_dist_cdf(transformed.p, x, &c));
    check(evrg_dist_pdf(transformed.p, x, &p));
    csv << fmt(x) << ',' << fmt(c) << ',' << fmt(p) << '\n';
  }
  out = resolve_out(out, "transform", ".csv");
  write_file(out, csv.str());
  write_manifest(out, "transform",
                 {{"dist", dist_id}, {"group", group_id}, {"n", n}, {"grid", grid}},
                 std::nullopt);
  std::cout << out << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// classify
// -------------------------------------------------------------------------
int cmd_classify(const std::string& dist_id, std::string out) {
  DistHandle dist;
  check(evrg_dist_open(dist_id.c_str(), &dist.p));
  evrg_verdict verdict;
  check(evrg_classify(dist.p, &verdict));

  json diagnostics = json::array();
  for (size_t i = 0; i < verdict.n_probes; ++i)
    diagnostics.push_back({{"x", verdict.probe_x[i]}, {"ratio", verdict.probe_ratio[i]}});
  json doc{{"dist", dist_id},
           {"converges", verdict.converges != 0},
           {"diagnostics", diagnostics}};
  if (verdict.converges) {
    doc["case"] = "case2";
    doc["alpha"] = verdict.alpha;
    doc["lambda"] = verdict.lambda;
  } else {
    doc["note"] = verdict.note;
    if (std::isfinite(verdict.alpha)) doc["alpha"] = verdict.alpha;
  }
  const std::string body = doc.dump(2) + "\n";
  if (out == "-") {
    std::cout << body;
    return 0;
  }
  out = resolve_out(out, "classify", ".json");
  write_file(out, body);
  write_manifest(out, "classify", {{"dist", dist_id}}, std::nullopt);
  std::cout << body;
  return 0;
}

// -------------------------------------------------------------------------
// expand
// -------------------------------------------------------------------------
int cmd_expand(const std::string& dist_id, double alpha, double lambda, int order,
               std::string out) {
  DistHandle dist;
  check(evrg_dist_open(dist_id.c_str(), &dist.p));
  if (std::isnan(alpha) || std::isnan(lambda)) {
    const evrg_verdict verdict = classify_or_die(dist.p);
    if (std::isnan(alpha)) alpha = verdict.alpha;
    if (std::isnan(lambda)) lambda = verdict.lambda;
  }
  ExpansionHandle expansion;
  check(evrg_expand(dist.p, alpha, lambda, order, &expansion.p));

  json terms = json::array();
  for (size_t i = 0; i < evrg_expansion_size(expansion.p); ++i) {
    double beta, coeff;
    check(evrg_expansion_term(expansion.p, i, &beta, &coeff));
    terms.push_back({{"beta", beta}, {"coeff", coeff}});
  }
  json doc{{"dist", dist_id},
           {"fixed_point", {{"case", "case2"}, {"alpha", alpha}, {"lambda", lambda}}},
           {"max_order", order},
           {"terms", terms}};
  const std::string body = doc.dump(2) + "\n";
  if (out == "-") {
    std::cout << body;
    return 0;
  }
  out = resolve_out(out, "expand", ".json");
  write_file(out, body);
  write_manifest(out, "expand",
                 {{"dist", dist_id}, {"alpha", alpha}, {"lambda", lambda}, {"order", order}},
                 std::nullopt);
  std::cout << body;
  return 0;
}

// -------------------------------------------------------------------------
// predict
// -------------------------------------------------------------------------
SeriesHandle make_series(evrg_dist* dist, double alpha, double lambda, double order) {
  // extraction depth: every single term with (beta - alpha)/alpha <= order
  const int depth = static_cast<int>(std::ceil(alpha * (order + 1.0) - 1e-9));
  ExpansionHandle expansion;
  check(evrg_expand(dist, alpha, lambda, depth, &expansion.p));
  SeriesHandle series;
  check(evrg_predict(expansion.p, order, &series.p));
  return series;
}

int cmd_predict(const std::string& dist_id, double alpha, double lambda, double order,
                const std::string& n_grid, double shape_at, int grid, std::string out) {
  DistHandle dist;
  check(evrg_dist_open(dist_id.c_str(), &dist.p));
  if (std::isnan(alpha) || std::isnan(lambda)) {
    const evrg_verdict verdict = classify_or_die(dist.p);
    if (std::isnan(alpha)) alpha = verdict.alpha;
    if (std::isnan(lambda)) lambda = verdict.lambda;
  }
  SeriesHandle series = make_series(dist.p, alpha, lambda, order);

  const size_t k = evrg_series_size(series.p);
  std::vector<double> exponents(k), amplitudes(k);
  for (size_t i = 0; i < k; ++i)
    check(evrg_series_order(series.p, i, &exponents[i], &amplitudes[i]));

  std::ostringstream csv;
  if (shape_at > 0) {
    // x -> delta_pred(x) at fixed n, one column per order
    csv << "x,delta_pred";
    for (size_t i = 0; i < k; ++i) csv << ",delta_p" << fmt(exponents[i]);
    csv << '\n';
    for (int i = 1; i <= grid; ++i) {
      const double x = static_cast<double>(i) / (grid + 1);
      double total;
      check(evrg_series_delta(series.p, shape_at, x, &total));
      csv << fmt(x) << ',' << fmt(total);
      for (size_t j = 0; j < k; ++j) {
        double term;
        check(evrg_series_delta_term(series.p, j, x, &term));
        csv << ',' << fmt(term);
      }
      csv << '\n';
    }
  } else {
    // n -> Delta_pred(n); the c*_estimate column for order k converges to
    // the amplitude coefficient c_k as n grows
    double lo = 100, hi = 100000;
    int count = 25;
    if (!n_grid.empty() &&
        std::sscanf(n_grid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) < 2)
      die(EVRG_ERR_INVALID_ARGUMENT, "--n-grid must look like lo:hi or lo:hi:count");
    if (!(lo >= 1) || !(hi > lo) || count < 2)
      die(EVRG_ERR_INVALID_ARGUMENT, "--n-grid needs 1 <= lo < hi and count >= 2");
    csv << "n,delta_pred";
    for (size_t i = 0; i < k; ++i) csv << ",c" << (i + 1) << "_estimate";
    csv << '\n';
    for (int i = 0; i < count; ++i) {
      const double n =
          std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1));
      double total;
      check(evrg_series_amplitude(series.p, n, &total));
      csv << fmt(n) << ',' << fmt(total);
      double remainder = total;
      for (size_t j = 0; j < k; ++j) {
        csv << ',' << fmt(remainder * std::pow(n, exponents[j]));
        remainder -= amplitudes[j] * std::pow(n, -exponents[j]);
      }
      csv << '\n';
    }
  }
  out = resolve_out(out, "predict", ".csv");
  write_file(out, csv.str());
  json params{{"dist", dist_id}, {"alpha", alpha},        {"lambda", lambda},
              {"order", order},  {"shape_at", shape_at},  {"grid", grid},
              {"n_grid", n_grid}};
  json amps = json::array();
  for (size_t i = 0; i < k; ++i)
    amps.push_back({{"exponent", exponents[i]}, {"amplitude", amplitudes[i]}});
  params["amplitudes"] = amps;
  write_manifest(out, "predict", params, std::nullopt);
  std::cout << out << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// simulate
// -------------------------------------------------------------------------
int cmd_simulate(const std::string& dist_id, std::uint64_t n, std::uint64_t replicas,
                 int bins, std::uint64_t seed, std::uint64_t chunk_size, int workers,
                 std::string out) {
  evrg_sim_config config{dist_id.c_str(), n, replicas, bins, seed, chunk_size, workers};
  ResultHandle result;
  check(evrg_simulate(&config, &result.p));

  std::ostringstream csv;
  csv << "bin_lo,bin_hi,density,stderr\n";
  for (size_t b = 0; b < evrg_result_bins(result.p); ++b) {
    double lo, hi, density, se;
    check(evrg_result_bin(result.p, b, &lo, &hi, &density, &se));
    csv << fmt(lo) << ',' << fmt(hi) << ',' << fmt(density) << ',' << fmt(se) << '\n';
  }
  out = resolve_out(out, "simulate", ".csv");
  write_file(out, csv.str());
  write_manifest(out, "simulate",
                 {{"dist", dist_id},
                  {"n", n},
                  {"replicas", replicas},
                  {"bins", bins},
                  {"seed", seed},
                  {"chunk_size", chunk_size}},
                 seed);
  std::cout << out << "\n";
  return 0;
}

// -------------------------------------------------------------------------
// compare
// -------------------------------------------------------------------------
struct LoadedResult {
  std::vector<double> lo, hi, density, se;
};

LoadedResult read_result_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) die(EVRG_ERR_INVALID_ARGUMENT, "cannot open result file " + path);
  LoadedResult r;
  std::string line;
  std::getline(f, line);  // header
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    double a, b, c, d;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
      die(EVRG_ERR_INVALID_ARGUMENT, "malformed result row: " + line);
    r.lo.push_back(a);
    r.hi.push_back(b);
    r.density.push_back(c);
    r.se.push_back(d);
  }
  if (r.lo.empty()) die(EVRG_ERR_INVALID_ARGUMENT, "empty result file " + path);
  return r;
}

std::optional<std::uint64_t> manifest_parameter(const std::string& result_path,
                                                const char* key) {
  std::ifstream f(result_path + ".manifest.json");
  if (!f) return std::nullopt;
  try {
    json manifest = json::parse(f);
    return manifest.at("parameters").at(key).get<std::uint64_t>();
  } catch (...) {
    return std::nullopt;
  }
}

int cmd_compare(const std::string& result_path, const std::string& prediction,
                const std::string& dist_id, double n_override, double scale_exponent,
                std::string out) {
  const LoadedResult loaded = read_result_csv(result_path);

  double n = n_override;
  if (!(n > 0)) {
    if (auto from_manifest = manifest_parameter(result_path, "n"))
      n = static_cast<double>(*from_manifest);
    else
      die(EVRG_ERR_INVALID_ARGUMENT,
          "block size unknown: no manifest next to the result file, pass --n");
  }
  const std::uint64_t replicas =
      manifest_parameter(result_path, "replicas").value_or(0);

  ResultHandle result;
  check(evrg_result_from_bins(loaded.lo.data(), loaded.hi.data(), loaded.density.data(),
                              loaded.se.data(), loaded.lo.size(),
                              static_cast<std::uint64_t>(n), replicas, &result.p));

  DistHandle dist;
  check(evrg_dist_open(dist_id.c_str(), &dist.p));

  DensityHandle density;
  DistHandle fixed, transformed;
  GroupHandle group;
  SeriesHandle series;
  if (prediction == "exact") {
    const evrg_verdict verdict = classify_or_die(dist.p);
    const std::string gid = "case2:alpha=" + fmt(verdict.alpha);
    check(evrg_group_open(gid.c_str(), &group.p));
    check(evrg_dist_transform(dist.p, group.p, n, &transformed.p));
    check(evrg_density_from_dist(transformed.p, &density.p));
  } else if (prediction == "fixed-point") {
    const evrg_verdict verdict = classify_or_die(dist.p);
    const std::string fid =
        "fixed:case2:alpha=" + fmt(verdict.alpha) + ":lambda=" + fmt(verdict.lambda);
    check(evrg_dist_open(fid.c_str(), &fixed.p));
    check(evrg_density_from_dist(fixed.p, &density.p));
  } else if (prediction.rfind("perturbative:", 0) == 0) {
    const double order = std::atof(prediction.c_str() + 13);
    if (!(order > 0))
      die(EVRG_ERR_INVALID_ARGUMENT, "--prediction perturbative:<order> needs order > 0");
    const evrg_verdict verdict = classify_or_die(dist.p);
    series = make_series(dist.p, verdict.alpha, verdict.lambda, order);
    check(evrg_density_from_series(series.p, n, &density.p));
  } else {
    die(EVRG_ERR_INVALID_ARGUMENT,
        "--prediction must be exact, fixed-point or perturbative:<order>");
  }

  const size_t bins = evrg_result_bins(result.p);
  std::vector<double> mid(bins), obs(bins), pred(bins), scaled(bins), z(bins);
  double l1 = 0;
  check(evrg_compare(result.p, density.p, scale_exponent, mid.data(), obs.data(),
                     pred.data(), scaled.data(), z.data(), &l1));

  std::ostringstream csv;
  csv << "bin_mid,observed,predicted,scaled_residual,z\n";
  for (size_t b = 0; b < bins; ++b)
    csv << fmt(mid[b]) << ',' << fmt(obs[b]) << ',' << fmt(pred[b]) << ','
        << fmt(scaled[b]) << ',' << fmt(z[b]) << '\n';
  out = resolve_out(out, "compare", ".csv");
  write_file(out, csv.str());
  write_manifest(out, "compare",
                 {{"result", result_path},
                  {"prediction", prediction},
                  {"dist", dist_id},
                  {"n", n},
                  {"scale_exponent", scale_exponent},
                  {"l1", l1}},
                 std::nullopt);
  std::cout << "l1=" << fmt(l1) << "\n" << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "evrg: renormalization-group analysis of extreme-value statistics.\n"
      "Distribution ids: tent, valley, salpeter, salpeter-mass, uniform,\n"
      "fixed:<case>:alpha=<a>:lambda=<l>. Group ids: case0|case1-|case1+|case2\n"
      ":alpha=<a> (e.g. case2:alpha=2). Outputs land in --out, else in\n"
      "$EVRG_OUT_DIR, else in the working directory."};
  app.require_subcommand(1);
  const double nan = std::nan("");

  auto* transform = app.add_subcommand("transform", "exact T_s of a law: CSV x,cdf,pdf");
  std::string t_dist, t_group, t_out;
  double t_n = 2;
  int t_grid = 101;
  transform->add_option("--dist", t_dist, "distribution id")->required();
  transform->add_option("--group", t_group, "rescaling group id")->required();
  transform->add_option("--n", t_n, "block size n = e^s (>= 1)")->required();
  transform->add_option("--grid", t_grid, "number of grid points")->check(CLI::PositiveNumber);
  transform->add_option("--out", t_out, "output CSV path");

  auto* classify = app.add_subcommand("classify", "domain-of-attraction verdict: JSON");
  std::string c_dist, c_out;
  classify->add_option("--dist", c_dist, "distribution id")->required();
  classify->add_option("--out", c_out, "output JSON path ('-' for stdout only)");

  auto* expand = app.add_subcommand("expand", "eigen-expansion (beta_i, c_i): JSON");
  std::string e_dist, e_out;
  double e_alpha = nan, e_lambda = nan;
  int e_order = 5;
  expand->add_option("--dist", e_dist, "distribution id")->required();
  expand->add_option("--alpha", e_alpha, "fixed-point alpha (default: classify)");
  expand->add_option("--lambda", e_lambda, "fixed-point lambda (default: classify)");
  expand->add_option("--order", e_order, "highest (-log x) degree")->check(CLI::Range(1, 12));
  expand->add_option("--out", e_out, "output JSON path ('-' for stdout only)");

  auto* predict = app.add_subcommand(
      "predict", "finite-size corrections: CSV of n -> Delta_pred, or x -> delta at fixed n");
  std::string p_dist, p_ngrid, p_out;
  double p_alpha = nan, p_lambda = nan, p_order = 1, p_shape_at = 0;
  int p_grid = 99;
  predict->add_option("--dist", p_dist, "distribution id")->required();
  predict->add_option("--order", p_order, "target order in n^-1 (e.g. 1.5)")->required();
  predict->add_option("--alpha", p_alpha, "fixed-point alpha (default: classify)");
  predict->add_option("--lambda", p_lambda, "fixed-point lambda (default: classify)");
  predict->add_option("--n-grid", p_ngrid, "amplitude grid lo:hi[:count], log spaced");
  predict->add_option("--shape-at", p_shape_at, "emit shape delta(x) at this n instead");
  predict->add_option("--grid", p_grid, "shape grid points")->check(CLI::PositiveNumber);
  predict->add_option("--out", p_out, "output CSV path");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo block maxima: CSV histogram");
  std::string s_dist, s_out;
  std::uint64_t s_n = 0, s_replicas = 0, s_seed = 0, s_chunk = 65536;
  int s_bins = 50, s_workers = 0;
  simulate->add_option("--dist", s_dist, "distribution id")->required();
  simulate->add_option("--n", s_n, "block size")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--replicas", s_replicas, "number of repetitions N")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--bins", s_bins, "histogram bins")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", s_seed, "RNG seed");
  simulate->add_option("--chunk-size", s_chunk, "replicas per RNG stream")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--workers", s_workers, "worker threads (0 = hardware)");
  simulate->add_option("--out", s_out, "output CSV path");

  auto* compare = app.add_subcommand("compare",
                                     "join a simulate CSV with a prediction: CSV "
                                     "bin_mid,observed,predicted,scaled_residual,z");
  std::string m_result, m_prediction, m_dist, m_out;
  double m_n = 0, m_scale = 0;
  compare->add_option("--result", m_result, "simulate output CSV")->required();
  compare->add_option("--prediction", m_prediction,
                      "exact | fixed-point | perturbative:<order>")
      ->required();
  compare->add_option("--dist", m_dist, "base distribution id")->required();
  compare->add_option("--n", m_n, "block size (default: result manifest)");
  compare->add_option("--scale-exponent", m_scale, "residuals scaled by n^exponent");
  compare->add_option("--out", m_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  if (transform->parsed()) return cmd_transform(t_dist, t_group, t_n, t_grid, t_out);
  if (classify->parsed()) return cmd_classify(c_dist, c_out);
  if (expand->parsed()) return cmd_expand(e_dist, e_alpha, e_lambda, e_order, e_out);
  if (predict->parsed())
    return cmd_predict(p_dist, p_alpha, p_lambda, p_order, p_ngrid, p_shape_at, p_grid,
                       p_out);
  if (simulate->parsed())
    return cmd_simulate(s_dist, s_n, s_replicas, s_bins, s_seed, s_chunk, s_workers,
                        s_out);
  if (compare->parsed())
    return cmd_compare(m_result, m_prediction, m_dist, m_n, m_scale, m_out);
  return 0;
}
