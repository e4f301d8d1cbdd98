// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evrg/distribution.hpp"
#include "evrg/attraction.hpp"
#include "evrg/perturbation.hpp"

namespace evrg {

/// splitmix64: seed scrambler and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// xoshiro256++, seeded through splitmix64. Bit-reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  /// Uniform on (0, 1] with 53 random bits (never 0: log() stays finite).
  double uniform01();

 private:
  std::uint64_t s_[4];
};

/// Independent, reproducible stream for one replica chunk.
Rng chunk_stream(std::uint64_t seed, std::uint64_t chunk_index);

/// One draw of max(X_1..X_n): U^(1/n) pushed through the quantile, with the
/// power taken in log space. O(1) per block.
double sample_block_max(const Distribution& d, std::uint64_t n, Rng& rng);

/// Validation path: draw the n variates and take the maximum. O(n).
double sample_block_max_bruteforce(const Distribution& d, std::uint64_t n, Rng& rng);

struct ExperimentConfig {
  std::string dist_id;
  std::uint64_t block_size = 1;   // n
  std::uint64_t replicas = 1;     // N
  int bins = 50;
  std::uint64_t seed = 0;
  std::uint64_t chunk_size = 65536;
  int workers = 0;                // 0 = hardware concurrency
};

/// Binned rescaled block maxima with per-bin standard errors: each replica is
/// g_{-s}(max of n draws), whose law is exactly T_s rho, so the histogram
/// approximates rho_n. The law is first remapped affinely onto [0,1] (the
/// paper's own treatment of the stellar-mass example) and the rescaling
/// exponent alpha comes from its domain-of-attraction classification.
/// Bit-identical for a fixed (seed, chunk_size) no matter how many workers
/// ran it.
struct ExperimentResult {
  std::vector<double> bin_edges;        // bins + 1 entries
  std::vector<std::uint64_t> counts;
  std::vector<double> density;          // count / (N width)
  std::vector<double> std_error;        // sqrt(p(1-p)/N) / width
  ExperimentConfig config;
};

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const Distribution& d, const ExperimentConfig& config);

/// Density with an exact antiderivative, so bin averages are integrals and
/// not midpoint values.
struct PredictionDensity {
  std::function<double(double)> value;
  std::function<double(double)> mass_below;
};

PredictionDensity prediction_from(const Distribution& d);
PredictionDensity prediction_from(const CorrectionSeries& series, double n);
PredictionDensity prediction_from(const ExperimentResult& histogram);

struct ComparisonRow {
  double bin_mid;
  double observed;         // histogram density estimate
  double predicted;        // bin-averaged prediction
  double scaled_residual;  // n^scale (observed - predicted)
  double z;                // (observed - predicted) / std_error
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  double l1 = 0.0;  // sum_b width |observed - predicted|
};

ComparisonTable compare(const ExperimentResult& result, const PredictionDensity& pred,
                        double scale_exponent);

}  // namespace evrg
