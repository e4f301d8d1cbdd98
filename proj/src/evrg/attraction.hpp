// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evrg/distribution.hpp"

namespace evrg {

/// Outcome of the domain-of-attraction test for the compact-support family:
/// the law converges under the RG iff -log mu(x) / (-log x)^alpha has a
/// positive limit lambda as x -> 1.
struct AttractionVerdict {
  bool converges = false;
  std::optional<double> alpha_hat;
  std::optional<double> lambda_hat;
  std::vector<std::pair<double, double>> diagnostics;  // (x_k, ratio_k) probes
  std::string note;
};

/// Exponent estimate: slope of log(-log mu(x_k)) against log(-log x_k) on the
/// probe ladder x_k = 1 - 10^{-k}, k = 2..8, accelerated to the k -> infinity
/// limit. Throws Errc::no_convergence when the slopes do not stabilize to
/// 1e-3.
double estimate_alpha(const Distribution& d);

/// Limit of -log mu(x_k) / (-log x_k)^alpha on the same ladder, accelerated.
double estimate_lambda(const Distribution& d, double alpha);

/// Full verdict; never throws on non-convergence (that is a verdict, not an
/// error). Compact supports other than [0,1] are remapped affinely first;
/// non-compact supports report "unsupported case".
AttractionVerdict classify(const Distribution& d);

/// Iterated Aitken acceleration of a sequence; returns the extrapolated limit
/// and a crude error estimate (spread of the last diagonal entries).
std::pair<double, double> accelerate_sequence(std::vector<double> values);

}  // namespace evrg
