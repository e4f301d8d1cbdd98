// SPDX-License-Identifier: Apache-2.0
#include "evrg/attraction.hpp"

#include <cmath>

namespace evrg {

namespace {

constexpr int kFirstProbe = 2;
constexpr int kLastProbe = 8;  // 1 - x_k hits the resolution of doubles past 8

// Shared probe ladder: everything is taken through the survival function so
// the tail stays meaningful down to 1 - x = 1e-8.
std::vector<std::pair<double, double>> ladder(const Distribution& d) {
  std::vector<std::pair<double, double>> probes;  // (x_k, -log mu(x_k))
  for (int k = kFirstProbe; k <= kLastProbe; ++k) {
    const double eps = std::pow(10.0, -k);
    const double x = 1.0 - eps;
    const double sf = d.survival(x);
    if (!(sf > 0.0) || !std::isfinite(sf)) continue;  // saturated tail, drop
    probes.emplace_back(x, -std::log1p(-sf));
  }
  return probes;
}

double neg_log(double x) { return -std::log(x); }

}  // namespace

std::pair<double, double> accelerate_sequence(std::vector<double> values) {
  if (values.empty()) fail(Errc::no_convergence, "empty sequence");
  double best = values.back();
  double err = values.size() > 1
                   ? std::abs(values.back() - values[values.size() - 2])
                   : 0.0;
  const double scale = std::max(std::abs(best), 1e-30);
  while (values.size() >= 3) {
    std::vector<double> next;
    for (size_t i = 0; i + 2 < values.size(); ++i) {
      const double d1 = values[i + 1] - values[i];
      const double d2 = values[i + 2] - values[i + 1];
      const double den = d2 - d1;
      if (std::abs(den) < 1e-13 * scale)  // flat to the noise floor
        next.push_back(values[i + 2]);
      else
        next.push_back(values[i + 2] - d2 * d2 / den);
    }
    const double spread = std::abs(next.back() - best);
    best = next.back();
    err = std::min(err, spread);
    if (spread < 1e-13 * scale) break;
    values = std::move(next);
  }
  return {best, err};
}

double estimate_alpha(const Distribution& d) {
  const Support sup = d.support();
  if (sup != Support::compact(0.0, 1.0))
    fail(Errc::unsupported, "estimate_alpha needs a law supported on [0,1]");
  const auto probes = ladder(d);
  if (probes.size() < 4)
    fail(Errc::no_convergence, "upper tail saturates too early for the probe ladder");
  std::vector<double> slopes;
  for (size_t i = 0; i + 1 < probes.size(); ++i) {
    const double du = std::log(neg_log(probes[i + 1].first)) -
                      std::log(neg_log(probes[i].first));
    const double dl = std::log(probes[i + 1].second) - std::log(probes[i].second);
    slopes.push_back(dl / du);
  }
  const auto [alpha, err] = accelerate_sequence(slopes);
  if (!(err <= 1e-3 * std::max(1.0, std::abs(alpha))) || !(alpha > 0) ||
      !std::isfinite(alpha))
    fail(Errc::no_convergence, "tail exponent did not stabilize (spread " +
                                   std::to_string(err) + ")");
  return alpha;
}

double estimate_lambda(const Distribution& d, double alpha) {
  if (!(alpha > 0)) fail(Errc::domain, "estimate_lambda needs alpha > 0");
  const auto probes = ladder(d);
  if (probes.size() < 3)
    fail(Errc::no_convergence, "upper tail saturates too early for the probe ladder");
  std::vector<double> ratios;
  for (const auto& [x, L] : probes)
    ratios.push_back(L / std::pow(neg_log(x), alpha));
  const auto [lambda, err] = accelerate_sequence(ratios);
  if (!(err <= 1e-4 * std::max(std::abs(lambda), 1e-300)))
    fail(Errc::no_convergence, "tail ratio did not stabilize (spread " +
                                   std::to_string(err) + ")");
  if (!(lambda > 0) || !std::isfinite(lambda))
    fail(Errc::no_convergence, "tail ratio diverged");
  return lambda;
}

AttractionVerdict classify(const Distribution& d) {
  AttractionVerdict v;
  if (!d.support().bounded()) {
    v.note = "unsupported case: only compact supports are classified";
    return v;
  }
  Distribution unit = to_unit_interval(d);
  double alpha = 0.0;
  try {
    alpha = estimate_alpha(unit);
  } catch (const Error& e) {
    v.note = std::string("alpha estimate failed: ") + e.what();
    for (const auto& [x, L] : ladder(unit)) v.diagnostics.emplace_back(x, L);
    return v;
  }
  for (const auto& [x, L] : ladder(unit))
    v.diagnostics.emplace_back(x, L / std::pow(neg_log(x), alpha));
  try {
    const double lambda = estimate_lambda(unit, alpha);
    v.converges = true;
    v.alpha_hat = alpha;
    v.lambda_hat = lambda;
  } catch (const Error& e) {
    v.alpha_hat = alpha;
    v.note = std::string("lambda estimate failed: ") + e.what();
  }
  return v;
}

}  // namespace evrg
