// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "evrg/distribution.hpp"
#include "evrg/quadrature.hpp"

namespace evrg::testing {

inline std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

/// Integral of pdf over the whole support. Infinite endpoints and endpoint
/// density blowups are trimmed at mass 1e-13 per side, with the trimmed mass
/// added back exactly (it is a CDF value).
inline double total_mass(const Distribution& d, double quad_tol = 1e-11) {
  const Support sup = d.support();
  double lo = sup.lower, hi = sup.upper;
  const double trim = 1e-13;
  double tail = 0.0;
  if (!std::isfinite(lo) || !std::isfinite(d.pdf(lo))) {
    lo = d.quantile(trim);
    tail += trim;
  }
  if (!std::isfinite(hi) || !std::isfinite(d.pdf(hi))) {
    hi = d.quantile(1.0 - trim);
    tail += trim;
  }
  return tail + integrate([&](double x) { return d.pdf(x); }, lo, hi, quad_tol, 40000);
}

/// Wraps a law while hiding its dynamic type and analytic extras; used to
/// force generic code paths (numeric quantile, no transform merging, ...).
class OpaqueLaw final : public DistributionModel {
 public:
  explicit OpaqueLaw(Distribution base) : base_(std::move(base)) {}
  double cdf(double x) const override { return base_.cdf(x); }
  double pdf(double x) const override { return base_.pdf(x); }
  double survival(double x) const override { return base_.survival(x); }
  Support support() const override { return base_.support(); }
  std::string describe() const override { return "opaque(" + base_.describe() + ")"; }

 private:
  Distribution base_;
};

inline Distribution opaque(const Distribution& d) {
  return Distribution(std::make_shared<const OpaqueLaw>(d));
}

}  // namespace evrg::testing
