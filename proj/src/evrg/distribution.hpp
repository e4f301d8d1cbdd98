// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "evrg/rescaling.hpp"
#include "evrg/support.hpp"

namespace evrg {

/// Implementation side of a probability law. Everything is immutable after
/// construction; reads are safe from any number of threads.
class DistributionModel {
 public:
  virtual ~DistributionModel() = default;

  virtual double cdf(double x) const = 0;
  virtual double pdf(double x) const = 0;
  virtual Support support() const = 0;

  /// 1 - cdf. Override with the analytic form whenever one exists: the
  /// attraction estimators live entirely in the upper tail and die by
  /// cancellation otherwise.
  virtual double survival(double x) const { return 1.0 - cdf(x); }

  /// Analytic quantile if available; nullopt falls back to root search.
  virtual std::optional<double> quantile(double) const { return std::nullopt; }

  /// Analytic continuation of the survival function across the upper support
  /// endpoint (x slightly above it), used by the eigen-expansion extractor's
  /// central differences. NaN when no continuation is available.
  virtual double survival_continued(double x) const;

  virtual std::string describe() const = 0;
};

/// Immutable value handle for a probability law: cheap to copy, safe to share.
class Distribution {
 public:
  explicit Distribution(std::shared_ptr<const DistributionModel> model);

  double cdf(double x) const { return model_->cdf(x); }
  double pdf(double x) const { return model_->pdf(x); }
  double survival(double x) const { return model_->survival(x); }
  double survival_continued(double x) const { return model_->survival_continued(x); }
  Support support() const { return model_->support(); }
  bool has_analytic_quantile() const;

  /// Inverse CDF. Accepts the closed interval [0,1]; endpoints map to the
  /// support bounds. Uses the analytic inverse when the model provides one,
  /// otherwise a bracketing search converging to the infimum of the solution
  /// set (so flat CDF stretches report their left edge).
  double quantile(double p) const;

  std::string describe() const { return model_->describe(); }
  const DistributionModel* model() const { return model_.get(); }

 private:
  std::shared_ptr<const DistributionModel> model_;
};

/// Fixed point of the RG transformation: the limit law of its case with
/// parameters alpha, lambda > 0. Case two is M(x) = exp(-lambda(-log x)^alpha)
/// on [0,1].
struct FixedPoint {
  Case kind;
  double alpha;
  double lambda;

  FixedPoint(Case c, double a, double l);
  RescalingGroup group() const { return RescalingGroup(kind, alpha); }
};

// Built-in laws.
Distribution make_tent();
Distribution make_valley();
Distribution make_salpeter_rescaled();
Distribution make_salpeter_mass();
Distribution make_uniform();
Distribution make_fixed_point(const FixedPoint& fp);

/// Conjugate a compact-support law onto [0,1] by the affine map
/// x -> (x - lower)/(upper - lower).
Distribution to_unit_interval(const Distribution& d);

/// Root-search inverse CDF: |cdf(x) - p| <= 1e-12 for continuous CDFs,
/// infimum of the solution set on flat stretches. Requires 0 < p < 1.
double quantile_numeric(const Distribution& d, double p);

/// Resolve a string id: "tent", "valley", "salpeter", "salpeter-mass",
/// "uniform", or "fixed:<case>:alpha=<a>:lambda=<l>".
Distribution make_distribution(const std::string& id);

}  // namespace evrg
