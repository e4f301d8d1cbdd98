// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdio>
#include <limits>

#include "evrg/distribution.hpp"
#include "evrg/quadrature.hpp"

namespace evrg {

namespace {
constexpr double nan64 = std::numeric_limits<double>::quiet_NaN();
constexpr double inf64 = std::numeric_limits<double>::infinity();
}  // namespace

double DistributionModel::survival_continued(double x) const {
  return x <= support().upper ? survival(x) : nan64;
}

Distribution::Distribution(std::shared_ptr<const DistributionModel> model)
    : model_(std::move(model)) {
  if (!model_) fail(Errc::invalid_argument, "null distribution model");
}

bool Distribution::has_analytic_quantile() const {
  return model_->quantile(0.5).has_value();
}

double Distribution::quantile(double p) const {
  if (std::isnan(p) || p < 0.0 || p > 1.0)
    fail(Errc::domain, "quantile needs p in [0,1]");
  const Support sup = support();
  if (p == 0.0) return sup.lower;
  if (p == 1.0) return sup.upper;
  if (auto q = model_->quantile(p)) return *q;
  return quantile_numeric(*this, p);
}

double quantile_numeric(const Distribution& d, double p) {
  if (!(p > 0.0 && p < 1.0)) fail(Errc::domain, "quantile_numeric needs 0 < p < 1");
  const Support sup = d.support();
  double lo = sup.lower, hi = sup.upper;
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    double step = 1.0;
    while (d.cdf(lo) >= p) lo -= (step *= 2.0);
  }
  if (!std::isfinite(hi)) {
    hi = std::isfinite(sup.lower) ? sup.lower + 1.0 : 1.0;
    double step = 1.0;
    while (d.cdf(hi) < p) hi += (step *= 2.0);
  }
  // infimum of {x : cdf(x) >= p}; lands on the left edge of flat stretches
  return bisect_predicate([&](double x) { return d.cdf(x) >= p; }, lo, hi);
}

FixedPoint::FixedPoint(Case c, double a, double l) : kind(c), alpha(a), lambda(l) {
  if (!(a > 0) || !std::isfinite(a) || !(l > 0) || !std::isfinite(l))
    fail(Errc::domain, "fixed point needs alpha > 0 and lambda > 0");
}

// ---------------------------------------------------------------------------
// built-in laws
// ---------------------------------------------------------------------------

namespace {

// CDF 2x^2 below 1/2, 1 - 2(1-x)^2 above; the breakpoint belongs to the left
// branch. Density 4x / 4-4x on [0,1].
class TentModel final : public DistributionModel {
 public:
  Support support() const override { return Support::compact(0.0, 1.0); }
  double cdf(double x) const override {
    if (x <= 0.5) return 2.0 * x * x;
    return 1.0 - 2.0 * (1.0 - x) * (1.0 - x);
  }
  double survival(double x) const override {
    if (x <= 0.5) return 1.0 - 2.0 * x * x;
    return 2.0 * (1.0 - x) * (1.0 - x);
  }
  double survival_continued(double x) const override { return survival(x); }
  double pdf(double x) const override { return x <= 0.5 ? 4.0 * x : 4.0 - 4.0 * x; }
  std::optional<double> quantile(double p) const override {
    if (p <= 0.5) return std::sqrt(0.5 * p);
    return 1.0 - std::sqrt(0.5 * (1.0 - p));
  }
  std::string describe() const override { return "tent"; }
};

// Density |2-4x| on [0,1]; CDF 2x(1-x) below 1/2.
class ValleyModel final : public DistributionModel {
 public:
  Support support() const override { return Support::compact(0.0, 1.0); }
  double cdf(double x) const override {
    const double b = 2.0 * x * (1.0 - x);
    return x <= 0.5 ? b : 1.0 - b;
  }
  double survival(double x) const override {
    const double b = 2.0 * x * (1.0 - x);
    return x <= 0.5 ? 1.0 - b : b;
  }
  double survival_continued(double x) const override {
    return x <= 0.5 ? survival(x) : 2.0 * x * (1.0 - x);
  }
  double pdf(double x) const override { return std::abs(2.0 - 4.0 * x); }
  std::optional<double> quantile(double p) const override {
    if (p <= 0.5) return 0.5 * (1.0 - std::sqrt(1.0 - 2.0 * p));
    return 0.5 * (1.0 + std::sqrt(2.0 * p - 1.0));
  }
  std::string describe() const override { return "valley"; }
};

// rho(x) = a (1+19x)^(-2.35) on (0,1); a fixed by quadrature at construction,
// not hard-coded (the reported value truncates it).
class SalpeterRescaledModel final : public DistributionModel {
 public:
  SalpeterRescaledModel() {
    const double mass =
        integrate([](double x) { return std::pow(1.0 + 19.0 * x, -2.35); }, 0.0, 1.0, 1e-12);
    a_ = 1.0 / mass;
    scale_ = a_ / (1.35 * 19.0);
    top_ = std::pow(20.0, -1.35);
  }
  Support support() const override { return Support::compact(0.0, 1.0); }
  double pdf(double x) const override { return a_ * std::pow(1.0 + 19.0 * x, -2.35); }
  double cdf(double x) const override {
    return scale_ * (1.0 - std::pow(1.0 + 19.0 * x, -1.35));
  }
  double survival(double x) const override {
    return scale_ * (std::pow(1.0 + 19.0 * x, -1.35) - top_);
  }
  double survival_continued(double x) const override { return survival(x); }
  std::optional<double> quantile(double p) const override {
    return (std::pow(1.0 - p / scale_, -1.0 / 1.35) - 1.0) / 19.0;
  }
  double normalization() const { return a_; }
  std::string describe() const override { return "salpeter"; }

 private:
  double a_, scale_, top_;
};

// sigma(m) = a0 m^(-2.35) on (10,200), solar masses.
class SalpeterMassModel final : public DistributionModel {
 public:
  SalpeterMassModel() {
    const double mass =
        integrate([](double m) { return std::pow(m, -2.35); }, 10.0, 200.0, 1e-12);
    a0_ = 1.0 / mass;
    scale_ = a0_ / 1.35;
    lo_ = std::pow(10.0, -1.35);
    hi_ = std::pow(200.0, -1.35);
  }
  Support support() const override { return Support::compact(10.0, 200.0); }
  double pdf(double m) const override { return a0_ * std::pow(m, -2.35); }
  double cdf(double m) const override { return scale_ * (lo_ - std::pow(m, -1.35)); }
  double survival(double m) const override { return scale_ * (std::pow(m, -1.35) - hi_); }
  double survival_continued(double m) const override { return survival(m); }
  std::optional<double> quantile(double p) const override {
    return std::pow(lo_ - p / scale_, -1.0 / 1.35);
  }
  double normalization() const { return a0_; }
  std::string describe() const override { return "salpeter-mass"; }

 private:
  double a0_, scale_, lo_, hi_;
};

class UniformModel final : public DistributionModel {
 public:
  Support support() const override { return Support::compact(0.0, 1.0); }
  double cdf(double x) const override { return std::min(1.0, std::max(0.0, x)); }
  double survival(double x) const override { return 1.0 - x; }
  double survival_continued(double x) const override { return 1.0 - x; }
  double pdf(double) const override { return 1.0; }
  std::optional<double> quantile(double p) const override { return p; }
  std::string describe() const override { return "uniform"; }
};

// The four limit families. Case two on [0,1] is exp(-lambda(-log x)^alpha);
// the others are the classical Gumbel / Weibull / Frechet forms on their
// canonical supports.
class FixedPointModel final : public DistributionModel {
 public:
  explicit FixedPointModel(const FixedPoint& fp) : fp_(fp) {}

  Support support() const override { return canonical_support(fp_.kind); }

  double cdf(double x) const override {
    switch (fp_.kind) {
      case Case::zero:
        return std::exp(-fp_.lambda * std::exp(-fp_.alpha * x));
      case Case::one_minus:
        return x >= 0.0 ? 1.0 : std::exp(-fp_.lambda * std::pow(-x, fp_.alpha));
      case Case::one_plus:
        return x == 0.0 ? 0.0 : std::exp(-fp_.lambda * std::pow(x, -fp_.alpha));
      case Case::two: {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::exp(-fp_.lambda * std::pow(-std::log(x), fp_.alpha));
      }
    }
    fail(Errc::internal, "bad case");
  }

  double survival(double x) const override {
    switch (fp_.kind) {
      case Case::zero:
        return -std::expm1(-fp_.lambda * std::exp(-fp_.alpha * x));
      case Case::one_minus:
        return x >= 0.0 ? 0.0 : -std::expm1(-fp_.lambda * std::pow(-x, fp_.alpha));
      case Case::one_plus:
        return x == 0.0 ? 1.0 : -std::expm1(-fp_.lambda * std::pow(x, -fp_.alpha));
      case Case::two: {
        if (x <= 0.0) return 1.0;
        if (x >= 1.0) return 0.0;
        return -std::expm1(-fp_.lambda * std::pow(-std::log(x), fp_.alpha));
      }
    }
    fail(Errc::internal, "bad case");
  }

  double survival_continued(double x) const override {
    if (fp_.kind != Case::two || x <= 1.0) return survival(x);
    // continuation across x = 1 exists when alpha is an integer (estimator
    // noise around one is snapped)
    const double a = std::round(fp_.alpha);
    if (std::abs(fp_.alpha - a) > 1e-6) return nan64;
    return -std::expm1(-fp_.lambda * std::pow(-std::log(x), a));
  }

  double pdf(double x) const override {
    const double a = fp_.alpha, l = fp_.lambda;
    switch (fp_.kind) {
      case Case::zero: {
        const double t = std::exp(-a * x);
        return l * a * t * std::exp(-l * t);
      }
      case Case::one_minus:
        if (x == 0.0) return a > 1.0 ? 0.0 : (a == 1.0 ? l : inf64);
        return l * a * std::pow(-x, a - 1.0) * std::exp(-l * std::pow(-x, a));
      case Case::one_plus:
        if (x == 0.0) return 0.0;
        return l * a * std::pow(x, -a - 1.0) * std::exp(-l * std::pow(x, -a));
      case Case::two: {
        if (x <= 0.0) return 0.0;
        const double u = -std::log(x);
        if (u == 0.0) return a > 1.0 ? 0.0 : (a == 1.0 ? l : inf64);
        return std::exp(-l * std::pow(u, a)) * l * a * std::pow(u, a - 1.0) / x;
      }
    }
    fail(Errc::internal, "bad case");
  }

  std::optional<double> quantile(double p) const override {
    const double a = fp_.alpha, l = fp_.lambda;
    const double t = -std::log(p) / l;
    switch (fp_.kind) {
      case Case::zero:
        return -std::log(t) / a;
      case Case::one_minus:
        return -std::pow(t, 1.0 / a);
      case Case::one_plus:
        return std::pow(t, -1.0 / a);
      case Case::two:
        return std::exp(-std::pow(t, 1.0 / a));
    }
    fail(Errc::internal, "bad case");
  }

  std::string describe() const override {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "fixed:%s:alpha=%.17g:lambda=%.17g",
                  case_name(fp_.kind), fp_.alpha, fp_.lambda);
    return buf;
  }

 private:
  FixedPoint fp_;
};

// Affine conjugation of a compact-support law onto [0,1].
class UnitIntervalRemap final : public DistributionModel {
 public:
  explicit UnitIntervalRemap(Distribution base)
      : base_(std::move(base)), lo_(base_.support().lower), w_(base_.support().width()) {}
  Support support() const override { return Support::compact(0.0, 1.0); }
  double cdf(double y) const override { return base_.cdf(lo_ + y * w_); }
  double survival(double y) const override { return base_.survival(lo_ + y * w_); }
  double survival_continued(double y) const override {
    return base_.survival_continued(lo_ + y * w_);
  }
  double pdf(double y) const override { return base_.pdf(lo_ + y * w_) * w_; }
  std::optional<double> quantile(double p) const override {
    if (!base_.has_analytic_quantile()) return std::nullopt;
    return (base_.quantile(p) - lo_) / w_;
  }
  std::string describe() const override { return "unit(" + base_.describe() + ")"; }

 private:
  Distribution base_;
  double lo_, w_;
};

template <class Model>
Distribution shared_instance() {
  static const auto model = std::make_shared<const Model>();
  return Distribution(model);
}

}  // namespace

Distribution make_tent() { return shared_instance<TentModel>(); }
Distribution make_valley() { return shared_instance<ValleyModel>(); }
Distribution make_salpeter_rescaled() { return shared_instance<SalpeterRescaledModel>(); }
Distribution make_salpeter_mass() { return shared_instance<SalpeterMassModel>(); }
Distribution make_uniform() { return shared_instance<UniformModel>(); }

Distribution make_fixed_point(const FixedPoint& fp) {
  return Distribution(std::make_shared<const FixedPointModel>(fp));
}

Distribution to_unit_interval(const Distribution& d) {
  const Support sup = d.support();
  if (!sup.bounded())
    fail(Errc::unsupported, "affine remap to [0,1] needs a compact support");
  if (sup.lower == 0.0 && sup.upper == 1.0) return d;
  return Distribution(std::make_shared<const UnitIntervalRemap>(d));
}

Distribution make_distribution(const std::string& id) {
  if (id == "tent") return make_tent();
  if (id == "valley") return make_valley();
  if (id == "salpeter") return make_salpeter_rescaled();
  if (id == "salpeter-mass") return make_salpeter_mass();
  if (id == "uniform") return make_uniform();
  if (id.rfind("fixed:", 0) == 0) {
    // fixed:<case>:alpha=<a>:lambda=<l>
    const std::string rest = id.substr(6);
    const auto c1 = rest.find(':');
    const auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      fail(Errc::unknown_id, "fixed-point id must look like 'fixed:case2:alpha=2:lambda=2'");
    const Case c = case_from_name(rest.substr(0, c1));
    const std::string alpha_part = rest.substr(c1 + 1, c2 - c1 - 1);
    const std::string lambda_part = rest.substr(c2 + 1);
    if (alpha_part.rfind("alpha=", 0) != 0 || lambda_part.rfind("lambda=", 0) != 0)
      fail(Errc::unknown_id, "fixed-point id must look like 'fixed:case2:alpha=2:lambda=2'");
    char* end = nullptr;
    const double a = std::strtod(alpha_part.c_str() + 6, &end);
    if (*end != '\0') fail(Errc::unknown_id, "cannot parse alpha in '" + id + "'");
    const double l = std::strtod(lambda_part.c_str() + 7, &end);
    if (*end != '\0') fail(Errc::unknown_id, "cannot parse lambda in '" + id + "'");
    return make_fixed_point(FixedPoint(c, a, l));
  }
  fail(Errc::unknown_id, "unknown distribution id '" + id + "'");
}

}  // namespace evrg
