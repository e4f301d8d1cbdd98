// SPDX-License-Identifier: Apache-2.0
#include "evrg/rg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "evrg/quadrature.hpp"

namespace evrg {

namespace {

constexpr double nan64 = std::numeric_limits<double>::quiet_NaN();

class TransformedModel final : public DistributionModel {
 public:
  TransformedModel(Distribution base, RescalingGroup group, double s)
      : base_(std::move(base)), group_(group), s_(s), n_(std::exp(s)) {}

  const RescalingGroup& group() const { return group_; }
  double flow() const { return s_; }
  const Distribution& base() const { return base_; }

  Support support() const override { return base_.support(); }

  // log of the base CDF at g_s(x), taken through the survival channel near 1
  double log_base_cdf(double y) const {
    const double sf = base_.survival(y);
    if (sf < 0.5) return std::log1p(-sf);
    return std::log(base_.cdf(y));
  }

  double cdf(double x) const override {
    const double y = rescale(group_, s_, x);
    const double lc = log_base_cdf(y);
    return std::exp(n_ * lc);  // exp(-inf) = 0 covers cdf = 0
  }

  double survival(double x) const override {
    const double y = rescale(group_, s_, x);
    return -std::expm1(n_ * log_base_cdf(y));
  }

  double survival_continued(double x) const override {
    if (x <= support().upper) return survival(x);
    if (group_.kind != Case::two) return nan64;
    const double y = std::exp(std::exp(-s_ / group_.alpha) * std::log(x));
    const double sf = base_.survival_continued(y);
    if (std::isnan(sf)) return nan64;
    return -std::expm1(n_ * std::log1p(-sf));
  }

  // g_s'(x) n mu(g_s(x))^(n-1) rho(g_s(x)), assembled in log space so that
  // n ~ 1e6 does not underflow the CDF power.
  double pdf(double x) const override {
    const Support sup = support();
    if (x <= sup.lower || x >= sup.upper) {
      if (x == sup.upper) {
        const double p = base_.pdf(x);  // boundary itself is fixed by g_s
        return std::isfinite(p) ? rescale_derivative(group_, s_, x) * n_ * p : p;
      }
      return 0.0;
    }
    const double y = rescale(group_, s_, x);
    const double rho = base_.pdf(y);
    if (rho <= 0.0) return 0.0;
    const double lc = log_base_cdf(y);
    if (lc == -std::numeric_limits<double>::infinity()) return 0.0;
    double log_jacobian;
    if (group_.kind == Case::two) {
      const double q = std::exp(-s_ / group_.alpha);
      log_jacobian = std::log(q) + (q - 1.0) * std::log(x);
    } else {
      log_jacobian = std::log(rescale_derivative(group_, s_, x));
    }
    return std::exp(log_jacobian + s_ + (n_ - 1.0) * lc + std::log(rho));
  }

  std::optional<double> quantile(double p) const override {
    if (!base_.has_analytic_quantile()) return std::nullopt;
    // mu(g_s(x))^n = p  =>  x = g_{-s}(Q(p^{1/n})), evaluated in log space
    const double y = base_.quantile(std::exp(std::log(p) / n_));
    return rescale(group_, -s_, y);
  }

  std::string describe() const override {
    char buf[64];
    std::snprintf(buf, sizeof(buf), ", %s, s=%.17g)", group_id(group_).c_str(), s_);
    return "transform(" + base_.describe() + buf;
  }

 private:
  Distribution base_;
  RescalingGroup group_;
  double s_;
  double n_;
};

bool same_group(const RescalingGroup& a, const RescalingGroup& b) {
  return a.kind == b.kind && a.alpha == b.alpha;
}

}  // namespace

Distribution rg_transform(const RescalingGroup& g, double s, const Distribution& base) {
  if (!(s >= 0.0)) fail(Errc::domain, "the RG transform is defined for s >= 0");
  if (base.support() != canonical_support(g.kind))
    fail(Errc::support_mismatch,
         "distribution support does not match the canonical support of " +
             group_id(g));
  // merge with an existing transform instead of stacking wrappers
  if (auto* t = dynamic_cast<const TransformedModel*>(base.model());
      t && same_group(t->group(), g)) {
    return Distribution(
        std::make_shared<const TransformedModel>(t->base(), g, t->flow() + s));
  }
  return Distribution(std::make_shared<const TransformedModel>(base, g, s));
}

double fixed_point_residual(const FixedPoint& fp, double s, std::span<const double> grid) {
  const Distribution m = make_fixed_point(fp);
  const RescalingGroup g = fp.group();
  const double n = std::exp(s);
  double worst = 0.0;
  for (double x : grid) {
    const double y = rescale(g, s, x);
    const double c = m.cdf(y);
    const double powered = c > 0.0 ? std::exp(n * std::log(c)) : 0.0;
    worst = std::max(worst, std::abs(powered - m.cdf(x)));
  }
  return worst;
}

namespace {

// Sign changes of f on (0,1], scanned on a geometric-ish grid in u = -log x
// and bisected to xtol. u_hi bounds the region that still matters.
std::vector<double> sign_changes(const std::function<double(double)>& f, double u_hi,
                                 int scan_points, double xtol) {
  std::vector<double> zeros;
  double prev_x = 1.0;
  double prev_f = f(1.0);
  for (int i = 1; i <= scan_points; ++i) {
    const double u = u_hi * i / scan_points;
    const double x = std::exp(-u);
    const double cur = f(x);
    if (cur != 0.0 && prev_f != 0.0 && (cur < 0) != (prev_f < 0))
      zeros.push_back(bisect_root(f, x, prev_x, xtol));
    if (cur != 0.0) {
      prev_f = cur;
      prev_x = x;
    }
    else {
      prev_x = x;
    }
  }
  std::sort(zeros.begin(), zeros.end());
  return zeros;
}

}  // namespace

double l1_distance(const Distribution& a, const Distribution& b) {
  const Support sup = a.support();
  if (!sup.bounded() || sup != b.support())
    fail(Errc::support_mismatch, "l1_distance needs two laws on the same compact support");
  if (a.model() == b.model()) return 0.0;

  // work on [0,1]; remap other compact intervals first
  if (sup.lower != 0.0 || sup.upper != 1.0)
    return l1_distance(to_unit_interval(a), to_unit_interval(b));

  // truncate where both laws keep less than ~1e-13 of their mass
  double u_hi = 8.0;
  while (u_hi < 700.0 &&
         std::max(a.cdf(std::exp(-u_hi)), b.cdf(std::exp(-u_hi))) > 1e-13)
    u_hi *= 1.5;

  const auto diff = [&](double x) { return a.pdf(x) - b.pdf(x); };
  std::vector<double> cuts = sign_changes(diff, u_hi, 4096, 1e-12);
  cuts.insert(cuts.begin(), 0.0);
  cuts.push_back(1.0);

  // each signed piece integrates exactly to a CDF difference
  double total = 0.0;
  const auto gap = [&](double x) { return x == 0.0 ? 0.0 : a.cdf(x) - b.cdf(x); };
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += std::abs(gap(cuts[i + 1]) - gap(cuts[i]));
  return total;
}

double l1_distance(const std::function<double(double)>& d1,
                   const std::function<double(double)>& d2) {
  const auto diff = [&](double x) { return d1(x) - d2(x); };

  // extend the u-range until the tail stops contributing
  double u_hi = 16.0;
  const auto integrand_u = [&](double u) {
    const double x = std::exp(-u);
    return std::abs(diff(x)) * x;
  };
  while (u_hi < 700.0) {
    const double tail = integrate(integrand_u, u_hi * 0.75, u_hi, 1e-13, 2000);
    if (std::abs(tail) < 1e-12) break;
    u_hi *= 2.0;
  }

  std::vector<double> cuts = sign_changes(diff, u_hi, 4096, 1e-12);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());

  // pieces above x = 0.05 go straight; below, substitute u = -log x
  const double x_switch = 0.05;
  double total = 0.0, lo = std::exp(-u_hi);
  for (double hi : cuts) {
    if (hi <= lo) continue;
    const double a = lo, b = hi;
    if (b > x_switch) {
      const double start = std::max(a, x_switch);
      total += std::abs(integrate(diff, start, b, 0.25e-10, 10000));
    }
    if (a < x_switch) {
      const double stop = std::min(b, x_switch);
      const double ua = -std::log(stop), ub = -std::log(a);
      total += std::abs(integrate([&](double u) { return diff(std::exp(-u)) * std::exp(-u); },
                                  ua, ub, 0.25e-10, 10000));
    }
    lo = hi;
  }
  return total;
}

}  // namespace evrg
