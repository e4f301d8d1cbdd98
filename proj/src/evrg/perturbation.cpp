// SPDX-License-Identifier: Apache-2.0
#include "evrg/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evrg/quadrature.hpp"
#include "evrg/rg.hpp"

namespace evrg {

namespace {
constexpr double nan64 = std::numeric_limits<double>::quiet_NaN();

void require_case_two(const FixedPoint& fp, const char* who) {
  if (fp.kind != Case::two)
    fail(Errc::unsupported,
         std::string(who) + " is developed around the compact-support family only");
}

double log_m(const FixedPoint& fp, double u) { return -fp.lambda * std::pow(u, fp.alpha); }
}  // namespace

double eigenvalue(double beta, double alpha, double n) {
  if (!(n >= 1.0)) fail(Errc::domain, "eigenvalue needs n >= 1");
  if (!(alpha > 0.0)) fail(Errc::domain, "eigenvalue needs alpha > 0");
  return std::pow(n, 1.0 - beta / alpha);
}

std::function<double(double)> differential_apply(const FixedPoint& fp, double s,
                                                 std::function<double(double)> eta) {
  require_case_two(fp, "differential_apply");
  const double n = std::exp(s);
  const RescalingGroup g = fp.group();
  return [fp, g, s, n, eta = std::move(eta)](double x) -> double {
    const double y = rescale(g, s, x);
    if (y <= 0.0) return 0.0;
    const double lm = y >= 1.0 ? 0.0 : log_m(fp, -std::log(y));
    return n * std::exp((n - 1.0) * lm) * eta(y);
  };
}

// ---------------------------------------------------------------------------
// expansion extraction
// ---------------------------------------------------------------------------

namespace {

// h(u) = (mu - M)/M at x = e^-u, through the survival channels so the leading
// digits survive near u = 0. Continues to u < 0 when the models do; an alpha
// within estimator noise of an integer continues as that integer.
double ratio_minus_one(const Distribution& d, const FixedPoint& fp, double u) {
  const double x = std::exp(-u);
  const double sf_d = u >= 0.0 ? d.survival(x) : d.survival_continued(x);
  double a = fp.alpha;
  if (u < 0.0 && std::abs(a - std::round(a)) < 1e-6) a = std::round(a);
  const double lm = -fp.lambda * std::pow(u, a);  // NaN: no continuation
  const double sf_m = -std::expm1(lm);
  return (sf_m - sf_d) / std::exp(lm);
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// m-th derivative at 0 by the central binomial stencil + Richardson table.
// The step schedule narrows with the order: high orders divide by h^m and
// hit the rounding floor sooner, so they stop halving earlier. Picks the
// diagonal entry where consecutive entries agree best.
// Returns {value, error estimate}.
std::pair<double, double> derivative_at_zero(const std::function<double(double)>& f,
                                             int m) {
  const double base_step = m >= 6 ? 0.7 : 0.5;
  const int levels = m <= 5 ? 8 : (m <= 7 ? 7 : 6);
  std::vector<double> diag;
  std::vector<double> row;
  for (int r = 0; r < levels; ++r) {
    const double h = base_step / std::pow(2.0, r);
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binomial(m, j) * f((0.5 * m - j) * h);
    }
    std::vector<double> next(r + 1);
    next[0] = acc / std::pow(h, m);
    double factor = 4.0;
    for (int c = 1; c <= r; ++c) {
      next[c] = (factor * next[c - 1] - row[c - 1]) / (factor - 1.0);
      factor *= 4.0;
    }
    row = std::move(next);
    diag.push_back(row.back());
  }
  double value = diag.back();
  double err = std::abs(diag.back() - diag[diag.size() - 2]);
  for (size_t r = 2; r < diag.size(); ++r) {
    const double spread = std::abs(diag[r] - diag[r - 1]);
    if (spread <= err) {
      err = spread;
      value = diag[r];
    }
  }
  return {value, err};
}

}  // namespace

PerturbationExpansion extract_expansion(const Distribution& d, const FixedPoint& fp,
                                        int max_order) {
  require_case_two(fp, "extract_expansion");
  if (max_order < 1 || max_order > 12)
    fail(Errc::invalid_argument, "extraction order must be in 1..12");
  const auto h = [&](double u) { return ratio_minus_one(d, fp, u); };

  PerturbationExpansion out{fp, {}, max_order};

  // exact fixed point of the same family: nothing to extract
  double h_scale = 0.0;
  for (double u = 0.1; u <= 0.9; u += 0.1) h_scale = std::max(h_scale, std::abs(h(u)));
  if (h_scale < 1e-12) return out;

  if (std::isnan(h(-0.05)) || std::isnan(h(-0.4)))
    fail(Errc::extraction,
         "the CDF ratio cannot be evaluated across the upper endpoint; "
         "central differences need an analytic continuation there");

  for (int m = 1; m <= max_order; ++m) {
    const auto [deriv, err] = derivative_at_zero(h, m);
    double factorial = 1.0;
    for (int i = 2; i <= m; ++i) factorial *= i;
    const double coeff = deriv / factorial;
    const double tol = 1e-7 * std::max(1.0, std::abs(coeff));
    if (err / factorial > tol)
      fail(Errc::extraction, "Taylor coefficient of degree " + std::to_string(m) +
                                 " did not converge under step halving (spread " +
                                 std::to_string(err / factorial) + ")");
    if (std::abs(coeff) < 1e-9) continue;
    if (static_cast<double>(m) <= fp.alpha + 1e-12)
      fail(Errc::extraction,
           "relevant or marginal deformation found (beta = " + std::to_string(m) +
               " <= alpha); the law is outside the basin of this fixed point");
    out.terms.emplace_back(m, coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// analytic expansions of the built-in examples
// ---------------------------------------------------------------------------

namespace {

Poly exp_neg_u_series(int degree) {  // e^-u
  Poly e(degree + 1);
  double c = 1.0;
  for (int k = 0; k <= degree; ++k) {
    e[k] = c;
    c /= -(k + 1.0);
  }
  return e;
}

// (1 + sum_{k>=1} p_k u^k) with p = series of mu(e^-u) e^{lambda u^alpha} - 1
std::vector<std::pair<double, double>> series_to_terms(const Poly& h, double alpha,
                                                       int max_order) {
  std::vector<std::pair<double, double>> terms;
  for (int k = 1; k <= max_order && k < static_cast<int>(h.size()); ++k) {
    if (std::abs(h[k]) < 1e-12) continue;
    if (static_cast<double>(k) <= alpha + 1e-12)
      fail(Errc::internal, "built-in expansion has a non-irrelevant term");
    terms.emplace_back(k, h[k]);
  }
  return terms;
}

Poly m_inverse_series(const FixedPoint& fp, int degree) {  // e^{+lambda u^alpha}
  Poly a(degree + 1, 0.0);
  const int ai = static_cast<int>(fp.alpha);
  a[ai] = fp.lambda;
  return series_exp(a);
}

}  // namespace

std::optional<PerturbationExpansion> analytic_expansion(const Distribution& d,
                                                        const FixedPoint& fp,
                                                        int max_order) {
  if (fp.kind != Case::two || fp.alpha != std::floor(fp.alpha)) return std::nullopt;
  const std::string id = d.describe();
  const int degree = max_order;
  Poly mu;  // series of mu(e^-u)
  if (id == "tent") {
    if (fp.alpha != 2.0 || std::abs(fp.lambda - 2.0) > 1e-9) return std::nullopt;
    const Poly e = exp_neg_u_series(degree);
    Poly one_minus_e = e;  // 1 - e^-u
    for (double& c : one_minus_e) c = -c;
    one_minus_e[0] += 1.0;
    mu = poly_mul(one_minus_e, one_minus_e);
    for (double& c : mu) c *= -2.0;
    mu[0] += 1.0;
  } else if (id == "valley") {
    if (fp.alpha != 1.0 || std::abs(fp.lambda - 2.0) > 1e-9) return std::nullopt;
    const Poly e = exp_neg_u_series(degree);
    Poly one_minus_e = e;
    for (double& c : one_minus_e) c = -c;
    one_minus_e[0] += 1.0;
    mu = poly_mul(e, one_minus_e);
    for (double& c : mu) c *= -2.0;
    mu[0] += 1.0;
  } else if (id == "salpeter") {
    if (fp.alpha != 1.0 || std::abs(fp.lambda - d.pdf(1.0)) > 1e-9) return std::nullopt;
    const double a = d.pdf(0.0);  // normalization constant
    const double scale = a / (1.35 * 19.0);
    const double top = std::pow(20.0, -1.35);
    // 1 + 19 e^-u = 20 (1 + v)
    Poly v = exp_neg_u_series(degree);
    for (double& c : v) c *= 19.0 / 20.0;
    v[0] -= 19.0 / 20.0;
    Poly sf = series_pow(v, -1.35);  // (1+v)^-1.35
    for (double& c : sf) c *= scale * top;
    sf[0] -= scale * top;  // survival = scale (20^-1.35 (1+v)^-1.35 - 20^-1.35)
    mu = sf;
    for (double& c : mu) c = -c;
    mu[0] += 1.0;
  } else if (id.rfind("fixed:case2", 0) == 0) {
    return PerturbationExpansion{fp, {}, max_order};
  } else {
    return std::nullopt;
  }
  Poly h = poly_mul(mu, m_inverse_series(fp, degree));
  h.resize(degree + 1);
  h[0] -= 1.0;
  return PerturbationExpansion{fp, series_to_terms(h, fp.alpha, max_order), max_order};
}

// ---------------------------------------------------------------------------
// correction series
// ---------------------------------------------------------------------------

namespace {

// delta(x) = d/dx [M(x) A(u)] = (M/x)(lambda alpha u^{alpha-1} A(u) - A'(u))
double shape_value(const FixedPoint& fp, const Poly& a, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return a.size() > 1 ? -a[1] : 0.0;  // u -> 0 limit
  const double u = -std::log(x);
  const double m = std::exp(log_m(fp, u));
  const double la = fp.lambda * fp.alpha;
  return m / x *
         (la * std::pow(u, fp.alpha - 1.0) * poly_eval(a, u) -
          poly_eval(poly_derivative(a), u));
}

// d(delta)/dx, used by the root-shift term of the third amplitude
double shape_slope(const FixedPoint& fp, const Poly& a, double x) {
  const double u = -std::log(x);
  const double m = std::exp(log_m(fp, u));
  const double la = fp.lambda * fp.alpha;
  const Poly ap = poly_derivative(a);
  const double b = la * std::pow(u, fp.alpha - 1.0) * poly_eval(a, u) - poly_eval(ap, u);
  const double bp = la * (fp.alpha - 1.0) * std::pow(u, fp.alpha - 2.0) * poly_eval(a, u) +
                    la * std::pow(u, fp.alpha - 1.0) * poly_eval(ap, u) -
                    poly_eval(poly_derivative(ap), u);
  return m / (x * x) * ((la * std::pow(u, fp.alpha - 1.0) - 1.0) * b - bp);
}

}  // namespace

CorrectionSeries::CorrectionSeries(FixedPoint fp, std::vector<Term> terms)
    : fp_(fp), terms_(std::move(terms)) {}

double CorrectionSeries::delta_term(size_t k, double x) const {
  return shape_value(fp_, terms_.at(k).shape, x);
}

double CorrectionSeries::delta(double n, double x) const {
  double acc = 0.0;
  for (const auto& t : terms_)
    acc += shape_value(fp_, t.shape, x) * std::pow(n, -t.exponent.value());
  return acc;
}

double CorrectionSeries::amplitude(double n) const {
  double acc = 0.0;
  for (const auto& t : terms_) acc += t.amplitude * std::pow(n, -t.exponent.value());
  return acc;
}

double CorrectionSeries::density(double n, double x) const {
  return make_fixed_point(fp_).pdf(x) + delta(n, x);
}

double CorrectionSeries::mass_below(double n, double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double u = -std::log(x);
  double factor = 1.0;
  for (const auto& t : terms_)
    factor += poly_eval(t.shape, u) * std::pow(n, -t.exponent.value());
  return std::exp(log_m(fp_, u)) * factor;
}

CorrectionSeries predict_corrections(const PerturbationExpansion& expansion,
                                     Rational target_order) {
  const FixedPoint& fp = expansion.fixed_point;
  require_case_two(fp, "predict_corrections");
  if (!(target_order > Rational{0, 1}))
    fail(Errc::invalid_argument, "target order must be positive");
  if (expansion.terms.empty())
    fail(Errc::invalid_argument,
         "empty expansion: the law sits on the fixed point, nothing to predict");

  // the exponent ledger works in exact rationals; estimator noise on alpha
  // is absorbed here (shapes still use the numeric alpha)
  const auto alpha = Rational::from_double(fp.alpha, 64, 1e-6);
  if (!alpha)
    fail(Errc::unsupported, "alpha is not a small rational; the exponent "
                            "bookkeeping needs one");

  // every single term with (beta - alpha)/alpha <= target must be available
  const double beta_needed = fp.alpha * (target_order.value() + 1.0);
  if (static_cast<double>(expansion.truncation_order) < beta_needed - 1e-9) {
    const int missing = expansion.truncation_order + 1;
    fail(Errc::extraction, "target order needs expansion terms up to beta = " +
                               std::to_string(beta_needed) + "; extract at least beta = " +
                               std::to_string(missing));
  }

  // H = sum c_i n^{-beta_i/alpha} u^{beta_i}; weights are beta/alpha, and the
  // final multiplication by n shifts every weight down by one.
  const Rational cap = target_order + Rational{1, 1};
  WeightedSeries h(cap);
  for (const auto& [beta, coeff] : expansion.terms) {
    const double rounded = std::round(beta);
    if (std::abs(beta - rounded) > 1e-9)
      fail(Errc::unsupported, "non-integer beta in the expansion");
    const auto b = static_cast<int>(rounded);
    if (!(static_cast<double>(b) > fp.alpha))
      fail(Errc::invalid_argument, "expansion term with beta <= alpha is not stable");
    Poly mono(b + 1, 0.0);
    mono[b] = coeff;
    h.add_term(Rational::of(b, 1) * Rational::of(alpha->den, alpha->num), mono);
  }

  const WeightedSeries cdf_terms =
      h.log1p().shifted(Rational{-1, 1}).exp_minus_one();

  std::vector<CorrectionSeries::Term> terms;
  for (const auto& [w, p] : cdf_terms.terms()) {
    if (w > target_order) continue;
    terms.push_back({w, poly_trim(p), 0.0});
  }
  if (terms.empty())
    fail(Errc::extraction, "no correction term at or below the target order");
  if (terms.size() > 3)
    fail(Errc::unsupported,
         "amplitude expansion is implemented to three orders; lower the target order");

  // amplitudes: perturbed-root expansion off the single zero of the leading
  // shape, Delta(n)/n^{-p1} = 2 sigma max_x [M(x) sum A_k(u) eps^k]
  const double u_hi = std::pow(138.0 / fp.lambda, 1.0 / fp.alpha);
  const auto leading = [&](double x) { return shape_value(fp, terms[0].shape, x); };
  std::vector<double> zeros;
  double prev_u = u_hi * 1e-4;
  double prev_v = leading(std::exp(-prev_u));
  for (int i = 1; i <= 4096; ++i) {
    const double u = u_hi * i / 4096.0;
    const double v = leading(std::exp(-u));
    if (v != 0.0 && prev_v != 0.0 && (v < 0) != (prev_v < 0))
      zeros.push_back(bisect_root([&](double uu) { return leading(std::exp(-uu)); },
                                  prev_u, u, 1e-13));
    if (v != 0.0) {
      prev_v = v;
      prev_u = u;
    }
  }
  if (zeros.size() != 1)
    fail(Errc::unsupported, "leading shape must have exactly one interior zero, found " +
                                std::to_string(zeros.size()));
  const double u_star = zeros.front();
  const double x_star = std::exp(-u_star);
  const double m_star = std::exp(log_m(fp, u_star));
  const double sigma = leading(std::exp(-1.5 * u_star)) > 0.0 ? 1.0 : -1.0;

  terms[0].amplitude = 2.0 * sigma * m_star * poly_eval(terms[0].shape, u_star);
  if (terms.size() > 1)
    terms[1].amplitude = 2.0 * sigma * m_star * poly_eval(terms[1].shape, u_star);
  if (terms.size() > 2) {
    const double d2 = shape_value(fp, terms[1].shape, x_star);
    const double d1p = shape_slope(fp, terms[0].shape, x_star);
    terms[2].amplitude =
        2.0 * sigma *
        (m_star * poly_eval(terms[2].shape, u_star) - d2 * d2 / (2.0 * d1p));
  }
  return CorrectionSeries(fp, std::move(terms));
}

}  // namespace evrg
