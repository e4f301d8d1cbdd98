// SPDX-License-Identifier: Apache-2.0
#include "evrg/series.hpp"

#include <cmath>
#include <numeric>

#include "evrg/errors.hpp"

namespace evrg {

Rational Rational::of(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(Errc::internal, "rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const auto g = std::gcd(n < 0 ? -n : n, d);
  return {g ? n / g : n, g ? d / g : d};
}

std::optional<Rational> Rational::from_double(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued-fraction convergents
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double v = x;
  for (int i = 0; i < 64; ++i) {
    const double fl = std::floor(v);
    if (std::abs(fl) > 1e15) return std::nullopt;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) return std::nullopt;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - x) <= tol * std::max(1.0, std::abs(x))) return of(p1, q1);
    const double rem = v - fl;
    if (rem < 1e-15) break;
    v = 1.0 / rem;
  }
  return std::nullopt;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void poly_axpy(Poly& acc, const Poly& p, double scale) {
  if (acc.size() < p.size()) acc.resize(p.size(), 0.0);
  for (size_t i = 0; i < p.size(); ++i) acc[i] += scale * p[i];
}

Poly poly_derivative(const Poly& p) {
  if (p.size() <= 1) return {};
  Poly out(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) out[i - 1] = p[i] * static_cast<double>(i);
  return out;
}

double poly_eval(const Poly& p, double u) {
  double acc = 0.0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * u + p[i];
  return acc;
}

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  return p;
}

Poly series_exp(const Poly& a) {
  if (a.empty()) return {1.0};
  const size_t n = a.size();
  Poly out(n, 0.0);
  out[0] = std::exp(a[0]);
  // out' = a' * out, solved coefficient by coefficient
  for (size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (size_t j = 1; j <= k; ++j) acc += static_cast<double>(j) * a[j] * out[k - j];
    out[k] = acc / static_cast<double>(k);
  }
  return out;
}

Poly series_log1p(const Poly& a) {
  if (a.empty()) return {};
  if (a[0] != 0.0) fail(Errc::internal, "series_log1p needs a[0] == 0");
  const size_t n = a.size();
  Poly out(n, 0.0);
  // out' = a' / (1 + a)  =>  a' = out' + out' * a, match coefficients
  for (size_t k = 1; k < n; ++k) {
    double acc = static_cast<double>(k) * a[k];
    for (size_t j = 1; j < k; ++j) acc -= static_cast<double>(j) * out[j] * a[k - j];
    out[k] = acc / static_cast<double>(k);
  }
  return out;
}

Poly series_pow(const Poly& a, double exponent) {
  if (a.empty()) return {1.0};
  if (a[0] != 0.0) fail(Errc::internal, "series_pow needs a[0] == 0");
  Poly lg = series_log1p(a);
  for (double& c : lg) c *= exponent;
  return series_exp(lg);
}

void WeightedSeries::add_term(Rational weight, const Poly& p, double scale) {
  if (weight > cap_ || p.empty()) return;
  poly_axpy(terms_[weight], p, scale);
}

void WeightedSeries::add_series(const WeightedSeries& o, double scale) {
  for (const auto& [w, p] : o.terms_) add_term(w, p, scale);
}

WeightedSeries WeightedSeries::mul(const WeightedSeries& o) const {
  WeightedSeries out(cap_);
  for (const auto& [wa, pa] : terms_)
    for (const auto& [wb, pb] : o.terms_) {
      const Rational w = wa + wb;
      if (w > cap_) break;  // o.terms_ ordered by weight
      out.add_term(w, poly_mul(pa, pb));
    }
  return out;
}

WeightedSeries WeightedSeries::shifted(Rational delta) const {
  WeightedSeries out(cap_);
  for (const auto& [w, p] : terms_) out.add_term(w + delta, p);
  return out;
}

std::optional<Rational> WeightedSeries::min_weight() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

WeightedSeries WeightedSeries::log1p() const {
  WeightedSeries acc(cap_);
  if (terms_.empty()) return acc;
  const Rational w0 = *min_weight();
  if (!(w0 > Rational{0, 1})) fail(Errc::internal, "log1p needs positive weights");
  WeightedSeries power = *this;
  double sign = 1.0;
  for (int k = 1;; ++k) {
    acc.add_series(power, sign / k);
    sign = -sign;
    power = power.mul(*this);
    if (power.empty()) break;
  }
  return acc;
}

WeightedSeries WeightedSeries::exp_minus_one() const {
  WeightedSeries acc(cap_);
  if (terms_.empty()) return acc;
  const Rational w0 = *min_weight();
  if (!(w0 > Rational{0, 1})) fail(Errc::internal, "exp needs positive weights");
  WeightedSeries power = *this;
  double factorial = 1.0;
  for (int k = 1;; ++k) {
    factorial *= k;
    acc.add_series(power, 1.0 / factorial);
    power = power.mul(*this);
    if (power.empty()) break;
  }
  return acc;
}

}  // namespace evrg
