// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace evrg {

/// Exact bookkeeping for the n-exponents of the correction series.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t n, std::int64_t d);
  static std::optional<Rational> from_double(double x, std::int64_t max_den = 4096,
                                             double tol = 1e-12);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Rational operator+(const Rational& o) const { return of(num * o.den + o.num * den, den * o.den); }
  Rational operator-(const Rational& o) const { return of(num * o.den - o.num * den, den * o.den); }
  Rational operator*(const Rational& o) const { return of(num * o.num, den * o.den); }
  bool operator==(const Rational&) const = default;
  std::strong_ordering operator<=>(const Rational& o) const {
    const auto l = num * o.den, r = o.num * den;  // denominators stay tiny here
    return l <=> r;
  }
};

/// Dense polynomial in u = -log x; index = degree.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b);
void poly_axpy(Poly& acc, const Poly& p, double scale);
Poly poly_derivative(const Poly& p);
double poly_eval(const Poly& p, double u);
Poly poly_trim(Poly p);

// Power-series helpers used to build analytic eigen-expansions: coefficients
// of exp/log/pow of a series with a[0] as stated, truncated to the length of
// the input.
Poly series_exp(const Poly& a);             // exp(a), any a[0]
Poly series_log1p(const Poly& a);           // log(1 + a), a[0] == 0
Poly series_pow(const Poly& a, double exponent);  // (1 + a)^exponent, a[0] == 0

/// Finite sum of terms n^{-w} P_w(u) with all weights w > 0, truncated at a
/// fixed weight cap. Multiplication adds weights; exp/log compose formally.
class WeightedSeries {
 public:
  explicit WeightedSeries(Rational cap) : cap_(cap) {}

  void add_term(Rational weight, const Poly& p, double scale = 1.0);
  void add_series(const WeightedSeries& o, double scale = 1.0);
  WeightedSeries mul(const WeightedSeries& o) const;
  WeightedSeries shifted(Rational delta) const;  // weights + delta, re-truncated
  WeightedSeries log1p() const;                  // log(1 + S)
  WeightedSeries exp_minus_one() const;          // exp(S) - 1

  bool empty() const { return terms_.empty(); }
  Rational cap() const { return cap_; }
  std::optional<Rational> min_weight() const;
  const std::map<Rational, Poly>& terms() const { return terms_; }

 private:
  std::map<Rational, Poly> terms_;
  Rational cap_;
};

}  // namespace evrg
