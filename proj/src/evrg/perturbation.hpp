// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "evrg/distribution.hpp"
#include "evrg/series.hpp"

namespace evrg {

/// mu(x) = M(x)(1 + sum_i c_i (-log x)^{beta_i}) around a compact-family
/// fixed point; terms ordered by increasing beta (decreasing eigenvalue).
/// All beta_i > alpha inside the basin.
struct PerturbationExpansion {
  FixedPoint fixed_point;
  std::vector<std::pair<double, double>> terms;  // (beta_i, c_i)
  int truncation_order = 0;                      // highest degree examined
};

/// nu_beta = n^{1 - beta/alpha}: the factor a (-log x)^beta deformation picks
/// up under one transform step.
double eigenvalue(double beta, double alpha, double n);

/// Differential of T_s at the fixed point, acting on eta:
/// x -> n M(g_s(x))^{n-1} eta(g_s(x)) with n = e^s.
std::function<double(double)> differential_apply(const FixedPoint& fp, double s,
                                                 std::function<double(double)> eta);

/// Taylor coefficients of h(u) = mu(e^-u)/M(e^-u) - 1 at u = 0 up to degree
/// max_order, by central finite differences with Richardson extrapolation
/// over step halvings. Coefficients below 1e-9 are discarded; surviving
/// terms must satisfy beta > alpha (basin membership) or the extraction
/// fails. Needs the survival function to continue across x = 1 (all
/// built-ins do).
PerturbationExpansion extract_expansion(const Distribution& d, const FixedPoint& fp,
                                        int max_order);

/// Closed-form expansions of the built-in examples (series composition, no
/// finite differences); nullopt when dist/fp is not a known pair. The numeric
/// extractor is tested against these.
std::optional<PerturbationExpansion> analytic_expansion(const Distribution& d,
                                                        const FixedPoint& fp,
                                                        int max_order);

/// Finite-size correction series around the fixed point:
///   cdf:      T_s mu = M (1 + sum_k A_k(u) n^{-p_k})
///   density:  rho_n  = M' + sum_k delta_k(x) n^{-p_k},  delta_k = d/dx[M A_k]
///   L1 size:  Delta(n) = sum_k c_k n^{-p_k}
class CorrectionSeries {
 public:
  struct Term {
    Rational exponent;  // p_k
    Poly shape;         // A_k(u)
    double amplitude;   // c_k
  };

  CorrectionSeries(FixedPoint fp, std::vector<Term> terms);

  const FixedPoint& fixed_point() const { return fp_; }
  const std::vector<Term>& terms() const { return terms_; }

  double delta_term(size_t k, double x) const;  // delta_k(x)
  double delta(double n, double x) const;       // truncated shape correction
  double amplitude(double n) const;             // Delta_pred(n)
  double density(double n, double x) const;     // M'(x) + delta(n, x)
  double mass_below(double n, double x) const;  // exact antiderivative of density

 private:
  FixedPoint fp_;
  std::vector<Term> terms_;
};

/// Expand the transformed law to the requested order in n^{-1}: collects every
/// product of expansion terms with summed exponent (sum beta - alpha)/alpha
/// <= target_order, forms the shape functions, and derives the L1 amplitudes
/// by the perturbed-root expansion of int |rho_n - M'| (zero of the leading
/// shape shifted order by order). Amplitudes are carried to three orders.
CorrectionSeries predict_corrections(const PerturbationExpansion& expansion,
                                     Rational target_order);

}  // namespace evrg
