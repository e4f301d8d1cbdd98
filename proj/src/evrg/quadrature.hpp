// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

namespace evrg {

/// Adaptive quadrature: bisection of panels with a fixed 15-point
/// Gauss-Kronrod rule on each, absolute tolerance `abs_tol`, at most
/// `max_panels` panels. Throws Errc::no_convergence carrying the achieved
/// error estimate if the budget is exhausted first.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_panels = 10000);

/// Infimum of { x in [lo, hi] : pred(x) true } for a monotone predicate
/// (false below, true above), located by bisection to machine precision.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi);

/// Root of f in [lo, hi] (f changes sign there), bisection to `xtol`.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol = 1e-14);

}  // namespace evrg
