// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>

#include "evrg/distribution.hpp"

namespace evrg {

/// T_s mu = mu(g_s(.))^n with n = e^s, as an exact Distribution. The base
/// support must equal the group's canonical support and s must be >= 0.
/// Applying to an already transformed law with the same group adds the
/// parameters instead of nesting evaluations.
Distribution rg_transform(const RescalingGroup& g, double s, const Distribution& base);

/// max over the grid of |M(g_s(x))^n - M(x)| for the fixed point's own group.
double fixed_point_residual(const FixedPoint& fp, double s, std::span<const double> grid);

/// L1 (total variation) distance between two laws with equal compact support:
/// sign changes of the density difference are located by grid scan plus
/// bisection and each signed piece is summed exactly from the CDFs.
double l1_distance(const Distribution& a, const Distribution& b);

/// Same metric for raw densities on [0,1] without antiderivatives: each
/// signed piece is integrated adaptively (abs tol 1e-10 overall); the
/// neighborhood of 0 is handled through the u = -log x substitution with the
/// tail truncated once its contribution falls below 1e-12.
double l1_distance(const std::function<double(double)>& d1,
                   const std::function<double(double)>& d2);

}  // namespace evrg
