// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "evrg/support.hpp"

namespace evrg {

/// The four support-preserving rescaling families. The canonical supports are
/// the full line, the two half lines and the unit interval; other intervals
/// are reached through the affine remap utility, not by reparameterizing the
/// groups.
enum class Case { zero, one_minus, one_plus, two };

const char* case_name(Case c);          // "case0", "case1-", "case1+", "case2"
Case case_from_name(const std::string& name);

Support canonical_support(Case c);

/// One-parameter group g_s of homeomorphisms of its canonical support,
/// g_{s1} o g_{s2} = g_{s1+s2}. alpha > 0 sets the scale of the parameter.
struct RescalingGroup {
  Case kind;
  double alpha;

  RescalingGroup(Case c, double a);
  Support support() const { return canonical_support(kind); }
};

/// g_s(x). s may be negative (group inverses); x must lie in the support.
double rescale(const RescalingGroup& g, double s, double x);

/// dg_s/dx at x, used by the density transform.
double rescale_derivative(const RescalingGroup& g, double s, double x);

/// Generator f(x) = d/ds g_s(x) at s = 0. Vanishes exactly at the support
/// boundary and nowhere else.
double generator(const RescalingGroup& g, double x);

/// max over the grid of |g_{s2}(g_{s1}(x)) - g_{s1+s2}(x)|.
double check_group_law(const RescalingGroup& g, double s1, double s2,
                       std::span<const double> grid);

/// Parse "case2:alpha=2".
RescalingGroup make_group(const std::string& id);
std::string group_id(const RescalingGroup& g);

}  // namespace evrg
