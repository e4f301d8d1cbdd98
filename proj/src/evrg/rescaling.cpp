// SPDX-License-Identifier: Apache-2.0
#include "evrg/rescaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace evrg {

const char* case_name(Case c) {
  switch (c) {
    case Case::zero: return "case0";
    case Case::one_minus: return "case1-";
    case Case::one_plus: return "case1+";
    case Case::two: return "case2";
  }
  return "?";
}

Case case_from_name(const std::string& name) {
  if (name == "case0") return Case::zero;
  if (name == "case1-") return Case::one_minus;
  if (name == "case1+") return Case::one_plus;
  if (name == "case2") return Case::two;
  fail(Errc::unknown_id, "unknown case '" + name + "' (expected case0|case1-|case1+|case2)");
}

Support canonical_support(Case c) {
  switch (c) {
    case Case::zero: return Support::full_line();
    case Case::one_minus: return Support::right_bounded(0.0);
    case Case::one_plus: return Support::left_bounded(0.0);
    case Case::two: return Support::compact(0.0, 1.0);
  }
  fail(Errc::internal, "bad case");
}

RescalingGroup::RescalingGroup(Case c, double a) : kind(c), alpha(a) {
  if (!(a > 0) || !std::isfinite(a))
    fail(Errc::domain, "rescaling group needs alpha > 0");
}

namespace {
void require_in_support(const RescalingGroup& g, double x) {
  if (!canonical_support(g.kind).contains(x) || std::isnan(x))
    fail(Errc::domain, std::string("point outside the canonical support of ") +
                           case_name(g.kind));
}
}  // namespace

double rescale(const RescalingGroup& g, double s, double x) {
  require_in_support(g, x);
  switch (g.kind) {
    case Case::zero:
      return x + s / g.alpha;
    case Case::one_minus:
      return std::exp(-s / g.alpha) * x;
    case Case::one_plus:
      return std::exp(s / g.alpha) * x;
    case Case::two: {
      if (x == 0.0) return 0.0;  // continuous extension, keeps g_s a homeomorphism
      if (x == 1.0) return 1.0;
      return std::exp(std::exp(-s / g.alpha) * std::log(x));
    }
  }
  fail(Errc::internal, "bad case");
}

double rescale_derivative(const RescalingGroup& g, double s, double x) {
  require_in_support(g, x);
  switch (g.kind) {
    case Case::zero:
      return 1.0;
    case Case::one_minus:
      return std::exp(-s / g.alpha);
    case Case::one_plus:
      return std::exp(s / g.alpha);
    case Case::two: {
      const double q = std::exp(-s / g.alpha);
      // q * x^(q-1), +inf at x = 0 when q < 1
      return q * std::exp((q - 1.0) * std::log(x));
    }
  }
  fail(Errc::internal, "bad case");
}

double generator(const RescalingGroup& g, double x) {
  require_in_support(g, x);
  switch (g.kind) {
    case Case::zero:
      return 1.0 / g.alpha;
    case Case::one_minus:
      return -x / g.alpha;
    case Case::one_plus:
      return x / g.alpha;
    case Case::two:
      if (x == 0.0) return 0.0;  // -x log(x)/alpha -> 0
      return -x * std::log(x) / g.alpha;
  }
  fail(Errc::internal, "bad case");
}

double check_group_law(const RescalingGroup& g, double s1, double s2,
                       std::span<const double> grid) {
  double worst = 0.0;
  for (double x : grid) {
    const double composed = rescale(g, s2, rescale(g, s1, x));
    const double direct = rescale(g, s1 + s2, x);
    worst = std::max(worst, std::abs(composed - direct));
  }
  return worst;
}

RescalingGroup make_group(const std::string& id) {
  const auto colon = id.find(':');
  if (colon == std::string::npos)
    fail(Errc::unknown_id, "group id must look like 'case2:alpha=2', got '" + id + "'");
  const Case c = case_from_name(id.substr(0, colon));
  const std::string rest = id.substr(colon + 1);
  if (rest.rfind("alpha=", 0) != 0)
    fail(Errc::unknown_id, "group id must look like 'case2:alpha=2', got '" + id + "'");
  char* end = nullptr;
  const double alpha = std::strtod(rest.c_str() + 6, &end);
  if (end == rest.c_str() + 6 || *end != '\0')
    fail(Errc::unknown_id, "cannot parse alpha in group id '" + id + "'");
  return RescalingGroup(c, alpha);
}

std::string group_id(const RescalingGroup& g) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s:alpha=%.17g", case_name(g.kind), g.alpha);
  return buf;
}

}  // namespace evrg
