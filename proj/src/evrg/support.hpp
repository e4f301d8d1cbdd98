// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <limits>

#include "evrg/errors.hpp"

namespace evrg {

enum class SupportKind { full_line, left_bounded, right_bounded, compact };

/// Interval a probability law lives on. Bounds are extended reals; kind is
/// kept consistent with their finiteness.
struct Support {
  SupportKind kind;
  double lower;
  double upper;

  static constexpr double inf = std::numeric_limits<double>::infinity();

  static Support full_line() { return {SupportKind::full_line, -inf, inf}; }
  static Support left_bounded(double lo) { return {SupportKind::left_bounded, lo, inf}; }
  static Support right_bounded(double hi) { return {SupportKind::right_bounded, -inf, hi}; }
  static Support compact(double lo, double hi) {
    if (!(lo < hi)) fail(Errc::invalid_argument, "support bounds must satisfy lower < upper");
    return {SupportKind::compact, lo, hi};
  }

  bool bounded() const { return kind == SupportKind::compact; }
  bool contains(double x) const { return x >= lower && x <= upper; }
  double width() const { return upper - lower; }

  bool operator==(const Support&) const = default;
};

}  // namespace evrg
