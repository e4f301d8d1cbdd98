// SPDX-License-Identifier: Apache-2.0
#include "evrg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "evrg/errors.hpp"

namespace evrg {
namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
constexpr double kx[15] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kw[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double gw[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k15 = 0.0, g7 = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double v = f(c + h * kx[i]);
    k15 += kw[i] * v;
    if (i % 2 == 1) g7 += gw[i / 2] * v;
  }
  k15 *= h;
  g7 *= h;
  double err = std::abs(k15 - g7);
  // sharpen the estimate the usual way; keep it conservative near zero
  if (err > 0) err = std::min(err, std::pow(200.0 * err, 1.5));
  return {a, b, k15, err};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_panels) {
  if (a == b) return 0.0;
  std::priority_queue<Panel> panels;
  Panel first = evaluate_panel(f, a, b);
  double total = first.value, total_err = first.err;
  panels.push(first);
  int used = 1;
  while (total_err > abs_tol && used < max_panels) {
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // panel collapsed to rounding
      total_err -= worst.err;
      continue;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.err + right.err - worst.err;
    panels.push(left);
    panels.push(right);
    ++used;
  }
  if (total_err > abs_tol)
    fail(Errc::no_convergence, "quadrature did not reach tolerance; achieved " +
                                   std::to_string(total_err) + " with " +
                                   std::to_string(used) + " panels");
  return total;
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi) {
  for (int i = 0; i < 200 && lo < hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  double flo = f(lo);
  if (flo == 0) return lo;
  for (int i = 0; i < 200 && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace evrg
