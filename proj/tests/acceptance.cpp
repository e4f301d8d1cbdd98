// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit status is the number of failures.
// argv[1] is the path to the evrg CLI binary (used by the determinism check).

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "evrg/attraction.hpp"
#include "evrg/mc.hpp"
#include "evrg/perturbation.hpp"
#include "evrg/rg.hpp"

using namespace evrg;

namespace {

std::string g_cli_path;

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  return out;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto m = static_cast<double>(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<double> case_grid(const Distribution& m, int count) {
  const Support sup = m.support();
  const double lo = std::isfinite(sup.lower) ? sup.lower : m.quantile(1e-8);
  const double hi = std::isfinite(sup.upper) ? sup.upper : m.quantile(1.0 - 1e-8);
  return linspace(lo, hi, count);
}

// statistical error of the histogram L1 distance: sqrt(sum_b w_b^2 se_b^2)
double l1_stat_error(const ExperimentResult& r) {
  double acc = 0.0;
  for (size_t b = 0; b < r.std_error.size(); ++b) {
    const double w = r.bin_edges[b + 1] - r.bin_edges[b];
    acc += w * w * r.std_error[b] * r.std_error[b];
  }
  return std::sqrt(acc);
}

// ---- closed forms -------------------------------------------------------
const double kE32 = std::exp(-1.5), kE2 = std::exp(-2.0), kSqrt3 = std::sqrt(3.0);
const double kTentC12 = 1.5 * kSqrt3 * kE32;          // leading tent amplitude
const double kTentC1 = -15.0 / 8.0 * kE32;            // second tent amplitude
const double kTentC32Paper = 9.0 / 32.0 * kSqrt3 * kE32;
const double kTentC32True = 31.0 / 96.0 * kSqrt3 * kE32;  // perturbed-root value
const double kValleyC1 = 2.0 * kE2;
const double kValleyC2 = 3.0 * kE2;
const double kValleyC3Paper = 2.5 * kE2;
const double kValleyC3True = 4.5 * kE2;  // perturbed-root value

CorrectionSeries tent_series(double order_num, double order_den) {
  return predict_corrections(
      extract_expansion(make_tent(), FixedPoint(Case::two, 2, 2), 5),
      Rational::of(static_cast<std::int64_t>(order_num),
                   static_cast<std::int64_t>(order_den)));
}

CorrectionSeries valley_series(std::int64_t order) {
  return predict_corrections(
      extract_expansion(make_valley(), FixedPoint(Case::two, 1, 2), 4),
      Rational::of(order, 1));
}

// ---- criteria -----------------------------------------------------------

bool criterion_fixed_points(std::string& detail) {
  double worst = 0.0;
  for (Case c : {Case::zero, Case::one_minus, Case::one_plus, Case::two})
    for (double alpha : {0.5, 1.0, 2.0})
      for (double lambda : {0.5, 1.0, 3.0}) {
        const FixedPoint fp(c, alpha, lambda);
        const auto grid = case_grid(make_fixed_point(fp), 101);
        for (double s : {0.5, 1.0, 3.0})
          worst = std::max(worst, fixed_point_residual(fp, s, grid));
      }
  std::ostringstream os;
  os << "max residual " << worst;
  detail = os.str();
  return worst <= 1e-12;
}

bool criterion_group_laws(std::string& detail) {
  double worst = 0.0;
  for (Case c : {Case::zero, Case::one_minus, Case::one_plus, Case::two}) {
    const auto grid = case_grid(
        make_fixed_point(FixedPoint(c, 1.0, 1.0)), 100);
    for (double alpha : {0.5, 1.0, 2.0}) {
      const RescalingGroup g(c, alpha);
      for (auto [s1, s2] : {std::pair{0.7, 1.3}, {2.0, -0.5}, {1.7, -1.7},
                            {-0.9, -1.1}, {3.0, -3.0}})
        worst = std::max(worst, check_group_law(g, s1, s2, grid));
    }
  }
  std::ostringstream os;
  os << "max deviation " << worst;
  detail = os.str();
  return worst <= 1e-12;
}

bool criterion_proposition_witness(std::string& detail) {
  const RescalingGroup g(Case::two, 2.0);
  const Distribution limit = make_fixed_point(FixedPoint(Case::two, 2.0, 2.0));
  const auto grid = linspace(0.005, 0.995, 199);
  double prev = 1.0, last = 1.0;
  bool decreasing = true;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    const Distribution t = rg_transform(g, std::log(n), make_tent());
    double worst = 0.0;
    for (double x : grid) worst = std::max(worst, std::abs(t.cdf(x) - limit.cdf(x)));
    decreasing = decreasing && worst < prev;
    prev = worst;
    last = worst;
  }
  std::ostringstream os;
  os << "deviation at n=1e5 is " << last << (decreasing ? ", decreasing" : ", NOT decreasing");
  detail = os.str();
  return decreasing && last < 3e-3;
}

bool criterion_classifier(std::string& detail) {
  const auto tent = classify(make_tent());
  const auto valley = classify(make_valley());
  const auto salpeter = classify(make_salpeter_rescaled());
  std::ostringstream os;
  bool ok = tent.converges && valley.converges && salpeter.converges;
  if (ok) {
    ok = ok && std::abs(*tent.alpha_hat - 2.0) <= 1e-3 &&
         std::abs(*tent.lambda_hat - 2.0) <= 1e-3;
    ok = ok && std::abs(*valley.alpha_hat - 1.0) <= 1e-3 &&
         std::abs(*valley.lambda_hat - 2.0) <= 1e-3;
    ok = ok && std::abs(*salpeter.alpha_hat - 1.0) <= 1e-4 &&
         std::abs(*salpeter.lambda_hat - 0.0228741) <= 1e-4;
    os << "tent (" << *tent.alpha_hat << ", " << *tent.lambda_hat << "), valley ("
       << *valley.alpha_hat << ", " << *valley.lambda_hat << "), salpeter ("
       << *salpeter.alpha_hat << ", " << *salpeter.lambda_hat << ")";
  } else {
    os << "a classification did not converge";
  }
  detail = os.str();
  return ok;
}

bool criterion_extraction(std::string& detail) {
  const auto tent = extract_expansion(make_tent(), FixedPoint(Case::two, 2, 2), 5);
  const auto valley = extract_expansion(make_valley(), FixedPoint(Case::two, 1, 2), 4);
  const double tent_truth[][2] = {{3, 2.0}, {4, -19.0 / 6.0}, {5, 4.5}};
  const double valley_truth[][2] = {{2, 1.0}, {3, 1.0}, {4, 7.0 / 12.0}};
  bool ok = tent.terms.size() == 3 && valley.terms.size() == 3;
  double worst = 0.0;
  if (ok)
    for (int i = 0; i < 3; ++i) {
      ok = ok && tent.terms[i].first == tent_truth[i][0] &&
           valley.terms[i].first == valley_truth[i][0];
      worst = std::max(worst, std::abs(tent.terms[i].second - tent_truth[i][1]));
      worst = std::max(worst, std::abs(valley.terms[i].second - valley_truth[i][1]));
    }
  std::ostringstream os;
  os << "max coefficient error " << worst;
  detail = os.str();
  return ok && worst <= 1e-6;
}

bool criterion_amplitudes(std::string& detail) {
  const auto tent = tent_series(3, 2);
  const auto valley = valley_series(3);
  struct Row {
    const char* name;
    double predicted, paper;
  };
  const Row rows[] = {
      {"tent c_1/2", tent.terms()[0].amplitude, kTentC12},
      {"tent c_1", tent.terms()[1].amplitude, kTentC1},
      {"tent c_3/2", tent.terms()[2].amplitude, kTentC32Paper},
      {"valley c_1", valley.terms()[0].amplitude, kValleyC1},
      {"valley c_2", valley.terms()[1].amplitude, kValleyC2},
      {"valley c_3", valley.terms()[2].amplitude, kValleyC3Paper},
  };
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : rows) {
    const bool pass = std::abs(r.predicted - r.paper) <= 1e-5;
    ok = ok && pass;
    if (!pass)
      os << r.name << " predicted " << r.predicted << " vs printed " << r.paper << "; ";
  }
  if (!ok)
    os << "the printed third coefficients omit the zero-shift term of the "
          "piecewise L1 expansion (true values "
       << kTentC32True << " and " << kValleyC3True
       << "; criterion 7 and the oracle-agreement properties hold only with "
          "those)";
  else
    os << "all six coefficients within 1e-5 of the printed closed forms";
  detail = os.str();
  return ok;
}

bool criterion_residual_scaling(std::string& detail) {
  const auto series = tent_series(3, 2);
  const Distribution limit = make_fixed_point(FixedPoint(Case::two, 2, 2));
  const RescalingGroup g(Case::two, 2.0);
  std::vector<double> log_n, log_r;
  for (double n : {1e2, 1e3, 1e4, 1e5}) {
    const double exact = l1_distance(rg_transform(g, std::log(n), make_tent()), limit);
    log_n.push_back(std::log(n));
    log_r.push_back(std::log(std::abs(exact - series.amplitude(n))));
  }
  const double slope = fit_slope(log_n, log_r);
  std::ostringstream os;
  os << "log-log residual slope " << slope << " (first omitted order is n^-2)";
  detail = os.str();
  return slope <= -1.9;
}

bool criterion_fig2(std::string& detail) {
  // sqrt(n) Delta_hat against c_1/2 + c_1 n^-1/2 at N = 1e6, 50 bins
  const PredictionDensity limit =
      prediction_from(make_fixed_point(FixedPoint(Case::two, 2, 2)));
  std::ostringstream os;
  bool ok = true;
  for (double n : {100.0, 300.0, 1000.0, 3000.0}) {
    ExperimentConfig config;
    config.dist_id = "tent";
    config.block_size = static_cast<std::uint64_t>(n);
    config.replicas = 1000000;
    config.seed = 20260809;
    const auto r = run_experiment(config);
    const double measured = std::sqrt(n) * compare(r, limit, 0.0).l1;
    const double predicted = kTentC12 + kTentC1 / std::sqrt(n);
    // two statistical standard deviations plus the omitted n^-3/2 term
    const double band = 2.0 * std::sqrt(n) * l1_stat_error(r) + kTentC32True / n;
    ok = ok && std::abs(measured - predicted) <= band;
    os << "n=" << n << ": " << measured << " vs " << predicted << " (band " << band
       << "); ";
  }
  detail = os.str();
  return ok;
}

bool criterion_fig3(std::string& detail) {
  // shape corrections at n = 3000: prediction M' + delta_1/2 n^-1/2 + delta_1 n^-1
  const double n = 3000.0;
  ExperimentConfig config;
  config.dist_id = "tent";
  config.block_size = 3000;
  config.replicas = 1000000;
  config.seed = 424242;
  const auto r = run_experiment(config);
  const auto series = tent_series(1, 1);  // two orders: n^-1/2 and n^-1
  const auto table = compare(r, prediction_from(series, n), 0.5);
  int ok_bins = 0;
  for (const auto& row : table.rows) ok_bins += std::abs(row.z) <= 3.0;
  std::ostringstream os;
  os << ok_bins << "/50 bins within 3 sigma";
  detail = os.str();
  return ok_bins >= 45;
}

bool criterion_fig45(std::string& detail) {
  const double n = 300.0;
  std::ostringstream os;

  // amplitude: n Delta_hat against c_1 + c_2/n; N large enough that the
  // statistical noise sits well below the finite-size corrections
  ExperimentConfig amp;
  amp.dist_id = "valley";
  amp.block_size = 300;
  amp.replicas = 400000000;
  amp.seed = 777;
  const auto ra = run_experiment(amp);
  const PredictionDensity limit =
      prediction_from(make_fixed_point(FixedPoint(Case::two, 1, 2)));
  const double measured = n * compare(ra, limit, 0.0).l1;
  const double predicted = kValleyC1 + kValleyC2 / n;
  const double band = 2.0 * n * l1_stat_error(ra) + kValleyC3True / n;
  const bool amp_ok = std::abs(measured - predicted) <= band;
  os << "amplitude " << measured << " vs " << predicted << " (band " << band << "); ";

  // shape: n delta_hat against delta_1 + delta_2/n
  ExperimentConfig shape;
  shape.dist_id = "valley";
  shape.block_size = 300;
  shape.replicas = 2000000;
  shape.seed = 778;
  const auto rs = run_experiment(shape);
  const auto series = valley_series(2);
  const auto table = compare(rs, prediction_from(series, n), 1.0);
  int ok_bins = 0;
  for (const auto& row : table.rows) ok_bins += std::abs(row.z) <= 3.0;
  os << ok_bins << "/50 bins within 3 sigma";
  detail = os.str();
  return amp_ok && ok_bins >= 45;
}

bool criterion_salpeter(std::string& detail) {
  const Distribution s = make_salpeter_rescaled();
  const double lambda = s.pdf(1.0);
  const auto expansion = extract_expansion(s, FixedPoint(Case::two, 1.0, lambda), 3);
  if (expansion.terms.empty() || expansion.terms[0].first != 2.0) {
    detail = "no quadratic term extracted";
    return false;
  }
  const double c2 = -expansion.terms[0].second;
  const bool c2_ok = std::abs(c2 - 0.0143578) <= 1e-4;

  // exact transform against the one-term formula over [0.1, 0.9]
  const double n = 1e4;
  const Distribution t = rg_transform(RescalingGroup(Case::two, 1.0), std::log(n), s);
  double worst = 0.0;
  for (double x : linspace(0.1, 0.9, 81)) {
    const double lx = std::log(x);
    const double formula = lambda * std::pow(x, lambda - 1.0) *
                           (1.0 - (c2 / n) * lx * (lx + 2.0 / lambda));
    worst = std::max(worst, std::abs(t.pdf(x) - formula) / formula);
  }
  std::ostringstream os;
  os << "c2 = " << c2 << ", worst relative density deviation " << worst;
  detail = os.str();
  return c2_ok && worst <= 5e-3;
}

bool criterion_determinism(std::string& detail) {
  if (g_cli_path.empty()) {
    detail = "CLI path not supplied";
    return false;
  }
  const std::string dir = "acceptance_tmp";
  if (std::system(("mkdir -p " + dir).c_str()) != 0) {
    detail = "cannot create scratch directory";
    return false;
  }
  const std::string base = " simulate --dist tent --n 1000 --replicas 200000 "
                           "--seed 99 --bins 50 ";
  const std::string a = dir + "/det_a.csv", b = dir + "/det_b.csv";
  const std::string run_a =
      g_cli_path + base + "--workers 1 --out " + a + " > /dev/null";
  const std::string run_b =
      g_cli_path + base + "--workers 2 --out " + b + " > /dev/null";
  if (std::system(run_a.c_str()) != 0 || std::system(run_b.c_str()) != 0) {
    detail = "CLI invocation failed";
    return false;
  }
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream ca, cb;
  ca << fa.rdbuf();
  cb << fb.rdbuf();
  const bool same = !ca.str().empty() && ca.str() == cb.str();
  detail = same ? "byte-identical CSVs for 1 and 2 workers"
                : "outputs differ between worker counts";
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> run;
  };
  const Criterion criteria[] = {
      {1, "fixed-point identities across all four families", criterion_fixed_points},
      {2, "group laws with inverse pairs", criterion_group_laws},
      {3, "tent converges pointwise to its limit", criterion_proposition_witness},
      {4, "classifier recovers (alpha, lambda) for the worked examples",
       criterion_classifier},
      {5, "expansion extraction reproduces the printed coefficients",
       criterion_extraction},
      {6, "amplitude coefficients against the printed closed forms",
       criterion_amplitudes},
      {7, "exact-vs-predicted distance decays at the first omitted order",
       criterion_residual_scaling},
      {8, "tent amplitude sweep reproduction (N=1e6)", criterion_fig2},
      {9, "tent shape corrections at n=3000 (N=1e6)", criterion_fig3},
      {10, "valley amplitude and shape reproduction at n=300", criterion_fig45},
      {11, "salpeter finite-size correction", criterion_salpeter},
      {12, "simulate is byte-identical across worker counts", criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s  criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", c.id, c.title,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
