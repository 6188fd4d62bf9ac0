#ifndef COMPDIST_METRICS_HPP
#define COMPDIST_METRICS_HPP

// Compressibility functionals of a distribution: the relative k-term error
// limit G_q(kappa), the oracle tradeoff H(delta) = inf_rho G_2(rho
// delta)/(1-rho), the critical undersampling ratio delta_0 where H crosses
// 1-delta, and the empirical convergence checks that tie Monte Carlo
// k-term errors back to G.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "compdist/distribution.hpp"
#include "compdist/kterm.hpp"
#include "compdist/quadrature.hpp"
#include "compdist/rng.hpp"

namespace compdist {

enum class GMethod { closed_form, quadrature };

struct GValue {
  double value = 0.0;
  GMethod method = GMethod::quadrature;
  bool unbounded_moment = false;
};

// Closed forms for the Laplace G-functional:
//   q = 1: 1 - kappa (1 + ln 1/kappa)
//   q = 2: 1 - kappa (1 + ln 1/kappa + (ln 1/kappa)^2 / 2)
inline double g_fun_laplace_closed(int q, double kappa) {
  if (q != 1 && q != 2) {
    throw std::invalid_argument("g_fun_laplace_closed: only q in {1,2}");
  }
  if (!(kappa > 0.0) || kappa > 1.0) {
    throw std::domain_error("g_fun_laplace_closed: kappa must lie in (0,1]");
  }
  const double L = std::log(1.0 / kappa);
  if (q == 1) return 1.0 - kappa * (1.0 + L);
  return 1.0 - kappa * (1.0 + L + 0.5 * L * L);
}

enum class GPath { automatic, quadrature_only };

// G_q(kappa) = (int_0^{Fbar^-1(1-kappa)} x^q pbar) / E|X|^q. For small
// kappa the numerator is evaluated as E|X|^q minus the tail integral, which
// keeps relative accuracy as G -> 1; for large kappa it is integrated
// directly over the short interval. quadrature_only bypasses the Laplace
// closed forms (used to validate them).
inline GValue g_fun(const Distribution& dist, double q, double kappa,
                    GPath path = GPath::automatic) {
  if (!(q > 0.0)) throw std::domain_error("g_fun: q must be positive");
  if (!(kappa >= 0.0) || kappa > 1.0) {
    throw std::domain_error("g_fun: kappa must lie in [0,1]");
  }
  GValue out;
  if (!dist.finite_moment(q)) {
    if (kappa == 0.0) {
      throw std::domain_error("g_fun: kappa = 0 undefined for unbounded moment");
    }
    out.value = 0.0;
    out.unbounded_moment = true;
    return out;
  }
  if (kappa == 0.0) {
    out.value = 1.0;
    out.method = GMethod::closed_form;
    return out;
  }
  if (kappa == 1.0) {
    out.value = 0.0;
    out.method = GMethod::closed_form;
    return out;
  }
  if (path == GPath::automatic && dist.family() == Family::laplace &&
      (q == 1.0 || q == 2.0)) {
    out.value = g_fun_laplace_closed(static_cast<int>(q), kappa);
    out.method = GMethod::closed_form;
    return out;
  }

  const double denom = dist.absolute_moment(q).value;
  const double t_up = dist.folded_quantile(1.0 - kappa);
  double numer;
  if (path == GPath::automatic && kappa <= 0.5) {
    numer = denom - dist.tail_moment(q, t_up);
  } else {
    numer = integrate(
        [&dist, q](double x) { return std::pow(x, q) * dist.folded_pdf(x); },
        0.0, t_up, 1e-9, denom * 1e-13);
  }
  out.value = std::clamp(numer / denom, 0.0, 1.0);
  out.method = GMethod::quadrature;
  return out;
}

struct GCurvePoint {
  double kappa = 0.0;
  double g = 0.0;
  GMethod method = GMethod::quadrature;
};

struct GCurve {
  std::string dist;
  double q = 2.0;
  bool unbounded_moment = false;
  std::vector<GCurvePoint> points;
};

inline GCurve build_g_curve(const Distribution& dist, double q,
                            const std::vector<double>& kappas,
                            GPath path = GPath::automatic) {
  GCurve curve;
  curve.dist = dist.spec_string();
  curve.q = q;
  curve.unbounded_moment = !dist.finite_moment(q);
  for (double kappa : kappas) {
    const GValue v = g_fun(dist, q, kappa, path);
    curve.points.push_back({kappa, v.value, v.method});
  }
  return curve;
}

struct HValue {
  double value = 0.0;
  double rho_star = 0.0;
  bool degenerate = false;  // infinite second moment: G_2 vanishes
};

// H(delta) = inf over rho in (0,1) of G_2(rho delta) / (1-rho), scanned on
// a 256-point log-spaced grid and refined by golden section around the best
// cell. The grid scan guards against non-unimodal objectives.
inline HValue h_fun(const Distribution& dist, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("h_fun: delta must lie in (0,1)");
  }
  HValue out;
  if (!dist.finite_moment(2.0)) {
    out.value = 0.0;
    out.rho_star = std::numeric_limits<double>::quiet_NaN();
    out.degenerate = true;
    return out;
  }
  const auto objective = [&dist, delta](double rho) {
    return g_fun(dist, 2.0, rho * delta).value / (1.0 - rho);
  };
  constexpr int kGrid = 256;
  const double lo = 1e-4;
  const double hi = 1.0 - 1e-4;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  double best_rho = lo;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> rhos(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    const double t = static_cast<double>(i) / (kGrid - 1);
    rhos[i] = std::exp(log_lo + t * (log_hi - log_lo));
    const double v = objective(rhos[i]);
    if (v < best_val) {
      best_val = v;
      best_rho = rhos[i];
    }
  }
  const auto it = std::lower_bound(rhos.begin(), rhos.end(), best_rho);
  const std::size_t idx = static_cast<std::size_t>(it - rhos.begin());
  const double bracket_lo = idx > 0 ? rhos[idx - 1] : lo;
  const double bracket_hi = idx + 1 < rhos.size() ? rhos[idx + 1] : hi;
  const auto [rho_star, value] =
      golden_section_min(objective, bracket_lo, bracket_hi, 1e-8);
  if (value < best_val) {
    out.value = value;
    out.rho_star = rho_star;
  } else {
    out.value = best_val;
    out.rho_star = best_rho;
  }
  return out;
}

enum class Delta0Marker {
  found,
  not_found,            // H < 1-delta on the whole grid
  always_compressible,  // infinite second moment
  degenerate_boundary   // |H - (1-delta)| below resolution everywhere
};

struct Delta0Result {
  std::optional<double> delta0;
  Delta0Marker marker = Delta0Marker::not_found;
  // Grid cells where H - (1-delta) changes sign; more than one entry means
  // the crossing structure is not the single transition the scan assumes.
  std::vector<std::pair<double, double>> crossings;
};

// Smallest sign change of H(delta) - (1-delta) over a 200-point grid in
// (0.001, 0.999), bisected to 1e-4. A small dead band absorbs quadrature
// noise so densities sitting exactly on the boundary report as degenerate
// rather than producing spurious roots.
inline Delta0Result critical_undersampling(const Distribution& dist) {
  Delta0Result res;
  if (!dist.finite_moment(2.0)) {
    res.marker = Delta0Marker::always_compressible;
    return res;
  }
  constexpr int kGrid = 200;
  constexpr double kBand = 3e-6;
  const double lo = 0.001;
  const double hi = 0.999;
  const auto f = [&dist](double delta) {
    return h_fun(dist, delta).value - (1.0 - delta);
  };
  std::vector<double> deltas(kGrid), values(kGrid);
  int prev_sign = 0;
  int prev_idx = -1;
  bool all_zero = true;
  for (int i = 0; i < kGrid; ++i) {
    deltas[i] = lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
    values[i] = f(deltas[i]);
    const int sign = values[i] > kBand ? 1 : (values[i] < -kBand ? -1 : 0);
    if (sign != 0) all_zero = false;
    if (sign != 0 && prev_sign != 0 && sign != prev_sign) {
      res.crossings.emplace_back(deltas[prev_idx], deltas[i]);
    }
    if (sign != 0) {
      prev_sign = sign;
      prev_idx = i;
    }
  }
  if (all_zero) {
    res.marker = Delta0Marker::degenerate_boundary;
    return res;
  }
  if (res.crossings.empty()) {
    res.marker = Delta0Marker::not_found;
    return res;
  }
  double a = res.crossings.front().first;
  double b = res.crossings.front().second;
  double fa = f(a);
  while (b - a > 1e-4) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if ((fa > 0.0) == (fm > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  res.delta0 = 0.5 * (a + b);
  res.marker = Delta0Marker::found;
  return res;
}

struct FourthMomentRow {
  double kappa = 0.0;
  double g2 = 0.0;
  double bound = 0.0;  // (1 - sqrt(kappa))^2
  bool at_least = false;
};

// Sign pattern of G_2(kappa) against (1-sqrt(kappa))^2. Finite fourth
// moment forces G_2 >= bound near zero; equality everywhere characterizes
// the boundary density.
inline std::vector<FourthMomentRow> fourth_moment_criterion(
    const Distribution& dist, const std::vector<double>& kappas) {
  if (!dist.finite_moment(2.0)) {
    throw std::domain_error("fourth_moment_criterion: needs finite second moment");
  }
  std::vector<FourthMomentRow> rows;
  rows.reserve(kappas.size());
  for (double kappa : kappas) {
    FourthMomentRow row;
    row.kappa = kappa;
    row.g2 = g_fun(dist, 2.0, kappa).value;
    const double r = 1.0 - std::sqrt(kappa);
    row.bound = r * r;
    row.at_least = row.g2 >= row.bound - 1e-9;
    rows.push_back(row);
  }
  return rows;
}

struct ConvergenceRow {
  std::size_t n = 0;
  double mean_sigma_q = 0.0;  // averaged empirical relative error, q-th power
  double mean_gap = 0.0;      // |mean - G_q(kappa)|
  double median_gap = 0.0;    // median over seeds of |sigma_q - G_q(kappa)|
};

// Monte Carlo check of the almost sure convergence of the relative k-term
// error to G_q(kappa): the gap must shrink as N grows.
inline std::vector<ConvergenceRow> convergence_check(
    const Distribution& dist, double q, double kappa,
    const std::vector<std::size_t>& n_list,
    const std::vector<std::uint64_t>& seeds) {
  if (!(kappa > 0.0) || !(kappa < 1.0)) {
    throw std::domain_error("convergence_check: kappa must lie in (0,1)");
  }
  const double g = g_fun(dist, q, kappa).value;
  std::vector<ConvergenceRow> rows;
  for (std::size_t n : n_list) {
    const std::size_t k = static_cast<std::size_t>(kappa * static_cast<double>(n));
    std::vector<double> sigma_q;
    sigma_q.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
      const std::vector<double> x =
          dist.sample(n, derive_seed(seed, n, seed_role::signal));
      const KTermError err = empirical_relative_kterm_error(x, k, q);
      sigma_q.push_back(std::pow(err.relative, q));
    }
    ConvergenceRow row;
    row.n = n;
    double mean = 0.0;
    std::vector<double> gaps;
    gaps.reserve(sigma_q.size());
    for (double v : sigma_q) {
      mean += v;
      gaps.push_back(std::fabs(v - g));
    }
    mean /= static_cast<double>(sigma_q.size());
    row.mean_sigma_q = mean;
    row.mean_gap = std::fabs(mean - g);
    std::sort(gaps.begin(), gaps.end());
    row.median_gap = gaps[gaps.size() / 2];
    rows.push_back(row);
  }
  return rows;
}

enum class MomentVerdict {
  compressible_infinite_variance,
  intermediate,
  incompressible_finite_fourth
};

inline const char* to_string(MomentVerdict v) {
  switch (v) {
    case MomentVerdict::compressible_infinite_variance:
      return "compressible_infinite_variance";
    case MomentVerdict::intermediate:
      return "intermediate";
    case MomentVerdict::incompressible_finite_fourth:
      return "incompressible_finite_fourth";
  }
  return "?";
}

struct HSample {
  double delta = 0.0;
  double h = 0.0;
  double rho_star = 0.0;
};

struct CompressibilityReport {
  std::string dist;
  bool finite_second = true;
  bool finite_fourth = true;
  MomentVerdict verdict = MomentVerdict::intermediate;
  std::vector<HSample> h_samples;
  std::optional<double> delta0;
  Delta0Marker delta0_marker = Delta0Marker::not_found;
  std::size_t delta0_crossings = 0;
};

inline CompressibilityReport build_report(const Distribution& dist,
                                          const std::vector<double>& delta_grid) {
  CompressibilityReport rep;
  rep.dist = dist.spec_string();
  rep.finite_second = dist.finite_moment(2.0);
  rep.finite_fourth = dist.finite_moment(4.0);
  if (!rep.finite_second) {
    rep.verdict = MomentVerdict::compressible_infinite_variance;
  } else if (!rep.finite_fourth) {
    rep.verdict = MomentVerdict::intermediate;
  } else {
    rep.verdict = MomentVerdict::incompressible_finite_fourth;
  }
  for (double delta : delta_grid) {
    const HValue h = h_fun(dist, delta);
    rep.h_samples.push_back({delta, h.value, h.rho_star});
  }
  const Delta0Result d0 = critical_undersampling(dist);
  rep.delta0 = d0.delta0;
  rep.delta0_marker = d0.marker;
  rep.delta0_crossings = d0.crossings.size();
  return rep;
}

}  // namespace compdist

#endif
