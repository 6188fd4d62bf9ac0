#ifndef COMPDIST_INSTANCE_OPT_HPP
#define COMPDIST_INSTANCE_OPT_HPP

// Instance-optimality analysis: the l1 instance-optimality constant from
// the robust null space property, the kappa_0 triviality criterion for
// Gaussian encoders, and a randomized NSP falsifier.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "compdist/distribution.hpp"
#include "compdist/encoder.hpp"
#include "compdist/metrics.hpp"
#include "compdist/rng.hpp"

namespace compdist {

// Strong-threshold constant of the Donoho-Tanner Gaussian phase
// transition: the largest sparsity fraction k/N at which the robust null
// space property can hold with some eta < 1.
inline constexpr double kKappa0 = 0.18;

// C_k = 2 (1 + eta) / (1 - eta); minimal value 2 at eta = 0, +inf once the
// robust null space property fails (eta >= 1).
inline double io_constant(double eta) {
  if (!(eta >= 0.0)) throw std::domain_error("io_constant: eta must be >= 0");
  if (eta >= 1.0) return std::numeric_limits<double>::infinity();
  return 2.0 * (1.0 + eta) / (1.0 - eta);
}

struct IOAssessment {
  std::string dist;
  double kappa0 = kKappa0;
  double g1_at_kappa0 = 0.0;
  bool trivial_at_kappa0 = false;  // G_1(kappa0) >= 1/2
  std::optional<double> weak_boundary_delta0;  // root of G_1(delta) = 1/2
  bool unbounded_first_moment = false;
};

// Evaluates G_1 at kappa0 and locates the weak-guarantee boundary where
// G_1 crosses 1/2. Above the threshold, uniform instance-optimality bounds
// cannot beat the zero estimator for vectors drawn from this density.
inline IOAssessment trivial_guarantee_test(const Distribution& dist) {
  IOAssessment res;
  res.dist = dist.spec_string();
  if (!dist.finite_moment(1.0)) {
    // G_1 vanishes for every positive kappa: nothing to test.
    res.unbounded_first_moment = true;
    res.g1_at_kappa0 = 0.0;
    res.trivial_at_kappa0 = false;
    return res;
  }
  res.g1_at_kappa0 = g_fun(dist, 1.0, kKappa0).value;
  res.trivial_at_kappa0 = res.g1_at_kappa0 >= 0.5;

  // G_1 decreases from 1 to 0 on [0, 1]; bisect G_1(delta) - 1/2.
  double lo = 1e-12;
  double hi = 1.0 - 1e-12;
  double mid = 0.5;
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double g = g_fun(dist, 1.0, mid).value;
    if (std::fabs(g - 0.5) < 1e-6 * 0.5) break;
    if (g > 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  res.weak_boundary_delta0 = mid;
  return res;
}

struct NspCheckResult {
  bool falsified = false;  // a kernel vector violated the eta bound
  double worst_ratio = 0.0;  // max over directions of ||z_top||_1/||z_tail||_1
  std::size_t violations = 0;
  std::size_t directions = 0;
};

// Randomized falsification of the robust null space property of order k
// with constant eta: random directions are projected onto kernel(Phi) and
// the worst-case support (the top-k magnitudes) is tested against
// ||z_S||_1 < eta ||z_rest||_1. One-sided: a clean run is evidence, not a
// certificate, since certifying the NSP is hard in general.
inline NspCheckResult robust_nsp_check(const EncoderInstance& enc, double eta,
                                       std::size_t k, std::size_t n_directions,
                                       std::uint64_t seed) {
  if (!(eta >= 0.0)) throw std::domain_error("robust_nsp_check: eta must be >= 0");
  if (enc.m >= enc.N) {
    throw std::domain_error("robust_nsp_check: kernel is trivial (m >= N)");
  }
  if (k >= enc.N) {
    throw std::domain_error("robust_nsp_check: requires k < N");
  }
  NspCheckResult res;
  res.directions = n_directions;
  if (k == 0 || n_directions == 0) return res;  // vacuous

  const Eigen::MatrixXd& phi = enc.entries;
  Eigen::LLT<Eigen::MatrixXd> gram_llt(phi * phi.transpose());
  const auto n = static_cast<Eigen::Index>(enc.N);

  for (std::size_t d = 0; d < n_directions; ++d) {
    GaussianSampler normal(derive_seed(seed, d, seed_role::direction));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    Eigen::VectorXd z = v - phi.transpose() * gram_llt.solve(phi * v);
    Eigen::VectorXd mags = z.cwiseAbs();
    std::sort(mags.data(), mags.data() + mags.size(), std::greater<double>());
    double top = 0.0;
    for (std::size_t i = 0; i < k; ++i) top += mags[static_cast<Eigen::Index>(i)];
    double tail = 0.0;
    for (Eigen::Index i = static_cast<Eigen::Index>(k); i < n; ++i) tail += mags[i];
    const double ratio = (tail > 0.0)
                             ? top / tail
                             : std::numeric_limits<double>::infinity();
    res.worst_ratio = std::max(res.worst_ratio, ratio);
    if (!(top < eta * tail)) ++res.violations;
  }
  res.falsified = res.violations > 0;
  return res;
}

}  // namespace compdist

#endif
