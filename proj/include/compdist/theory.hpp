#ifndef COMPDIST_THEORY_HPP
#define COMPDIST_THEORY_HPP

// Closed-form performance laws for Gaussian measurements: the 1 - delta
// least-squares law, the oracle error with its conditioning factor, and
// chi-square concentration envelopes for both.

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace compdist {

inline double ls_expected_rel_error(double delta) { return 1.0 - delta; }

// 1/(1 - k/(m-1)) times the relative tail energy ||x_tail||^2 / ||x||^2.
inline double oracle_error_prediction(std::size_t k, std::size_t m,
                                      double rel_tail_energy) {
  if (m < 2 || k >= m - 1) {
    throw std::domain_error(
        "oracle_error_prediction: requires k < m-1 (conditioning factor diverges)");
  }
  const double factor =
      1.0 / (1.0 - static_cast<double>(k) / static_cast<double>(m - 1));
  return factor * rel_tail_energy;
}

// Chi-square deviation exponents: c_l drives the lower-tail bound and
// satisfies c_l(eps) >= eps^2/2 and c_u(eps) >= c_l(eps).
inline double concentration_cl(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::domain_error("concentration_cl: eps must lie in (0,1)");
  }
  return -std::log(1.0 - eps) - eps;
}

inline double concentration_cu(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw std::domain_error("concentration_cu: eps must lie in (0,1)");
  }
  return eps / (1.0 - eps) + std::log(1.0 - eps);
}

struct ConcentrationBound {
  double eps = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double failure_prob = 0.0;
  double c_l = 0.0;
  double c_u = 0.0;
};

// Interval for ||Delta_LS(Phi x) - x||^2 / ||x||^2 around 1 - m/N.
inline ConcentrationBound ls_concentration(std::size_t m, std::size_t N,
                                           double eps) {
  if (m >= N) throw std::domain_error("ls_concentration: requires m < N");
  ConcentrationBound b;
  b.eps = eps;
  b.c_l = concentration_cl(eps);
  b.c_u = concentration_cu(eps);
  const double expected = 1.0 - static_cast<double>(m) / static_cast<double>(N);
  b.lo = (1.0 - eps) * expected;
  b.hi = expected / (1.0 - eps);
  b.failure_prob =
      2.0 * std::exp(-static_cast<double>(N - m) * eps * eps / 4.0) +
      2.0 * std::exp(-static_cast<double>(N) * eps * eps / 4.0);
  return b;
}

// Interval for the ratio ||Delta_oracle - x||^2 / ||x_tail||^2, which
// concentrates around 1 + k/(m-k+1).
inline ConcentrationBound oracle_concentration(std::size_t k, std::size_t m,
                                               double eps) {
  if (k >= m) throw std::domain_error("oracle_concentration: requires k < m");
  ConcentrationBound b;
  b.eps = eps;
  b.c_l = concentration_cl(eps);
  b.c_u = concentration_cu(eps);
  const double kk = static_cast<double>(k);
  const double denom = static_cast<double>(m - k + 1);
  const double shrink = (1.0 - eps) * (1.0 - eps) * (1.0 - eps);
  b.lo = 1.0 + kk * shrink / denom;
  b.hi = 1.0 + kk / (shrink * denom);
  const double exponent =
      static_cast<double>(std::min(k, m - k + 1)) * b.c_l / 2.0;
  b.failure_prob = 8.0 * std::exp(-exponent);
  return b;
}

}  // namespace compdist

#endif
