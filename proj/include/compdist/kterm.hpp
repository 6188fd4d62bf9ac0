#ifndef COMPDIST_KTERM_HPP
#define COMPDIST_KTERM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace compdist {

struct KTermError {
  std::size_t k = 0;
  double q = 2.0;
  double sigma_k = 0.0;   // best k-term error in the l^q norm
  double relative = 0.0;  // sigma_k / ||x||_q, in [0, 1]
};

// Best k-term approximation keeps the k largest magnitudes, so the error is
// the l^q mass of the N-k smallest entries. Summation runs smallest-first
// over one shared sorted array, which keeps relative <= 1 exactly and the
// curve nonincreasing in k.
inline KTermError empirical_relative_kterm_error(std::span<const double> x,
                                                 std::size_t k, double q) {
  const std::size_t n = x.size();
  if (k > n) throw std::domain_error("empirical_relative_kterm_error: k > N");
  if (!(q > 0.0)) throw std::domain_error("empirical_relative_kterm_error: q <= 0");
  std::vector<double> pow_abs(n);
  bool any_nonzero = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(x[i]);
    any_nonzero = any_nonzero || a != 0.0;
    pow_abs[i] = std::pow(a, q);
  }
  if (!any_nonzero) {
    throw std::domain_error("empirical_relative_kterm_error: zero vector");
  }
  std::sort(pow_abs.begin(), pow_abs.end());
  double tail = 0.0;
  for (std::size_t i = 0; i + k < n; ++i) tail += pow_abs[i];
  double total = tail;
  for (std::size_t i = n - k; i < n; ++i) total += pow_abs[i];

  KTermError res;
  res.k = k;
  res.q = q;
  res.sigma_k = std::pow(tail, 1.0 / q);
  res.relative = (k == 0) ? 1.0 : std::pow(tail / total, 1.0 / q);
  return res;
}

}  // namespace compdist

#endif
