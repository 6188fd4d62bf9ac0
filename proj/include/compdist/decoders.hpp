#ifndef COMPDIST_DECODERS_HPP
#define COMPDIST_DECODERS_HPP

// The four reconstruction rules for y = Phi x: the zero estimator, the
// minimum-l2-norm solution, least squares restricted to a known support,
// and equality-constrained l1 minimization via splitting with exact affine
// projection.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "compdist/encoder.hpp"

namespace compdist {

// Numerical rank loss where full rank was required.
class ConditioningError : public std::runtime_error {
 public:
  ConditioningError(const std::string& what, Eigen::Index detected_rank)
      : std::runtime_error(what), detected_rank_(detected_rank) {}
  Eigen::Index detected_rank() const { return detected_rank_; }

 private:
  Eigen::Index detected_rank_;
};

inline Eigen::VectorXd decode_trivial(Eigen::Index n) {
  return Eigen::VectorXd::Zero(n);
}

namespace detail {

// Rank estimate from the R factor of an (unpivoted) QR: count diagonal
// entries above a relative threshold.
inline Eigen::Index diag_rank(const Eigen::MatrixXd& qr_matrix, Eigen::Index cols) {
  double dmax = 0.0;
  for (Eigen::Index i = 0; i < cols; ++i) {
    dmax = std::max(dmax, std::fabs(qr_matrix(i, i)));
  }
  const double tol = dmax * 1e-12;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < cols; ++i) {
    if (std::fabs(qr_matrix(i, i)) > tol) ++rank;
  }
  return rank;
}

}  // namespace detail

// Minimum-l2-norm solution of Phi x = y through the QR factorization of
// Phi^T: with Phi^T = Q R, x = Q R^-T y lies in the row space of Phi.
inline Eigen::VectorXd decode_ls(const Eigen::MatrixXd& phi,
                                 const Eigen::VectorXd& y) {
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  if (y.size() != m) throw std::invalid_argument("decode_ls: size mismatch");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(phi.transpose());
  const Eigen::Index rank = detail::diag_rank(qr.matrixQR(), std::min(m, n));
  if (rank < std::min(m, n)) {
    throw ConditioningError("decode_ls: measurement matrix is numerically rank-deficient",
                            rank);
  }
  Eigen::VectorXd z = qr.matrixQR()
                          .topRows(m)
                          .triangularView<Eigen::Upper>()
                          .transpose()
                          .solve(y);
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(n);
  padded.head(m) = z;
  return qr.householderQ() * padded;
}

inline Eigen::VectorXd decode_ls(const EncoderInstance& enc,
                                 const Eigen::VectorXd& y) {
  return decode_ls(enc.entries, y);
}

// Indices of the k largest-magnitude entries (ties broken by index).
inline std::vector<Eigen::Index> top_k_support(const Eigen::VectorXd& x,
                                               std::size_t k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(x.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&x](Eigen::Index a, Eigen::Index b) {
    return std::fabs(x[a]) > std::fabs(x[b]);
  });
  idx.resize(std::min(k, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Least squares restricted to the columns in `support`, zero elsewhere.
inline Eigen::VectorXd decode_oracle(const Eigen::MatrixXd& phi,
                                     const Eigen::VectorXd& y,
                                     std::span<const Eigen::Index> support) {
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  if (y.size() != m) throw std::invalid_argument("decode_oracle: size mismatch");
  const Eigen::Index k = static_cast<Eigen::Index>(support.size());
  if (k >= m) {
    throw std::domain_error("decode_oracle: support size must be below m");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (k == 0) return x;
  Eigen::MatrixXd sub(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index col = support[static_cast<std::size_t>(j)];
    if (col < 0 || col >= n) {
      throw std::invalid_argument("decode_oracle: support index out of range");
    }
    sub.col(j) = phi.col(col);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(sub);
  const Eigen::Index rank = detail::diag_rank(qr.matrixQR(), k);
  if (rank < k) {
    throw ConditioningError("decode_oracle: restricted matrix is numerically singular",
                            rank);
  }
  const Eigen::VectorXd coeffs = qr.solve(y);
  for (Eigen::Index j = 0; j < k; ++j) {
    x[support[static_cast<std::size_t>(j)]] = coeffs[j];
  }
  return x;
}

inline Eigen::VectorXd decode_oracle(const EncoderInstance& enc,
                                     const Eigen::VectorXd& y,
                                     std::span<const Eigen::Index> support) {
  return decode_oracle(enc.entries, y, support);
}

struct L1Options {
  double tol = 1e-7;      // on iterate change and infeasibility, times ||y||
  int max_iters = 50000;  // convergence near the phase transition is slow
  double penalty = 0.0;   // splitting penalty; 0 picks sqrt(m)
  int polish_every = 500; // support-polish attempt period; 0 disables
};

struct L1Diagnostics {
  int iterations = 0;
  double residual = 0.0;  // max of consensus gap and infeasibility at exit
  bool converged = false;
  bool polished = false;  // exited through a certified support solve
};

namespace detail {

// Basis-pursuit optimality test for a candidate support S: solve
// Phi_S x_S = b, recover the dual from Phi_S^T w = sign(x_S), and certify
// |phi_j^T w| <= 1 off the support. On success the scattered solution is
// the exact minimizer (up to the certificate slack).
inline bool l1_support_polish(const Eigen::MatrixXd& phi, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& z, Eigen::VectorXd& out) {
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (z[i] != 0.0) support.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(support.size());
  if (k == 0 || k > m) return false;
  Eigen::MatrixXd sub(m, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    sub.col(j) = phi.col(support[static_cast<std::size_t>(j)]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
  if (qr.rank() < k) return false;
  const Eigen::VectorXd coeffs = qr.solve(b);
  if ((sub * coeffs - b).norm() > 1e-12) return false;

  Eigen::VectorXd signs(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (coeffs[j] == 0.0) return false;
    signs[j] = coeffs[j] > 0.0 ? 1.0 : -1.0;
  }
  // Phi_S^T w = signs is consistent because Phi_S has full column rank.
  const Eigen::VectorXd w = sub.transpose().colPivHouseholderQr().solve(signs);
  if ((sub.transpose() * w - signs).norm() > 1e-10) return false;
  const Eigen::VectorXd correlation = phi.transpose() * w;
  std::vector<bool> on(static_cast<std::size_t>(n), false);
  for (Eigen::Index idx : support) on[static_cast<std::size_t>(idx)] = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!on[static_cast<std::size_t>(i)] &&
        std::fabs(correlation[i]) > 1.0 + 1e-9) {
      return false;
    }
  }
  out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index j = 0; j < k; ++j) {
    out[support[static_cast<std::size_t>(j)]] = coeffs[j];
  }
  return true;
}

}  // namespace detail

// Equality-constrained l1 minimization. Alternates soft thresholding on
// the objective with exact projection onto {x : Phi x = y} using a cached
// Cholesky factorization of Phi Phi^T. The problem is solved on y/||y||
// (the minimizer is positively homogeneous) so tolerances are relative.
// Every polish_every iterations the current support is tested for exact
// optimality, which short-circuits the slow consensus tail. The returned
// iterate is feasible to factorization accuracy; non-convergence is
// flagged, never thrown.
inline Eigen::VectorXd decode_l1(const Eigen::MatrixXd& phi,
                                 const Eigen::VectorXd& y,
                                 const L1Options& opt = {},
                                 L1Diagnostics* diag = nullptr) {
  const Eigen::Index m = phi.rows();
  const Eigen::Index n = phi.cols();
  if (y.size() != m) throw std::invalid_argument("decode_l1: size mismatch");
  L1Diagnostics local;
  const double ynorm = y.norm();
  if (ynorm == 0.0) {
    local.converged = true;
    if (diag) *diag = local;
    return Eigen::VectorXd::Zero(n);
  }
  const Eigen::VectorXd b = y / ynorm;

  Eigen::LLT<Eigen::MatrixXd> gram_llt(phi * phi.transpose());
  if (gram_llt.info() != Eigen::Success) {
    throw ConditioningError("decode_l1: Phi Phi^T is not positive definite", -1);
  }
  const auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v + phi.transpose() * gram_llt.solve(b - phi * v);
  };

  const double rho =
      opt.penalty > 0.0 ? opt.penalty : std::sqrt(static_cast<double>(m));
  const double thresh = 1.0 / rho;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd x;
  int iter = 0;
  bool converged = false;
  bool polished = false;
  while (iter < opt.max_iters) {
    x = project(z - u);
    Eigen::VectorXd z_new = x + u;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = z_new[i];
      z_new[i] = (v > thresh) ? v - thresh : (v < -thresh ? v + thresh : 0.0);
    }
    u += x - z_new;
    const double primal = (x - z_new).norm();
    const double dual_change = (z_new - z).norm();
    z = std::move(z_new);
    ++iter;
    if (primal <= opt.tol && dual_change <= opt.tol) {
      converged = true;
      x = project(z);
      break;
    }
    if (opt.polish_every > 0 && iter % opt.polish_every == 0) {
      Eigen::VectorXd exact;
      if (detail::l1_support_polish(phi, b, z, exact)) {
        x = exact;
        z = exact;
        converged = true;
        polished = true;
        break;
      }
    }
  }
  if (!converged) x = project(z);
  local.iterations = iter;
  local.residual = std::max((x - z).norm(), (phi * x - b).norm());
  local.converged = converged;
  local.polished = polished;
  if (diag) *diag = local;
  return x * ynorm;
}

inline Eigen::VectorXd decode_l1(const EncoderInstance& enc,
                                 const Eigen::VectorXd& y,
                                 const L1Options& opt = {},
                                 L1Diagnostics* diag = nullptr) {
  return decode_l1(enc.entries, y, opt, diag);
}

}  // namespace compdist

#endif
