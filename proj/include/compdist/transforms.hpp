#ifndef COMPDIST_TRANSFORMS_HPP
#define COMPDIST_TRANSFORMS_HPP

// Orthonormal 2D transforms for patch statistics: separable type-II DCT
// and the Daubechies-4 wavelet transform with periodic boundaries. Both
// preserve energy exactly (up to roundoff), which the tests pin down.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace compdist {

namespace detail {

inline Eigen::MatrixXd dct_matrix(Eigen::Index n) {
  Eigen::MatrixXd c(n, n);
  const double pi = std::acos(-1.0);
  const double scale0 = std::sqrt(1.0 / static_cast<double>(n));
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double angle =
          pi * (2.0 * static_cast<double>(j) + 1.0) * static_cast<double>(i) /
          (2.0 * static_cast<double>(n));
      c(i, j) = (i == 0 ? scale0 : scale) * std::cos(angle);
    }
  }
  return c;
}

// Daubechies-4 analysis filters; the wavelet filter is the alternating
// flip of the scaling filter.
struct Db4 {
  double h[4];
  double g[4];
  Db4() {
    const double s3 = std::sqrt(3.0);
    const double s2 = std::sqrt(2.0);
    h[0] = (1.0 + s3) / (4.0 * s2);
    h[1] = (3.0 + s3) / (4.0 * s2);
    h[2] = (3.0 - s3) / (4.0 * s2);
    h[3] = (1.0 - s3) / (4.0 * s2);
    for (int i = 0; i < 4; ++i) {
      g[i] = (i % 2 == 0) ? h[3 - i] : -h[3 - i];
    }
  }
};

inline const Db4& db4() {
  static const Db4 filters;
  return filters;
}

// One periodic analysis step on data[0..len): approximations in the first
// half, details in the second.
inline void dwt_step(std::vector<double>& buf, const double* data, int len) {
  const Db4& f = db4();
  const int half = len / 2;
  for (int i = 0; i < half; ++i) {
    double a = 0.0;
    double d = 0.0;
    for (int j = 0; j < 4; ++j) {
      const double v = data[(2 * i + j) % len];
      a += f.h[j] * v;
      d += f.g[j] * v;
    }
    buf[static_cast<std::size_t>(i)] = a;
    buf[static_cast<std::size_t>(half + i)] = d;
  }
}

// Inverse of dwt_step (transpose of the orthonormal analysis operator).
inline void idwt_step(std::vector<double>& buf, const double* data, int len) {
  const Db4& f = db4();
  const int half = len / 2;
  for (int i = 0; i < len; ++i) buf[static_cast<std::size_t>(i)] = 0.0;
  for (int i = 0; i < half; ++i) {
    const double a = data[i];
    const double d = data[half + i];
    for (int j = 0; j < 4; ++j) {
      buf[static_cast<std::size_t>((2 * i + j) % len)] += f.h[j] * a + f.g[j] * d;
    }
  }
}

template <typename StepFn>
inline void transform_rows_cols(Eigen::MatrixXd& a, int size, StepFn step) {
  std::vector<double> line(static_cast<std::size_t>(size));
  std::vector<double> out(static_cast<std::size_t>(size));
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) line[static_cast<std::size_t>(c)] = a(r, c);
    step(out, line.data(), size);
    for (int c = 0; c < size; ++c) a(r, c) = out[static_cast<std::size_t>(c)];
  }
  for (int c = 0; c < size; ++c) {
    for (int r = 0; r < size; ++r) line[static_cast<std::size_t>(r)] = a(r, c);
    step(out, line.data(), size);
    for (int r = 0; r < size; ++r) a(r, c) = out[static_cast<std::size_t>(r)];
  }
}

}  // namespace detail

// Orthonormal 2D type-II DCT of a square patch.
inline Eigen::MatrixXd dct2(const Eigen::MatrixXd& patch) {
  if (patch.rows() != patch.cols() || patch.rows() < 2) {
    throw std::domain_error("dct2: patch must be square with side >= 2");
  }
  const Eigen::MatrixXd c = detail::dct_matrix(patch.rows());
  return c * patch * c.transpose();
}

inline Eigen::MatrixXd idct2(const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != coeffs.cols() || coeffs.rows() < 2) {
    throw std::domain_error("idct2: coefficients must be square with side >= 2");
  }
  const Eigen::MatrixXd c = detail::dct_matrix(coeffs.rows());
  return c.transpose() * coeffs * c;
}

inline int full_dwt_depth(Eigen::Index side) {
  int levels = 0;
  while (side % 2 == 0 && side > 1) {
    side /= 2;
    ++levels;
  }
  return levels;
}

// Multilevel separable Daubechies-4 transform with periodic boundaries.
// levels < 0 requests the full decomposition depth. The side must be
// divisible by 2^levels.
inline Eigen::MatrixXd dwt2_db4(const Eigen::MatrixXd& patch, int levels = -1) {
  if (patch.rows() != patch.cols() || patch.rows() < 2) {
    throw std::domain_error("dwt2_db4: patch must be square with side >= 2");
  }
  const auto side = static_cast<int>(patch.rows());
  if (levels < 0) levels = full_dwt_depth(patch.rows());
  if (levels < 1 || side % (1 << levels) != 0) {
    throw std::domain_error("dwt2_db4: side must be divisible by 2^levels");
  }
  Eigen::MatrixXd a = patch;
  int size = side;
  for (int lev = 0; lev < levels; ++lev) {
    Eigen::MatrixXd block = a.topLeftCorner(size, size);
    detail::transform_rows_cols(block, size, detail::dwt_step);
    a.topLeftCorner(size, size) = block;
    size /= 2;
  }
  return a;
}

inline Eigen::MatrixXd idwt2_db4(const Eigen::MatrixXd& coeffs, int levels = -1) {
  if (coeffs.rows() != coeffs.cols() || coeffs.rows() < 2) {
    throw std::domain_error("idwt2_db4: coefficients must be square with side >= 2");
  }
  const auto side = static_cast<int>(coeffs.rows());
  if (levels < 0) levels = full_dwt_depth(coeffs.rows());
  if (levels < 1 || side % (1 << levels) != 0) {
    throw std::domain_error("idwt2_db4: side must be divisible by 2^levels");
  }
  Eigen::MatrixXd a = coeffs;
  int size = side >> (levels - 1);
  for (int lev = levels - 1; lev >= 0; --lev) {
    Eigen::MatrixXd block = a.topLeftCorner(size, size);
    detail::transform_rows_cols(block, size, detail::idwt_step);
    a.topLeftCorner(size, size) = block;
    size *= 2;
  }
  return a;
}

}  // namespace compdist

#endif
