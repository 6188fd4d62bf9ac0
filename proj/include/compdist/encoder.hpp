#ifndef COMPDIST_ENCODER_HPP
#define COMPDIST_ENCODER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

#include "compdist/rng.hpp"

namespace compdist {

// Seeded m x N Gaussian measurement matrix with iid N(0, 1/m) entries.
// Regenerating with the same seed is bit-identical; entries are drawn in
// column-major storage order.
struct EncoderInstance {
  std::size_t m = 0;
  std::size_t N = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd entries;

  double delta() const { return static_cast<double>(m) / static_cast<double>(N); }
};

inline EncoderInstance gaussian_encoder(std::size_t m, std::size_t N,
                                        std::uint64_t seed) {
  if (m < 1 || m >= N) {
    throw std::domain_error("gaussian_encoder: requires 1 <= m < N");
  }
  EncoderInstance enc;
  enc.m = m;
  enc.N = N;
  enc.seed = seed;
  enc.entries.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(N));
  GaussianSampler normal(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  double* data = enc.entries.data();
  const Eigen::Index total = enc.entries.size();
  for (Eigen::Index i = 0; i < total; ++i) {
    data[i] = normal() * scale;
  }
  return enc;
}

}  // namespace compdist

#endif
