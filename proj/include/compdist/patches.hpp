#ifndef COMPDIST_PATCHES_HPP
#define COMPDIST_PATCHES_HPP

// Image-patch order statistics: load 8-bit grayscale PGM (P5) images,
// sample square patches at seeded random positions, transform them, and
// average the sorted coefficient magnitudes rank by rank. Model curves
// come from the quantile rule F^-1(1 - n/(N+1)), an O(1/N)-accurate stand-in
// for exact expected order statistics.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "compdist/distribution.hpp"
#include "compdist/rng.hpp"
#include "compdist/transforms.hpp"

namespace compdist {

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> pixels;  // row-major, rescaled to [0, 1]

  double at(std::size_t row, std::size_t col) const {
    return pixels[row * width + col];
  }
};

// Binary PGM (P5) reader; 8- and 16-bit samples, '#' comments allowed.
inline Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P5") {
    throw std::runtime_error("read_pgm: " + path.string() + " is not binary PGM (P5)");
  }
  const auto next_token = [&in, &path]() -> long {
    // Skip whitespace and '#' comment lines between header fields.
    while (true) {
      const int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v = -1;
    in >> v;
    if (!in || v < 0) throw std::runtime_error("read_pgm: bad header in " + path.string());
    return v;
  };
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw std::runtime_error("read_pgm: unsupported header in " + path.string());
  }
  in.get();  // single whitespace byte before raster
  Image img;
  img.width = static_cast<std::size_t>(width);
  img.height = static_cast<std::size_t>(height);
  img.pixels.resize(img.width * img.height);
  const bool two_bytes = maxval > 255;
  std::vector<unsigned char> raw(img.pixels.size() * (two_bytes ? 2 : 1));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw std::runtime_error("read_pgm: truncated raster in " + path.string());
  }
  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const unsigned v = two_bytes
                           ? (static_cast<unsigned>(raw[2 * i]) << 8 | raw[2 * i + 1])
                           : raw[i];
    img.pixels[i] = static_cast<double>(v) * scale;
  }
  return img;
}

// 8-bit P5 writer (values clamped to [0, 1]); used by tests and for
// synthetic inputs.
inline void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  for (double p : img.pixels) {
    const double clamped = std::clamp(p, 0.0, 1.0);
    out.put(static_cast<char>(std::lround(clamped * 255.0)));
  }
}

struct PatchSet {
  std::size_t side = 0;
  std::string source;
  std::uint64_t seed = 0;
  std::vector<Eigen::MatrixXd> patches;
};

// Samples `count` side x side patches at uniform positions from the given
// images (image choice and offsets both seeded). Images smaller than the
// patch are skipped; it is an error if none remain.
inline PatchSet sample_patches(const std::vector<Image>& images, std::size_t side,
                               std::size_t count, std::uint64_t seed,
                               std::string source = {}) {
  if (side < 2) throw std::invalid_argument("sample_patches: side must be >= 2");
  if (count < 1) throw std::invalid_argument("sample_patches: count must be >= 1");
  std::vector<const Image*> usable;
  for (const Image& img : images) {
    if (img.width >= side && img.height >= side) usable.push_back(&img);
  }
  if (usable.empty()) {
    throw std::invalid_argument("sample_patches: no image large enough for side " +
                                std::to_string(side));
  }
  PatchSet set;
  set.side = side;
  set.seed = seed;
  set.source = std::move(source);
  SplitMix64 gen(derive_seed(seed, side, seed_role::patch));
  for (std::size_t p = 0; p < count; ++p) {
    const Image& img = *usable[gen() % usable.size()];
    const std::size_t row = gen() % (img.height - side + 1);
    const std::size_t col = gen() % (img.width - side + 1);
    Eigen::MatrixXd patch(static_cast<Eigen::Index>(side),
                          static_cast<Eigen::Index>(side));
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        patch(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            img.at(row + r, col + c);
      }
    }
    set.patches.push_back(std::move(patch));
  }
  return set;
}

enum class TransformKind { dct, db4 };

inline const char* to_string(TransformKind t) {
  return t == TransformKind::dct ? "dct" : "db4";
}

struct OrderStatCurve {
  std::string tag;
  std::vector<double> values;  // rank 1..N, nonincreasing
};

// Per patch: transform, take magnitudes, sort descending; then average
// across patches rank-wise.
inline OrderStatCurve average_sorted_magnitudes(const PatchSet& set,
                                                TransformKind transform) {
  if (set.patches.empty()) {
    throw std::invalid_argument("average_sorted_magnitudes: empty patch set");
  }
  const std::size_t n = set.side * set.side;
  OrderStatCurve curve;
  curve.tag = to_string(transform);
  curve.values.assign(n, 0.0);
  std::vector<double> mags(n);
  for (const Eigen::MatrixXd& patch : set.patches) {
    const Eigen::MatrixXd coeffs =
        transform == TransformKind::dct ? dct2(patch) : dwt2_db4(patch);
    for (std::size_t i = 0; i < n; ++i) {
      mags[i] = std::fabs(coeffs.data()[i]);
    }
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    for (std::size_t i = 0; i < n; ++i) curve.values[i] += mags[i];
  }
  const double inv = 1.0 / static_cast<double>(set.patches.size());
  for (double& v : curve.values) v *= inv;
  return curve;
}

// Rank-n model value F^-1(1 - n/(N+1)). Families with closed-form
// quantiles are evaluated directly; the others go through a dense CDF
// table with a Newton polish so large N stays cheap.
inline OrderStatCurve expected_order_statistics(const Distribution& dist,
                                                std::size_t n_total) {
  if (n_total < 1) {
    throw std::invalid_argument("expected_order_statistics: N must be >= 1");
  }
  OrderStatCurve curve;
  curve.tag = dist.spec_string();
  curve.values.resize(n_total);
  const bool closed = dist.family() == Family::laplace ||
                      dist.family() == Family::p_zero ||
                      (dist.family() == Family::tau_s && dist.tau() == 1.0);
  const auto u_of_rank = [n_total](std::size_t rank) {
    return 1.0 - static_cast<double>(rank) / (static_cast<double>(n_total) + 1.0);
  };
  if (closed || n_total <= 512) {
    for (std::size_t rank = 1; rank <= n_total; ++rank) {
      curve.values[rank - 1] = dist.folded_quantile(u_of_rank(rank));
    }
    return curve;
  }
  // Dense monotone table of (t, folded_cdf(t)) spanning every needed u,
  // then interpolation plus two Newton steps per rank.
  const double u_max = u_of_rank(1);
  const double t_max = dist.folded_quantile(0.5 * (1.0 + u_max));
  const std::size_t table_n = 4096;
  std::vector<double> ts(table_n + 1), us(table_n + 1);
  for (std::size_t i = 0; i <= table_n; ++i) {
    // Geometric-ish spacing concentrates nodes near zero where F moves fast.
    const double a = static_cast<double>(i) / static_cast<double>(table_n);
    ts[i] = t_max * (std::expm1(4.0 * a) / std::expm1(4.0));
    us[i] = dist.folded_cdf(ts[i]);
  }
  for (std::size_t rank = 1; rank <= n_total; ++rank) {
    const double u = u_of_rank(rank);
    const auto it = std::lower_bound(us.begin(), us.end(), u);
    double t;
    if (it == us.begin()) {
      t = ts.front();
    } else if (it == us.end()) {
      t = ts.back();
    } else {
      const std::size_t j = static_cast<std::size_t>(it - us.begin());
      const double w = (u - us[j - 1]) / (us[j] - us[j - 1]);
      t = ts[j - 1] + w * (ts[j] - ts[j - 1]);
    }
    for (int step = 0; step < 2; ++step) {
      const double pd = dist.folded_pdf(t);
      if (pd <= 0.0) break;
      t -= (dist.folded_cdf(t) - u) / pd;
      if (!(t > 0.0)) t = ts.front();
    }
    curve.values[rank - 1] = t;
  }
  return curve;
}

}  // namespace compdist

#endif
