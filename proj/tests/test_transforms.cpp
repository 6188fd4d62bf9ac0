#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "compdist/distribution.hpp"
#include "compdist/patches.hpp"
#include "compdist/rng.hpp"
#include "compdist/svg.hpp"
#include "compdist/transforms.hpp"

using namespace compdist;

namespace {

Eigen::MatrixXd random_patch(Eigen::Index n, std::uint64_t seed) {
  SplitMix64 gen(seed);
  Eigen::MatrixXd p(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) p(i, j) = uniform01(gen);
  }
  return p;
}

}  // namespace

TEST_CASE("dct2 basics") {
  SECTION("constant patch concentrates in DC") {
    const Eigen::MatrixXd patch = Eigen::MatrixXd::Constant(8, 8, 0.4);
    const Eigen::MatrixXd coeffs = dct2(patch);
    CHECK(coeffs(0, 0) == Catch::Approx(8.0 * 0.4).margin(1e-12));
    double off = 0.0;
    for (Eigen::Index i = 0; i < 8; ++i) {
      for (Eigen::Index j = 0; j < 8; ++j) {
        if (i != 0 || j != 0) off = std::max(off, std::fabs(coeffs(i, j)));
      }
    }
    CHECK(off < 1e-12);
  }
  SECTION("Parseval and round trip") {
    const Eigen::MatrixXd patch = random_patch(8, 99);
    const Eigen::MatrixXd coeffs = dct2(patch);
    CHECK(coeffs.norm() == Catch::Approx(patch.norm()).margin(1e-10));
    CHECK((idct2(coeffs) - patch).norm() < 1e-10);
  }
  SECTION("rejects non-square inputs") {
    CHECK_THROWS_AS(dct2(Eigen::MatrixXd::Zero(4, 6)), std::domain_error);
  }
}

TEST_CASE("db4 wavelet basics") {
  SECTION("filters are orthonormal") {
    const auto& f = detail::db4();
    double sum_h = 0.0, sum_g = 0.0, norm_h = 0.0, cross = 0.0;
    for (int i = 0; i < 4; ++i) {
      sum_h += f.h[i];
      sum_g += f.g[i];
      norm_h += f.h[i] * f.h[i];
      cross += f.h[i] * f.g[i];
    }
    CHECK(sum_h == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
    CHECK(sum_g == Catch::Approx(0.0).margin(1e-14));
    CHECK(norm_h == Catch::Approx(1.0).margin(1e-14));
    CHECK(cross == Catch::Approx(0.0).margin(1e-14));
  }
  SECTION("constant patch lands in the coarsest scaling coefficient") {
    const Eigen::MatrixXd patch = Eigen::MatrixXd::Constant(16, 16, 0.25);
    const Eigen::MatrixXd coeffs = dwt2_db4(patch);
    CHECK(std::fabs(coeffs(0, 0)) == Catch::Approx(16.0 * 0.25).margin(1e-10));
    double off = 0.0;
    for (Eigen::Index i = 0; i < 16; ++i) {
      for (Eigen::Index j = 0; j < 16; ++j) {
        if (i != 0 || j != 0) off = std::max(off, std::fabs(coeffs(i, j)));
      }
    }
    CHECK(off < 1e-12);
  }
  SECTION("Parseval and round trip at full depth") {
    const Eigen::MatrixXd patch = random_patch(16, 123);
    const Eigen::MatrixXd coeffs = dwt2_db4(patch);
    CHECK(coeffs.norm() == Catch::Approx(patch.norm()).margin(1e-10));
    CHECK((idwt2_db4(coeffs) - patch).norm() < 1e-10);
  }
  SECTION("partial depth round trip") {
    const Eigen::MatrixXd patch = random_patch(24, 5);  // 24 = 8 * 3
    const Eigen::MatrixXd coeffs = dwt2_db4(patch, 3);
    CHECK(coeffs.norm() == Catch::Approx(patch.norm()).margin(1e-10));
    CHECK((idwt2_db4(coeffs, 3) - patch).norm() < 1e-10);
  }
  SECTION("divisibility is enforced") {
    CHECK_THROWS_AS(dwt2_db4(random_patch(12, 1), 3), std::domain_error);
    CHECK_THROWS_AS(dwt2_db4(Eigen::MatrixXd::Zero(5, 5), 1), std::domain_error);
  }
}

TEST_CASE("average sorted magnitudes") {
  PatchSet set;
  set.side = 8;
  set.patches = {random_patch(8, 40)};
  const OrderStatCurve one = average_sorted_magnitudes(set, TransformKind::dct);
  // A single patch gives its own sorted magnitudes.
  Eigen::MatrixXd coeffs = dct2(set.patches[0]);
  std::vector<double> mags(coeffs.data(), coeffs.data() + coeffs.size());
  for (double& m : mags) m = std::fabs(m);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  REQUIRE(one.values.size() == mags.size());
  for (std::size_t i = 0; i < mags.size(); ++i) {
    CHECK(one.values[i] == Catch::Approx(mags[i]).margin(1e-14));
  }
  // Duplicating a patch does not change the average.
  set.patches.push_back(set.patches[0]);
  const OrderStatCurve two = average_sorted_magnitudes(set, TransformKind::db4);
  PatchSet single;
  single.side = 8;
  single.patches = {set.patches[0]};
  const OrderStatCurve ref = average_sorted_magnitudes(single, TransformKind::db4);
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    CHECK(two.values[i] == Catch::Approx(ref.values[i]).margin(1e-14));
  }
  // Curves are nonincreasing and nonnegative.
  for (std::size_t i = 1; i < two.values.size(); ++i) {
    CHECK(two.values[i] <= two.values[i - 1] + 1e-15);
    CHECK(two.values[i] >= 0.0);
  }
}

TEST_CASE("expected order statistics") {
  const Distribution lap = Distribution::laplace();
  const OrderStatCurve single = expected_order_statistics(lap, 1);
  REQUIRE(single.values.size() == 1);
  CHECK(single.values[0] == Catch::Approx(std::log(2.0)).epsilon(1e-12));

  // Monte Carlo cross-check of the N = 1 median over many draws.
  const auto xs = lap.sample(1000000, 31337);
  std::vector<double> mags(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) mags[i] = std::fabs(xs[i]);
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  CHECK(mags[mags.size() / 2] == Catch::Approx(std::log(2.0)).margin(0.01));

  // Paper parameter sets evaluate to monotone positive curves.
  for (const Distribution& d :
       {Distribution::tau_s(1.0, 2.69, 8.0), Distribution::tau_s(2.0, 2.64, 4.5),
        Distribution::generalized_gaussian(0.7, 5.0)}) {
    const OrderStatCurve c = expected_order_statistics(d, 64);
    for (std::size_t i = 1; i < c.values.size(); ++i) {
      CHECK(c.values[i] <= c.values[i - 1]);
      CHECK(c.values[i] >= 0.0);
    }
  }
}

TEST_CASE("table-based order statistics match direct quantiles") {
  // N > 512 switches the numeric families to the CDF-table route.
  const Distribution g = Distribution::generalized_gaussian(0.7, 5.0);
  const std::size_t n = 700;
  const OrderStatCurve fast = expected_order_statistics(g, n);
  for (std::size_t rank = 1; rank <= n; rank += 97) {
    const double u = 1.0 - static_cast<double>(rank) / (static_cast<double>(n) + 1.0);
    const double direct = g.folded_quantile(u);
    CHECK(fast.values[rank - 1] == Catch::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("empirical order statistics converge to the quantile curve") {
  const Distribution lap = Distribution::laplace();
  const std::size_t n = 256;
  const OrderStatCurve model = expected_order_statistics(lap, n);

  const auto empirical_curve = [&](std::size_t patches, std::uint64_t seed) {
    std::vector<double> avg(n, 0.0);
    for (std::size_t p = 0; p < patches; ++p) {
      auto xs = lap.sample(n, derive_seed(seed, p, seed_role::patch));
      for (double& x : xs) x = std::fabs(x);
      std::sort(xs.begin(), xs.end(), std::greater<double>());
      for (std::size_t i = 0; i < n; ++i) avg[i] += xs[i];
    }
    for (double& v : avg) v /= static_cast<double>(patches);
    return avg;
  };

  // 100 iid draws: mid ranks within 5%.
  const std::vector<double> hundred = empirical_curve(100, 1001);
  for (std::size_t rank = n / 4; rank <= 3 * n / 4; rank += 16) {
    CHECK(hundred[rank - 1] ==
          Catch::Approx(model.values[rank - 1]).epsilon(0.05));
  }
  // 1000 draws: quartile ranks within 2%.
  const std::vector<double> thousand = empirical_curve(1000, 2002);
  for (std::size_t rank : {n / 4, n / 2, 3 * n / 4}) {
    CHECK(thousand[rank - 1] ==
          Catch::Approx(model.values[rank - 1]).epsilon(0.02));
  }
}

TEST_CASE("pgm round trip and patch sampling") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "compdist_pgm_test";
  fs::create_directories(dir);

  Image img;
  img.width = 40;
  img.height = 30;
  img.pixels.resize(img.width * img.height);
  SplitMix64 gen(4242);
  for (double& p : img.pixels) {
    p = static_cast<double>(gen() % 256) / 255.0;
  }
  const fs::path file = dir / "t.pgm";
  write_pgm(file, img);
  const Image back = read_pgm(file);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    CHECK(back.pixels[i] == Catch::Approx(img.pixels[i]).margin(1e-12));
  }

  const PatchSet set = sample_patches({back}, 8, 12, 99, "test");
  CHECK(set.patches.size() == 12);
  CHECK(set.side == 8);
  const PatchSet again = sample_patches({back}, 8, 12, 99, "test");
  for (std::size_t i = 0; i < set.patches.size(); ++i) {
    CHECK((set.patches[i] - again.patches[i]).norm() == 0.0);
  }
  CHECK_THROWS_AS(sample_patches({back}, 64, 1, 1), std::invalid_argument);

  fs::remove_all(dir);
}

TEST_CASE("svg renderer emits well-formed output") {
  SvgSeries s;
  s.label = "curve";
  for (int i = 1; i <= 10; ++i) {
    s.points.emplace_back(i, 1.0 / i);
  }
  SvgOptions opt;
  opt.title = "test";
  opt.xlabel = "x";
  opt.ylabel = "y";
  opt.hlines = {{0.5, "half"}};
  const std::string svg = render_line_plot({s}, opt);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("half") != std::string::npos);
  // Log-log variant.
  opt.logx = opt.logy = true;
  const std::string svg2 = render_line_plot({s}, opt);
  CHECK(svg2.find("polyline") != std::string::npos);
  // Deterministic output.
  CHECK(render_line_plot({s}, opt) == svg2);
}
