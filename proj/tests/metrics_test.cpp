#include "doctest.h"
#include "mwholo/metrics.hpp"
#include "oracles.hpp"

using namespace mwholo;

namespace {

RealFieldd checkerboard(Index size, double even, double odd) {
  RealFieldd img(make_grid(size, size, 1.0, 1.0));
  for (Index n = 0; n < size; ++n) {
    for (Index m = 0; m < size; ++m) img(m, n) = (m + n) % 2 == 0 ? even : odd;
  }
  return img;
}

RealFieldd constant(const ScanGrid& g, double v) {
  return RealFieldd(g, RealFieldd::Samples::Constant(g.ny, g.nx, v));
}

}  // namespace

TEST_CASE("speckle index of a constant image is zero") {
  const auto img = constant(make_grid(16, 16, 1.0, 1.0), 3.7);
  for (Index w : {3, 5, 7}) CHECK(speckle_index(img, w) == 0.0);
  const auto s = snr(img);
  CHECK(s.unbounded);
  CHECK(std::isinf(s.value));
}

TEST_CASE("speckle index of a {1, 9} checkerboard") {
  const auto img = checkerboard(16, 1.0, 9.0);
  // Frozen from an independent reflect-mode uniform filter.
  CHECK(speckle_index(img, 3) == doctest::Approx(0.8013782696863361).epsilon(1e-12));
  CHECK(speckle_index(img, 5) == doctest::Approx(0.8001791272212695).epsilon(1e-12));
  CHECK(speckle_index(img, 7) == doctest::Approx(0.8000466423128245).epsilon(1e-12));
  for (Index w : {3, 5, 7}) CHECK(std::abs(speckle_index(img, w) - oracle::brute_speckle(img, w)) < 1e-12);
}

TEST_CASE("speckle index agrees with the direct window sum") {
  const auto img = oracle::random_image(make_grid(20, 13, 1.0, 1.0), 5, 0.1, 2.0);
  for (Index w : {3, 5, 7, 9}) CHECK(std::abs(speckle_index(img, w) - oracle::brute_speckle(img, w)) < 1e-12);
}

TEST_CASE("speckle index is scale invariant and SNR is its reciprocal") {
  const auto img = oracle::random_image(make_grid(24, 24, 1.0, 1.0), 11);
  const RealFieldd scaled(img.grid(), 7.5 * img.samples());
  CHECK(speckle_index(scaled) == doctest::Approx(speckle_index(img)).epsilon(1e-12));
  const auto s = snr(img);
  CHECK_FALSE(s.unbounded);
  CHECK(s.value * speckle_index(img) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero-mean windows are excluded and counted") {
  RealFieldd img(make_grid(20, 20, 1.0, 1.0));
  img(2, 2) = 1.0;
  const auto s = speckle_stats(img, 3);
  CHECK(s.valid_pixels == 9);
  CHECK(s.excluded_pixels == 400 - 9);
}

TEST_CASE("speckle index errors") {
  const ScanGrid g = make_grid(8, 8, 1.0, 1.0);
  CHECK_THROWS_AS(speckle_index(RealFieldd(g)), ContractError);
  auto neg = constant(g, 1.0);
  neg(0, 0) = -0.1;
  CHECK_THROWS_AS(speckle_index(neg), ContractError);
  CHECK_THROWS_AS(speckle_index(constant(g, 1.0), 4), ContractError);
  CHECK_THROWS_AS(speckle_index(constant(g, 1.0), 1), ContractError);
  CHECK_THROWS_AS(speckle_index(constant(g, 1.0), 9), ContractError);
}

TEST_CASE("ssim identity, symmetry and bounds") {
  const ScanGrid g = make_grid(24, 20, 1.0, 1.0);
  const auto x = oracle::random_image(g, 1);
  const auto y = oracle::random_image(g, 2);
  CHECK(ssim(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ssim(x, y) - ssim(y, x)) < 1e-12);
  const auto map = ssim_map(x, y, 7, 1.0);
  CHECK(map.samples().maxCoeff() <= 1.0 + 1e-12);
  CHECK(map.samples().minCoeff() >= -1.0 - 1e-12);
}

TEST_CASE("ssim matches the direct window sum") {
  const ScanGrid g = make_grid(18, 15, 1.0, 1.0);
  const auto x = oracle::random_image(g, 3);
  const auto y = oracle::random_image(g, 4, -0.5, 2.0);
  for (Index w : {3, 7}) {
    for (double L : {1.0, 2.5}) CHECK(std::abs(ssim(x, y, w, L) - oracle::brute_ssim(x, y, w, L)) < 1e-12);
  }
}

TEST_CASE("ssim of two constant images has a closed form") {
  const ScanGrid g = make_grid(10, 10, 1.0, 1.0);
  const double a = 0.2, b = 0.7;
  const double c1 = 1e-4;
  CHECK(ssim(constant(g, a), constant(g, b)) == doctest::Approx((2 * a * b + c1) / (a * a + b * b + c1)).epsilon(1e-12));
  const auto k = ssim_constants(1.0);
  CHECK(k.c1 == doctest::Approx(1e-4));
  CHECK(k.c2 == doctest::Approx(9e-4));
}

TEST_CASE("an inverted pattern scores far below one") {
  const auto x = checkerboard(16, 0.0, 1.0);
  const auto y = checkerboard(16, 1.0, 0.0);
  CHECK(ssim(x, y) < 0.1);
}

TEST_CASE("ssim is translation invariant away from borders") {
  const ScanGrid big = make_grid(40, 40, 1.0, 1.0);
  const auto x = oracle::random_image(big, 7);
  const auto y = oracle::random_image(big, 8);
  const auto full = ssim_map(x, y, 7, 1.0);
  // Crops shifted by (5, 3): interior SSIM values move with the content.
  const ScanGrid small = make_grid(24, 24, 1.0, 1.0);
  const RealFieldd xs(small, x.samples().block(3, 5, 24, 24));
  const RealFieldd ys(small, y.samples().block(3, 5, 24, 24));
  const auto crop = ssim_map(xs, ys, 7, 1.0);
  double worst = 0.0;
  for (Index n = 3; n < 21; ++n) {
    for (Index m = 3; m < 21; ++m) worst = std::max(worst, std::abs(crop(m, n) - full(m + 5, n + 3)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("ssim errors") {
  const auto x = oracle::random_image(make_grid(8, 8, 1.0, 1.0), 1);
  CHECK_THROWS_AS(ssim(x, oracle::random_image(make_grid(8, 9, 1.0, 1.0), 1)), ContractError);
  CHECK_THROWS_AS(ssim(x, x, 6), ContractError);
  CHECK_THROWS_AS(ssim(x, x, 7, 0.0), ContractError);
}

TEST_CASE("quality report") {
  const auto img = oracle::random_image(make_grid(16, 16, 1.0, 1.0), 9, 0.5, 1.5);
  const auto q = quality_report(img);
  CHECK(q.speckle_index == speckle_index(img));
  CHECK_FALSE(q.ssim.has_value());
  const auto ref = oracle::random_image(make_grid(16, 16, 1.0, 1.0), 10, 0.0, 4.0);
  const auto qr = quality_report(img, &ref, 5);
  REQUIRE(qr.ssim.has_value());
  const double range = ref.samples().maxCoeff() - ref.samples().minCoeff();
  CHECK(*qr.ssim == doctest::Approx(ssim(ref, img, 5, range)).epsilon(1e-14));
  CHECK(qr.c1 == doctest::Approx(std::pow(0.01 * range, 2)));
  CHECK(qr.window == 5);
}
