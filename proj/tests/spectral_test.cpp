#include "doctest.h"
#include "mwholo/spectral.hpp"
#include "oracles.hpp"

using namespace mwholo;

namespace {

const ScanGrid kGrid = make_grid(40, 40, 5.0, 5.0);
const double kDefaultStep = 2.0 * oracle::kPi / 3.0;
const double kIntegerStep = 2.0 * oracle::kPi * 13.0 / 40.0;

Hologram<double> combined(const ComplexFieldd& o, const ReferenceWaveSpec<double>& spec) {
  const auto r = synthesize_reference(spec);
  return combine_ports(record(o, r, Port::Sum), record(o, r, Port::Difference));
}

double correlation(const ComplexFieldd& a, const ComplexFieldd& b) {
  const std::complex<double> inner = (a.samples() * b.samples().conjugate()).sum();
  return std::abs(inner) / std::sqrt(a.samples().abs2().sum() * b.samples().abs2().sum());
}

ComplexFieldd spatial(const ComplexFieldd& centered) { return ifft2(uncenter_spectrum(centered)); }

// Band-limited reflectivity-like field: a mean term plus low-order detail.
ComplexFieldd scene_like(std::uint64_t seed) {
  ComplexFieldd f = oracle::bandlimited_field(kGrid, 3.0, seed);
  f.samples() += 3.0;
  return f;
}

}  // namespace

TEST_CASE("a constant hologram has only a DC term") {
  const auto spec = reference_spec(1.4, kDefaultStep, kGrid);
  const auto h = record(ComplexFieldd(kGrid), synthesize_reference(spec), Port::Sum);
  const auto s = hologram_spectrum(h);
  CHECK(std::abs(at_bin(s, {0, 0})) == doctest::Approx(1.4 * 1.4 * 1600.0).epsilon(1e-12));
  CHECK((s.samples().abs() > 1e-9).count() == 1);
}

TEST_CASE("the spectrum is the sum of the four hologram terms") {
  const auto o = oracle::random_field(kGrid, 4);
  const auto r = synthesize_reference(reference_spec(1.0, kDefaultStep, kGrid));
  const auto s = hologram_spectrum(record(o, r, Port::Sum));
  const ComplexFieldd::Samples terms = center_spectrum(fft2(ComplexFieldd(kGrid, o.samples().abs2().cast<std::complex<double>>()))).samples() +
                     center_spectrum(fft2(ComplexFieldd(kGrid, r.samples().abs2().cast<std::complex<double>>()))).samples() +
                     center_spectrum(fft2(ComplexFieldd(kGrid, o.samples() * r.samples().conjugate()))).samples() +
                     center_spectrum(fft2(ComplexFieldd(kGrid, o.samples().conjugate() * r.samples()))).samples();
  CHECK(oracle::rel_l2(s, ComplexFieldd(kGrid, terms)) < 1e-10);
}

TEST_CASE("predicted +1 order position") {
  const auto p = predicted_plus_one(reference_spec(1.0, kDefaultStep, kGrid));
  CHECK(p.x == doctest::Approx(40.0 / 3.0).epsilon(1e-12));
  CHECK(p.y == p.x);
  const auto q = predicted_plus_one(reference_spec(1.0, kIntegerStep, kGrid));
  CHECK(q.x == doctest::Approx(13.0).epsilon(1e-12));
}

TEST_CASE("locate_orders finds the +1 order near its prediction") {
  const auto o = scene_like(8);
  SUBCASE("2pi/3 step") {
    const auto spec = reference_spec(1.0, kDefaultStep, kGrid);
    const auto map = locate_orders(hologram_spectrum(combined(o, spec)), spec);
    CHECK(std::abs(map.plus_one.x - map.predicted_plus_one.x) <= 1.0);
    CHECK(std::abs(map.plus_one.y - map.predicted_plus_one.y) <= 1.0);
    CHECK(map.minus_one == BinIndex{-map.plus_one.x, -map.plus_one.y});
    CHECK(map.dc == BinIndex{0, 0});
    CHECK(default_filter_radius(map, kGrid) == 6);
  }
  SUBCASE("integer step") {
    const auto spec = reference_spec(1.0, kIntegerStep, kGrid);
    const auto map = locate_orders(hologram_spectrum(combined(o, spec)), spec);
    CHECK(map.plus_one == BinIndex{13, 13});
  }
  SUBCASE("aliased prediction is an error") {
    const auto spec = reference_spec(1.0, 4.0, kGrid);
    CHECK_THROWS_AS(locate_orders(hologram_spectrum(combined(o, spec)), spec), ContractError);
  }
}

TEST_CASE("demodulating a carrier-only term returns it to DC") {
  const auto spec = reference_spec(1.0, kIntegerStep, kGrid);
  const std::complex<double> c(0.3, -0.2);
  const ComplexFieldd o(kGrid, ComplexFieldd::Samples::Constant(40, 40, c));
  const auto s = hologram_spectrum(combined(o, spec));
  const auto map = locate_orders(s, spec);
  const auto ex = extract_plus_one_detailed(s, map, 6);
  CHECK(ex.residual.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(at_bin(ex.baseband, {0, 0}) - 2.0 * c * 1600.0) < 1e-9);
  CHECK((ex.baseband.samples().abs() > 1e-9).count() == 1);
  CHECK((spatial(ex.baseband).samples() - 2.0 * c).abs().maxCoeff() < 1e-12);
}

TEST_CASE("the extracted +1 order reproduces the object") {
  for (const auto& o : {scene_like(15), oracle::bandlimited_field(kGrid, 3.0, 16)})
  for (double step : {kIntegerStep, kDefaultStep}) {
    CAPTURE(step);
    for (double e0 : {0.5, 1.0, 2.0}) {
      const auto spec = reference_spec(e0, step, kGrid);
      const auto s = hologram_spectrum(combined(o, spec));
      const auto map = locate_orders(s, spec);
      const auto base = spatial(extract_plus_one(s, map, default_filter_radius(map, kGrid)));
      CHECK(correlation(base, o) >= 0.99);
      // 4 Re(O R*) holds 2 O R*; demodulation leaves 2 E0 O.
      const double gain = std::sqrt(base.samples().abs2().sum() / o.samples().abs2().sum());
      CHECK(gain == doctest::Approx(2.0 * e0).epsilon(0.05));
    }
  }
}

TEST_CASE("residual correction matters for a fractional carrier") {
  const auto o = scene_like(15);
  const auto spec = reference_spec(1.0, kDefaultStep, kGrid);
  const auto s = hologram_spectrum(combined(o, spec));
  const auto map = locate_orders(s, spec);
  const auto with = extract_plus_one_detailed(s, map, 6, true);
  const auto without = extract_plus_one_detailed(s, map, 6, false);
  CHECK(with.residual_corrected);
  CHECK_FALSE(without.residual_corrected);
  CHECK(with.residual.x == doctest::Approx(40.0 / 3.0 - 13.0).epsilon(1e-12));
  CHECK(correlation(spatial(with.baseband), o) > correlation(spatial(without.baseband), o));
}

TEST_CASE("window radius contract") {
  const auto spec = reference_spec(1.0, kDefaultStep, kGrid);
  const auto s = hologram_spectrum(combined(oracle::random_field(kGrid, 1), spec));
  const auto map = locate_orders(s, spec);
  CHECK_THROWS_AS(extract_plus_one(s, map, 0), ContractError);
  CHECK_THROWS_AS(extract_plus_one(s, map, map.plus_one.chebyshev()), ContractError);
  CHECK_THROWS_AS(extract_plus_one(s, map, 30), ContractError);
  CHECK_NOTHROW(extract_plus_one(s, map, map.plus_one.chebyshev() - 1));
}

TEST_CASE("extraction is a projection: energy never grows") {
  const auto spec = reference_spec(1.0, kDefaultStep, kGrid);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = hologram_spectrum(combined(oracle::random_field(kGrid, seed), spec));
    const auto map = locate_orders(s, spec);
    for (Index radius : {1, 3, 6, 12}) {
      if (radius >= map.plus_one.chebyshev()) continue;
      const auto uncorrected = extract_plus_one_detailed(s, map, radius, false).baseband;
      CHECK(total_power(uncorrected) <= total_power(s) * (1.0 + 1e-12));
      const auto corrected = extract_plus_one_detailed(s, map, radius, true).baseband;
      CHECK(total_power(corrected) <= total_power(s) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("correction is a no-op for a whole-bin carrier") {
  const auto spec = reference_spec(1.0, kIntegerStep, kGrid);
  const auto s = hologram_spectrum(combined(scene_like(3), spec));
  const auto map = locate_orders(s, spec);
  const auto a = extract_plus_one_detailed(s, map, 6, true);
  const auto b = extract_plus_one_detailed(s, map, 6, false);
  CHECK_FALSE(a.residual_corrected);
  CHECK(oracle::max_abs_diff(a.baseband, b.baseband) == 0.0);
}

TEST_CASE("the -1 order demodulates to the conjugate twin") {
  const auto spec = reference_spec(1.0, kIntegerStep, kGrid);
  const auto o = oracle::random_field(kGrid, 33);
  const auto s = hologram_spectrum(combined(o, spec));
  const auto map = locate_orders(s, spec);
  const auto plus = spatial(extract_plus_one_detailed(s, map, 6).baseband);
  const auto minus = spatial(extract_minus_one_detailed(s, map, 6).baseband);
  CHECK(oracle::max_abs_diff(minus, ComplexFieldd(kGrid, plus.samples().conjugate())) < 1e-12);
}

TEST_CASE("no object, no +1 order") {
  const auto spec = reference_spec(1.0, kDefaultStep, kGrid);
  const auto s = hologram_spectrum(combined(ComplexFieldd(kGrid), spec));
  const auto map = locate_orders(s, spec);
  CHECK(extract_plus_one(s, map, 6).samples().abs().maxCoeff() == 0.0);
}
