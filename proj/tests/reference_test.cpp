#include "doctest.h"
#include "mwholo/reference.hpp"
#include "oracles.hpp"

using namespace mwholo;

TEST_CASE("reference phase steps along the scan") {
  const double dphi = 2.0 * oracle::kPi / 3.0;
  const auto r = synthesize_reference(reference_spec(2.0, dphi, make_grid(3, 2, 5.0, 5.0)));
  CHECK(std::abs(r(0, 0) - std::complex<double>(2.0, 0.0)) < 1e-15);
  CHECK(std::abs(r(1, 0) - std::polar(2.0, -dphi)) < 1e-15);
  CHECK(std::abs(r(2, 0) - std::polar(2.0, -2.0 * dphi)) < 1e-15);
  // Same step along y; the phase depends only on m + n.
  CHECK(std::abs(r(0, 1) - r(1, 0)) < 1e-15);
  CHECK(std::abs(r(1, 1) - r(2, 0)) < 1e-15);
}

TEST_CASE("a half-cycle step alternates sign") {
  const auto r = synthesize_reference(reference_spec(1.5, oracle::kPi, make_grid(6, 4, 5.0, 5.0)));
  for (Index n = 0; n < 4; ++n) {
    for (Index m = 0; m < 6; ++m) {
      const double expected = (m + n) % 2 == 0 ? 1.5 : -1.5;
      CHECK(std::abs(r(m, n) - expected) < 1e-14);
    }
  }
}

TEST_CASE("modulus is E0 everywhere") {
  const auto r = synthesize_reference(reference_spec(0.75, 2.0 * oracle::kPi / 3.0, make_grid(40, 40, 5.0, 5.0)));
  CHECK((r.samples().abs() - 0.75).abs().maxCoeff() < 1e-14);
}

TEST_CASE("an integer-bin step is a single spectral line") {
  const ScanGrid g = make_grid(40, 40, 5.0, 5.0);
  const auto r = synthesize_reference(reference_spec(1.0, 2.0 * oracle::kPi * 13.0 / 40.0, g));
  const auto s = center_spectrum(fft2(r));
  // exp(-j 2pi 13 m / 40) lands at bin -13 on each axis.
  const Index p = centered_position(-13, 40);
  CHECK(std::abs(s(p, p)) == doctest::Approx(1600.0).epsilon(1e-12));
  double rest = 0.0;
  for (Index n = 0; n < 40; ++n) {
    for (Index m = 0; m < 40; ++m) {
      if (m != p || n != p) rest = std::max(rest, std::abs(s(m, n)));
    }
  }
  CHECK(rest < 1e-10);
}

TEST_CASE("offset wave vector") {
  const auto spec = reference_spec(1.0, 2.0 * oracle::kPi / 3.0, make_grid(40, 40, 5.0, 5.0));
  CHECK(spec.kr_x() == doctest::Approx(0.41887902047863906).epsilon(1e-14));
  CHECK(spec.kr_y() == spec.kr_x());
  const auto six = reference_spec(1.0, 2.0 * oracle::kPi / 3.0, make_grid(40, 40, 6.0, 6.0));
  CHECK(six.kr_x() == doctest::Approx(0.3490658503988659).epsilon(1e-14));
}

TEST_CASE("validate_offset") {
  const double k = wavenumber(9.1);
  const double dphi = 2.0 * oracle::kPi / 3.0;

  SUBCASE("default sampling passes") {
    const auto r = validate_offset(reference_spec(1.0, dphi, make_grid(40, 40, 5.0, 5.0)), k);
    CHECK(r.passes());
    CHECK(r.two_k == doctest::Approx(0.38144379399520606).epsilon(1e-14));
    CHECK(r.two_k == doctest::Approx(0.38143).epsilon(1e-4));
    CHECK(r.nyquist_x == doctest::Approx(oracle::kPi / 5.0));
    CHECK(r.lambda_over_6() == doctest::Approx(32.94422615384616 / 6.0).epsilon(1e-12));
  }

  SUBCASE("coarse sampling violates kr >= 2k") {
    const auto r = validate_offset(reference_spec(1.0, dphi, make_grid(40, 40, 8.0, 8.0)), k);
    CHECK_FALSE(r.offset_ok);
    CHECK(r.nyquist_ok);
    CHECK_FALSE(r.passes());
    CHECK(r.kr_x == doctest::Approx(0.2617993877991494));
    const std::string text = r.describe();
    CHECK(text.find("kr_x=0.261799") != std::string::npos);
    CHECK(text.find("2k=0.381444") != std::string::npos);
  }

  SUBCASE("a step beyond half a cycle aliases") {
    const auto r = validate_offset(reference_spec(1.0, 4.0, make_grid(40, 40, 5.0, 5.0)), k);
    CHECK(r.offset_ok);
    CHECK_FALSE(r.nyquist_ok);
  }

  SUBCASE("boundaries are inclusive") {
    const ScanGrid g = make_grid(40, 40, 5.0, 5.0);
    CHECK(validate_offset(reference_spec(1.0, 2.0 * k * 5.0, g), k).offset_ok);
    CHECK_FALSE(validate_offset(reference_spec(1.0, 2.0 * k * 5.0 * (1.0 - 1e-9), g), k).offset_ok);
    CHECK(validate_offset(reference_spec(1.0, oracle::kPi, g), k).nyquist_ok);
    CHECK_FALSE(validate_offset(reference_spec(1.0, oracle::kPi * (1.0 + 1e-9), g), k).nyquist_ok);
  }

  SUBCASE("kr falls monotonically with spacing") {
    double previous = std::numeric_limits<double>::infinity();
    const double limit = dphi / (2.0 * k);  // largest passing spacing
    for (double d = 1.0; d <= 10.0; d += 0.25) {
      const auto r = validate_offset(reference_spec(1.0, dphi, make_grid(16, 16, d, d)), k);
      CHECK(r.kr_x < previous);
      previous = r.kr_x;
      CHECK(r.offset_ok == (d <= limit));
    }
  }

  SUBCASE("rejects a nonpositive wavenumber") {
    CHECK_THROWS_AS(validate_offset(reference_spec(1.0, dphi, make_grid(4, 4, 5.0, 5.0)), 0.0), ContractError);
  }
}

TEST_CASE("reference contract") {
  const ScanGrid g = make_grid(4, 4, 5.0, 5.0);
  CHECK_THROWS_AS(reference_spec(0.0, 1.0, g), ContractError);
  CHECK_THROWS_AS(reference_spec(-1.0, 1.0, g), ContractError);
  CHECK_THROWS_AS(reference_spec(1.0, 0.0, g), ContractError);
  CHECK_THROWS_AS(reference_spec(1.0, 2.0 * oracle::kPi, g), ContractError);
  CHECK_THROWS_AS(reference_spec(1.0, std::nan(""), g), ContractError);
}
