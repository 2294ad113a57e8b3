#include "doctest.h"
#include "mwholo/field.hpp"
#include "oracles.hpp"

using namespace mwholo;

TEST_CASE("grid invariants") {
  CHECK_NOTHROW(make_grid(2, 2, 1.0, 1.0));
  CHECK_THROWS_AS(make_grid(1, 4, 1.0, 1.0), ContractError);
  CHECK_THROWS_AS(make_grid(4, 4, 0.0, 1.0), ContractError);
  CHECK_THROWS_AS(make_grid(4, 4, 1.0, -5.0), ContractError);
  const ScanGrid g = make_grid(40, 30, 5.0, 4.0);
  CHECK(g.extent_x() == 200.0);
  CHECK(g.extent_y() == 120.0);
  CHECK(ComplexFieldd(g).samples().size() == 1200);
  CHECK_THROWS_AS(RealFieldd(g, RealFieldd::Samples::Zero(40, 30)), ContractError);
}

TEST_CASE("dft2 of a unit impulse is flat") {
  ComplexFieldd f(make_grid(8, 8, 1.0, 1.0));
  f(0, 0) = 1.0;
  const auto s = fft2(f);
  CHECK((s.samples() - std::complex<double>(1.0, 0.0)).abs().maxCoeff() < 1e-15);
}

TEST_CASE("dft2 round trip") {
  const auto x = oracle::random_field(make_grid(16, 16, 1.0, 1.0), 7);
  const auto back = ifft2(fft2(x));
  CHECK(oracle::rel_l2(back, x) < 1e-12);
}

TEST_CASE("dft2 matches the direct double-sum DFT") {
  for (const auto& g : {make_grid(8, 8, 1.0, 1.0), make_grid(6, 5, 2.0, 3.0)}) {
    const auto x = oracle::random_field(g, 11);
    CHECK(oracle::rel_l2(fft2(x), oracle::brute_dft(x)) < 1e-10);
  }
}

TEST_CASE("dft2 is linear") {
  const ScanGrid g = make_grid(8, 8, 1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = oracle::random_field(g, 2 * seed);
    const auto y = oracle::random_field(g, 2 * seed + 1);
    const std::complex<double> a(0.3, -1.2), b(-2.0, 0.5);
    const ComplexFieldd combo(g, a * x.samples() + b * y.samples());
    const ComplexFieldd expected(g, a * fft2(x).samples() + b * fft2(y).samples());
    CHECK(oracle::max_abs_diff(fft2(combo), expected) < 1e-10);
  }
}

TEST_CASE("dft2 rejects non-finite input and names the index") {
  ComplexFieldd f(make_grid(4, 4, 1.0, 1.0));
  f(2, 3) = {std::nan(""), 0.0};
  try {
    fft2(f);
    FAIL("expected ContractError");
  } catch (const ContractError& e) {
    CHECK(std::string(e.what()).find("(x=2, y=3)") != std::string::npos);
  }
}

TEST_CASE("center_spectrum moves DC to the centre") {
  ComplexFieldd f(make_grid(8, 8, 1.0, 1.0));
  f(0, 0) = 3.0;
  const auto c = center_spectrum(f);
  CHECK(c(4, 4) == std::complex<double>(3.0));
  CHECK(c.samples().abs().sum() == doctest::Approx(3.0));
}

TEST_CASE("center_spectrum is an involution for even sizes") {
  const auto x = oracle::random_field(make_grid(40, 40, 5.0, 5.0), 3);
  CHECK(oracle::max_abs_diff(center_spectrum(center_spectrum(x)), x) == 0.0);
}

TEST_CASE("center_spectrum follows m -> (m + floor(n/2)) mod n") {
  for (Index n : {6, 7}) {
    const ScanGrid g = make_grid(n, n, 1.0, 1.0);
    for (Index m = 0; m < n; ++m) {
      ComplexFieldd f(g);
      f(m, (m + 1) % n) = 1.0;
      const auto c = center_spectrum(f);
      CHECK(c((m + n / 2) % n, ((m + 1) % n + n / 2) % n) == std::complex<double>(1.0));
      CHECK(oracle::max_abs_diff(uncenter_spectrum(c), f) == 0.0);
    }
  }
}

TEST_CASE("total_power and Parseval") {
  const ScanGrid g = make_grid(16, 16, 1.0, 1.0);
  CHECK(total_power(ComplexFieldd(g)) == 0.0);
  ComplexFieldd impulse(g);
  impulse(5, 9) = 1.0;
  CHECK(total_power(impulse) == 1.0);

  const auto x = oracle::random_field(g, 99);
  double direct = 0.0;
  for (Index n = 0; n < g.ny; ++n) {
    for (Index m = 0; m < g.nx; ++m) direct += std::norm(x(m, n));
  }
  const double spectral = total_power(fft2(x)) / double(g.size());
  CHECK(std::abs(total_power(x) - direct) / direct < 1e-12);
  CHECK(std::abs(spectral - direct) / direct < 1e-10);
}

TEST_CASE("spectral grid coordinates") {
  const ScanGrid g = make_grid(40, 40, 5.0, 5.0);
  const auto s = spectral_grid(g);
  CHECK(s.kx(20) == 0.0);
  CHECK(s.kx(0) == doctest::Approx(-oracle::kPi / 5.0));
  CHECK(s.kx(39) < oracle::kPi / 5.0);
  CHECK(s.bin_spacing_x() == doctest::Approx(2.0 * oracle::kPi / 200.0));
  for (Index i = 1; i < 40; ++i) CHECK(s.kx(i) > s.kx(i - 1));
  for (Index i = 1; i < 20; ++i) CHECK(s.kx(20 + i) == doctest::Approx(-s.kx(20 - i)));

  const auto odd = spectral_grid(make_grid(5, 5, 1.0, 1.0));
  CHECK(odd.kx(2) == 0.0);
  CHECK(odd.kx(0) == doctest::Approx(-odd.kx(4)));
}

TEST_CASE("bin index helpers agree with the centered layout") {
  for (Index n : {6, 7, 40}) {
    for (Index i = 0; i < n; ++i) {
      CHECK(centered_position(centered_bin(i, n), n) == i);
      CHECK(wrap_bin(centered_bin(i, n) + n, n) == centered_bin(i, n));
    }
  }
  CHECK(natural_bin(4, 8) == -4);
  CHECK(natural_bin(3, 8) == 3);
  CHECK(natural_bin(3, 5) == -2);
}

TEST_CASE("float instantiation") {
  ComplexField<float> f(make_grid(8, 8, 1.0, 1.0));
  f(1, 2) = 1.0f;
  const auto back = ifft2(fft2(f));
  CHECK((back.samples() - f.samples()).abs().maxCoeff() < 1e-6f);
}
