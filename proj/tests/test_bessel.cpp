#include <catch2/catch_amalgamated.hpp>

#include "shellspec/bessel.hpp"

using namespace shellspec;

namespace {

// independent oracle: K0(x) = int_0^inf exp(-x cosh t) dt by trapezoid on
// [0, 40]; the integrand decays double-exponentially, so 1e4 nodes give
// far more than the 1e-11 the comparison needs (Re x > 0).
Complex k0_quadrature(Complex x) {
  const int n = 10000;
  const double T = 40.0;
  Complex acc = 0.5 * std::exp(-x);  // t = 0 endpoint
  for (int i = 1; i < n; ++i) {
    double t = T * i / n;
    acc += std::exp(-x * std::cosh(t));
  }
  return acc * (T / n);
}

// K1(x) = int_0^inf exp(-x cosh t) cosh t dt
Complex k1_quadrature(Complex x) {
  const int n = 10000;
  const double T = 40.0;
  Complex acc = 0.5 * std::exp(-x);
  for (int i = 1; i < n; ++i) {
    double t = T * i / n;
    acc += std::exp(-x * std::cosh(t)) * std::cosh(t);
  }
  return acc * (T / n);
}

}  // namespace

TEST_CASE("K0 at 1 against the integral oracle") {
  Complex v = bessel::K0(Complex(1.0, 0.0));
  CHECK(std::abs(v - k0_quadrature(1.0)) < 1e-13);
  CHECK(v.real() == Catch::Approx(0.421024438241).margin(1e-11));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("K0/K1 against the oracle across the domain") {
  for (double x : {1e-8, 1e-4, 0.03, 0.5, 2.0, 7.0, 7.74, 7.76, 12.0, 50.0, 200.0, 600.0}) {
    Complex k0 = bessel::K0(Complex(x, 0));
    Complex k1 = bessel::K1(Complex(x, 0));
    Complex o0 = k0_quadrature(Complex(x, 0));
    Complex o1 = k1_quadrature(Complex(x, 0));
    CHECK(std::abs(k0 - o0) < 1e-12 * std::abs(o0));
    CHECK(std::abs(k1 - o1) < 1e-12 * std::abs(o1));
  }
  // complex arguments, Re > 0
  for (Complex x : {Complex(2.0, 1.0), Complex(0.7, -0.4), Complex(9.0, 3.0), Complex(1.0, 0.9)}) {
    CHECK(std::abs(bessel::K0(x) - k0_quadrature(x)) < 1e-12 * std::abs(k0_quadrature(x)));
    CHECK(std::abs(bessel::K1(x) - k1_quadrature(x)) < 1e-12 * std::abs(k1_quadrature(x)));
  }
}

TEST_CASE("series and continued fraction agree at the seam") {
  for (double arg : {0.0, 0.3, -0.3}) {
    for (double rad : {7.0, 7.75, 8.5}) {
      Complex x = std::polar(rad, arg);
      if (x.real() <= 0) continue;
      Complex s0 = bessel::K0_regular(x) - std::log(0.5 * x) * bessel::I0(x);
      Complex c0 = bessel::detail::k01_continued_fraction(x).first;
      CHECK(std::abs(s0 - c0) < 1e-12 * std::abs(c0));
    }
  }
}

TEST_CASE("small and large argument asymptotics") {
  // x K1(x) -> 1
  for (double x : {1e-8, 1e-6, 1e-4}) {
    Complex v = Complex(x, 0) * bessel::K1(Complex(x, 0));
    CHECK(std::abs(v - 1.0) < 1e-6);
  }
  // K0(20) ~ sqrt(pi/40) e^{-20} within 2 percent
  double ratio =
      bessel::K0(Complex(20.0, 0)).real() / (std::sqrt(kPi / 40.0) * std::exp(-20.0));
  CHECK(std::abs(ratio - 1.0) < 0.02);
}

TEST_CASE("derivative identity K0' = -K1") {
  for (double x = 0.1; x <= 50.0; x *= 1.7) {
    double h = 1e-6 * std::max(1.0, x);
    double fd =
        (bessel::K0(Complex(x + h, 0)).real() - bessel::K0(Complex(x - h, 0)).real()) / (2 * h);
    double k1 = bessel::K1(Complex(x, 0)).real();
    CHECK(std::abs(fd + k1) < 1e-7 * std::abs(k1));
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(bessel::K0(Complex(-1.0, 0.5)), BesselDomainError);
  CHECK_THROWS_AS(bessel::K1(Complex(0.0, 1.0)), BesselDomainError);
  CHECK_THROWS_AS(bessel::bessel_k(2, Complex(1.0, 0)), BesselDomainError);
}

TEST_CASE("integer ladders satisfy the Wronskian") {
  // I_n(x) K_{n+1}(x) + I_{n+1}(x) K_n(x) = 1/x
  for (double x : {0.2, 1.0, 3.5, 10.0}) {
    auto I = bessel::In_ladder(42, x);
    auto K = bessel::Kn_ladder(42, x);
    for (int n = 0; n <= 41; ++n) {
      double w = I[n] * K[n + 1] + I[n + 1] * K[n];
      CHECK(std::abs(w - 1.0 / x) < 1e-12 / x);
    }
  }
}

TEST_CASE("J ladder matches series at low order") {
  // J0 series check
  for (double x : {0.5, 2.0, 5.5}) {
    double series = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
      if (k > 0) term *= -0.25 * x * x / (k * double(k));
      series += term;
    }
    CHECK(bessel::Jn(0, x) == Catch::Approx(series).margin(1e-13));
  }
}

TEST_CASE("bessel zeros") {
  double j01 = bessel::bessel_j_zero(0, 1);
  CHECK(j01 * j01 == Catch::Approx(5.783186).margin(1e-5));
  CHECK(std::abs(bessel::Jn(0, j01)) < 1e-13);

  // ordering j01 < j11 < j21 < j02
  double j11 = bessel::bessel_j_zero(1, 1);
  double j21 = bessel::bessel_j_zero(2, 1);
  double j02 = bessel::bessel_j_zero(0, 2);
  CHECK(j01 < j11);
  CHECK(j11 < j21);
  CHECK(j21 < j02);

  for (auto [n, k] : {std::pair{1, 2}, {3, 1}, {5, 4}, {10, 2}}) {
    double j = bessel::bessel_j_zero(n, k);
    CHECK(std::abs(bessel::Jn(n, j)) < 1e-13);
  }
}
