#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "shellspec/green.hpp"

using namespace shellspec;

TEST_CASE("spectral parameter branch") {
  SpectralParameter sp(Complex(0.3, 0.0), 1.0);
  CHECK(sp.w.real() == Catch::Approx(std::sqrt(1 - 0.09)).epsilon(1e-14));
  SpectralParameter spc(Complex(0.3, 0.4), 1.0);
  CHECK(spc.w.real() > 0.0);
  CHECK_THROWS_AS(SpectralParameter(Complex(2.0, 0.0), 1.0), InvalidSpectralParameterError);
  CHECK_THROWS_AS(SpectralParameter(Complex(1.0, 0.0), 1.0), InvalidSpectralParameterError);
}

TEST_CASE("kernel adjoint identity") {
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    Complex z(uni(rng) * 0.4, uni(rng) * 0.4);
    SpectralParameter sp(z, 1.0), spc(std::conj(z), 1.0);
    Vec2 x(uni(rng), uni(rng)), y(uni(rng), uni(rng));
    if ((x - y).norm() < 1e-3) continue;
    SpinMatrix lhs = green_phi(sp, Vec2(x - y)).adjoint();
    SpinMatrix rhs = green_phi(spc, Vec2(y - x));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("green function solves the free equation") {
  SpectralParameter sp(Complex(0.4, 0.1), 1.0);
  double h = 1e-5;
  double worst = 0.0, scale = 0.0;
  for (double ang : {0.0, 0.7, 2.1, 4.4}) {
    Vec2 x(std::cos(ang), std::sin(ang));
    SpinMatrix u = green_phi(sp, x);
    SpinMatrix dx1 = (green_phi(sp, Vec2(x + Vec2(h, 0))) - green_phi(sp, Vec2(x - Vec2(h, 0)))) /
                     (2 * h);
    SpinMatrix dx2 = (green_phi(sp, Vec2(x + Vec2(0, h))) - green_phi(sp, Vec2(x - Vec2(0, h)))) /
                     (2 * h);
    SpinMatrix resid = Complex(0, -1) * (sigma1() * dx1 + sigma2() * dx2) + sp.m * sigma3() * u -
                       sp.z * u;
    worst = std::max(worst, resid.cwiseAbs().maxCoeff());
    scale = std::max(scale, u.cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-6 * scale);
}

TEST_CASE("massless decay rate") {
  // m = 0, z = i: w = 1, entries decay like e^{-|x|}/sqrt(|x|)
  SpectralParameter sp(Complex(0.0, 1.0), 0.0);
  double r1 = 4.0, r2 = 8.0;
  double v1 = green_phi(sp, Vec2(r1, 0)).cwiseAbs().maxCoeff();
  double v2 = green_phi(sp, Vec2(r2, 0)).cwiseAbs().maxCoeff();
  double predicted = std::exp(-(r2 - r1)) * std::sqrt(r1 / r2);
  CHECK(v2 / v1 == Catch::Approx(predicted).epsilon(0.05));
}

TEST_CASE("parity of the kernel") {
  SpectralParameter sp(Complex(0.2, 0.0), 1.0);
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  for (int i = 0; i < 40; ++i) {
    Vec2 x(uni(rng), uni(rng));
    if (x.norm() < 0.1) continue;
    SpinMatrix a = green_phi(sp, x), b = green_phi(sp, Vec2(-x));
    // diagonal part even, off-diagonal part odd
    CHECK(std::abs(a(0, 0) - b(0, 0)) < 1e-13);
    CHECK(std::abs(a(1, 1) - b(1, 1)) < 1e-13);
    CHECK(std::abs(a(0, 1) + b(0, 1)) < 1e-13);
    CHECK(std::abs(a(1, 0) + b(1, 0)) < 1e-13);
  }
}

TEST_CASE("analyticity in z") {
  // Cauchy-Riemann residual of each entry with respect to z
  Vec2 x(0.8, -0.4);
  double h = 1e-5;
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.2, 0.5), Complex(0.0, 0.8)}) {
    SpinMatrix dre = (green_phi(SpectralParameter(z + h, 1.0), x) -
                      green_phi(SpectralParameter(z - h, 1.0), x)) /
                     (2 * h);
    SpinMatrix dim = (green_phi(SpectralParameter(z + Complex(0, h), 1.0), x) -
                      green_phi(SpectralParameter(z - Complex(0, h), 1.0), x)) /
                     (2 * h);
    SpinMatrix cr = dre - Complex(0, -1) * dim;  // df/dRe - (1/i) df/dIm = 0
    CHECK(cr.cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("zero displacement rejected") {
  SpectralParameter sp(Complex(0.0, 0.0), 1.0);
  CHECK_THROWS_AS(green_phi(sp, Vec2(0, 0)), std::domain_error);
}
