#pragma once

#include <cmath>

#include "shellspec/bessel.hpp"
#include "shellspec/common.hpp"
#include "shellspec/spin.hpp"

namespace shellspec {

// Spectral point z in the resolvent set of the free operator, with the
// principal square root w = sqrt(m^2 - z^2), Re w > 0.
struct SpectralParameter {
  Complex z;
  double m;
  Complex w;

  SpectralParameter(Complex z_, double m_) : z(z_), m(m_) {
    Complex u = Complex(m * m, 0.0) - z * z;
    if (u.imag() == 0.0 && u.real() <= 0.0)
      throw InvalidSpectralParameterError(
          "m^2 - z^2 lies on (-inf, 0]: z is not in the free resolvent set");
    w = std::sqrt(u);
  }
};

// Green function of the free two-dimensional Dirac operator at z:
//   phi_z(x) = (1/2pi) K0(w|x|)(m sigma_3 + z I)
//            + i (sigma . x/|x|) (w/2pi) K1(w|x|).
inline SpinMatrix green_phi(const SpectralParameter& sp, const Vec2& x) {
  double r = x.norm();
  if (r == 0.0) throw std::domain_error("green_phi requires a nonzero displacement");
  Complex wr = sp.w * r;
  Complex k0 = bessel::K0(wr), k1 = bessel::K1(wr);
  SpinMatrix mz = sp.m * sigma3() + sp.z * SpinMatrix::Identity();
  return (0.5 / kPi) * k0 * mz +
         Complex(0, 0.5 / kPi) * sp.w * k1 * sigma_dot(Vec2(x / r));
}

}  // namespace shellspec
