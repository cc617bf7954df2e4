#pragma once

#include <cmath>

#include "shellspec/common.hpp"
#include "shellspec/geometry.hpp"

namespace shellspec {

inline SpinMatrix sigma1() {
  SpinMatrix m;
  m << 0, 1, 1, 0;
  return m;
}
inline SpinMatrix sigma2() {
  SpinMatrix m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline SpinMatrix sigma3() {
  SpinMatrix m;
  m << 1, 0, 0, -1;
  return m;
}

// sigma . v = sigma_1 v_1 + sigma_2 v_2
inline SpinMatrix sigma_dot(const SpinVector& v) {
  SpinMatrix m;
  m << 0.0, v(0) - Complex(0, 1) * v(1), v(0) + Complex(0, 1) * v(1), 0.0;
  return m;
}
inline SpinMatrix sigma_dot(const Vec2& v) {
  return sigma_dot(SpinVector(Complex(v.x(), 0), Complex(v.y(), 0)));
}

// Closed-form exponential of a 2x2 matrix,
//   exp A = e^{tr A/2} ( cos(nu) I + sinc(nu) (A - (tr A/2) I) ),
//   nu = sqrt(det A - (tr A/2)^2), principal branch.
// cos(nu) and sinc(nu) are entire in nu^2, so the branch choice is
// immaterial; near nu = 0 both are evaluated by series to avoid 0/0.
inline SpinMatrix exp2x2(const SpinMatrix& A) {
  Complex half_tr = 0.5 * (A(0, 0) + A(1, 1));
  Complex nu2 = A.determinant() - half_tr * half_tr;
  Complex nu = std::sqrt(nu2);
  Complex c, sc;
  if (std::abs(nu) < 1e-4) {
    c = 1.0 - nu2 / 2.0 + nu2 * nu2 / 24.0 - nu2 * nu2 * nu2 / 720.0;
    sc = 1.0 - nu2 / 6.0 + nu2 * nu2 / 120.0 - nu2 * nu2 * nu2 / 5040.0;
  } else {
    c = std::cos(nu);
    sc = std::sin(nu) / nu;
  }
  return std::exp(half_tr) * (c * SpinMatrix::Identity() + sc * (A - half_tr * SpinMatrix::Identity()));
}

// Shell coupling strengths at one boundary point. omega multiplies
// sigma.n and is eliminated by gauge reduction before any spectral use.
struct PointCouplings {
  double eta = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  double omega = 0.0;
  double d() const { return eta * eta - tau * tau - lambda * lambda; }
  // criticality functional (d/4 - 1)^2 - lambda^2
  double criticality() const {
    double q = 0.25 * d() - 1.0;
    return q * q - lambda * lambda;
  }
};

// B = eta I + tau sigma_3 + lambda sigma.t  (omega intentionally excluded)
inline SpinMatrix coupling_matrix_B(const PointCouplings& pc, const FramePoint& fp) {
  return pc.eta * SpinMatrix::Identity() + pc.tau * sigma3() + pc.lambda * sigma_dot(fp.t);
}

// M_pm = +-i sigma.n + (1/2)(eta I + tau sigma_3 + lambda sigma.t + omega sigma.n)
inline std::pair<SpinMatrix, SpinMatrix> boundary_matrices_M(const PointCouplings& pc,
                                                             const FramePoint& fp) {
  SpinMatrix isn = Complex(0, 1) * sigma_dot(fp.n);
  SpinMatrix half = 0.5 * (coupling_matrix_B(pc, fp) + pc.omega * sigma_dot(fp.n));
  return {isn + half, -isn + half};
}

// Transmission matrix linking the one-sided traces, interior = R * exterior:
//   R = (4/(4+d)) ( (4-d)/4 I + i eta sigma.n + tau sigma.t - lambda sigma_3 ).
// Requires omega = 0 and d != -4 (d = -4 is the confining case).
inline SpinMatrix transmission_matrix_R(const PointCouplings& pc, const FramePoint& fp) {
  double d = pc.d();
  if (std::abs(d + 4.0) < 1e-12)
    throw ConfiningCouplingsError("transmission matrix undefined at d = -4 (confinement)");
  return (4.0 / (4.0 + d)) *
         (0.25 * (4.0 - d) * SpinMatrix::Identity() +
          Complex(0, 1) * pc.eta * sigma_dot(fp.n) + pc.tau * sigma_dot(fp.t) -
          pc.lambda * sigma3());
}

// exp[ i (sigma.n) B_{eta,tau,lambda} ]; equals the transmission matrix of
// the forward-renormalized couplings away from d = (2k+1)^2 pi^2.
inline SpinMatrix exp_shell(const PointCouplings& pc, const FramePoint& fp) {
  return exp2x2(Complex(0, 1) * sigma_dot(fp.n) * coupling_matrix_B(pc, fp));
}

}  // namespace shellspec
