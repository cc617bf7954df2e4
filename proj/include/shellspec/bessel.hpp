#pragma once

#include <cmath>
#include <vector>

#include "shellspec/common.hpp"

namespace shellspec::bessel {

namespace detail {

inline constexpr double kSeriesRadius = 7.75;  // series/continued-fraction seam

inline double harmonic(int k) {
  static const std::vector<double> table = [] {
    std::vector<double> h(257, 0.0);
    for (int i = 1; i <= 256; ++i) h[i] = h[i - 1] + 1.0 / i;
    return h;
  }();
  return table[k];
}

}  // namespace detail

// Entire series pieces. These are what the quadrature splits consume: the
// log-singular parts of K0 and K1 are peeled off analytically, so each of
// the functions below is analytic in z^2.

// I0(z) = sum (z^2/4)^k / (k!)^2
inline Complex I0(Complex z) {
  Complex q = 0.25 * z * z, term = 1.0, sum = 1.0;
  for (int k = 1; k < 256; ++k) {
    term *= q / double(k) / double(k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// I1(z)/z = (1/2) sum (z^2/4)^k / (k! (k+1)!)
inline Complex I1_over_z(Complex z) {
  Complex q = 0.25 * z * z, term = 0.5, sum = 0.5;
  for (int k = 1; k < 256; ++k) {
    term *= q / double(k) / double(k + 1);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

inline Complex I1(Complex z) { return z * I1_over_z(z); }

// K0(z) + ln(z/2) I0(z) = -gamma I0(z) + sum_{k>=1} H_k (z^2/4)^k/(k!)^2
inline Complex K0_regular(Complex z) {
  Complex q = 0.25 * z * z, term = 1.0;
  Complex sum = -kEulerGamma * I0(z);
  for (int k = 1; k < 256; ++k) {
    term *= q / double(k) / double(k);
    Complex add = term * detail::harmonic(k);
    sum += add;
    if (std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
  }
  return sum;
}

// (K1(z) - 1/z - ln(z/2) I1(z))/z
//   = -(1/4) sum_k (H_k + H_{k+1} - 2 gamma) (z^2/4)^k / (k!(k+1)!)
inline Complex K1_regular_over_z(Complex z) {
  Complex q = 0.25 * z * z, term = 1.0, sum = 0.0;
  for (int k = 0; k < 256; ++k) {
    if (k > 0) term *= q / double(k) / double(k + 1);
    Complex add = term * (detail::harmonic(k) + detail::harmonic(k + 1) - 2.0 * kEulerGamma);
    sum += add;
    if (k > 2 && std::abs(add) < 1e-18 * (std::abs(sum) + 1.0)) break;
  }
  return -0.25 * sum;
}

namespace detail {

// Steed/Lentz continued fraction for K0 and K1 at Re z > 0, |z| beyond the
// series seam. Complex generalization of the standard CF2 recursion.
inline std::pair<Complex, Complex> k01_continued_fraction(Complex x) {
  const int max_iter = 40000;
  const double eps = 1e-16;
  Complex b = 2.0 * (1.0 + x);
  Complex d = 1.0 / b;
  Complex h = d, delh = d;
  Complex q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  Complex q = a1, c = a1, a = -a1;
  Complex s = 1.0 + q * delh;
  for (int i = 2; i <= max_iter; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / double(i);
    Complex qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    Complex dels = q * delh;
    s += dels;
    if (std::abs(dels) < eps * std::abs(s)) break;
  }
  h = a1 * h;
  Complex pref = std::sqrt(kPi / (2.0 * x)) * std::exp(-x);
  Complex k0 = pref / s;
  Complex k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace detail

// Modified Bessel functions of the second kind, orders 0 and 1, for complex
// argument with Re x > 0. Power series below |x| = 7.75, continued fraction
// beyond; both branches agree to ~1e-13 relative at the seam.
inline Complex K0(Complex x) {
  if (!(x.real() > 0.0)) throw BesselDomainError("K0 requires Re x > 0");
  if (std::abs(x) < detail::kSeriesRadius) return K0_regular(x) - std::log(0.5 * x) * I0(x);
  return detail::k01_continued_fraction(x).first;
}

inline Complex K1(Complex x) {
  if (!(x.real() > 0.0)) throw BesselDomainError("K1 requires Re x > 0");
  if (std::abs(x) < detail::kSeriesRadius)
    return 1.0 / x + std::log(0.5 * x) * I1(x) + x * K1_regular_over_z(x);
  return detail::k01_continued_fraction(x).second;
}

inline Complex bessel_k(int order, Complex x) {
  if (order == 0) return K0(x);
  if (order == 1) return K1(x);
  throw BesselDomainError("bessel_k supports orders 0 and 1 only");
}

// --- integer-order ladders on the positive real axis (disk separation) ---

// I_0..I_nmax by Miller's downward recurrence, normalized against
// e^x = I_0 + 2 sum I_k.
inline std::vector<double> In_ladder(int nmax, double x) {
  if (x <= 0) throw BesselDomainError("In_ladder requires x > 0");
  int top = nmax + 25 + static_cast<int>(std::ceil(1.5 * std::sqrt(double(nmax) + 1.0) + x));
  std::vector<double> v(top + 2, 0.0);
  v[top + 1] = 0.0;
  v[top] = 1e-300;
  for (int k = top; k >= 1; --k) {
    v[k - 1] = v[k + 1] + (2.0 * k / x) * v[k];
    if (std::abs(v[k - 1]) > 1e270) {
      for (int j = k - 1; j <= top + 1; ++j) v[j] *= 1e-270;
    }
  }
  double norm = v[0];
  for (int k = 1; k <= top; ++k) norm += 2.0 * v[k];
  double scale = std::exp(x) / norm;
  std::vector<double> out(nmax + 1);
  for (int k = 0; k <= nmax; ++k) out[k] = v[k] * scale;
  return out;
}

// K_0..K_nmax by stable upward recurrence.
inline std::vector<double> Kn_ladder(int nmax, double x) {
  if (x <= 0) throw BesselDomainError("Kn_ladder requires x > 0");
  std::vector<double> out(std::max(nmax + 1, 2));
  out[0] = K0(Complex(x, 0.0)).real();
  out[1] = K1(Complex(x, 0.0)).real();
  for (int k = 1; k < nmax; ++k) out[k + 1] = out[k - 1] + (2.0 * k / x) * out[k];
  out.resize(nmax + 1);
  return out;
}

// J_0..J_nmax by Miller's downward recurrence, normalized against
// 1 = J_0 + 2 sum J_{2k}.
inline std::vector<double> Jn_ladder(int nmax, double x) {
  if (x <= 0) throw BesselDomainError("Jn_ladder requires x > 0");
  int top = std::max(nmax, static_cast<int>(std::ceil(x))) + 30 +
            static_cast<int>(std::ceil(1.5 * std::sqrt(x + double(nmax) + 1.0)));
  if (top % 2) ++top;
  std::vector<double> v(top + 2, 0.0);
  v[top + 1] = 0.0;
  v[top] = 1e-300;
  for (int k = top; k >= 1; --k) {
    v[k - 1] = (2.0 * k / x) * v[k] - v[k + 1];
    if (std::abs(v[k - 1]) > 1e270) {
      for (int j = k - 1; j <= top + 1; ++j) v[j] *= 1e-270;
    }
  }
  double norm = v[0];
  for (int k = 2; k <= top; k += 2) norm += 2.0 * v[k];
  std::vector<double> out(nmax + 1);
  for (int k = 0; k <= nmax; ++k) out[k] = v[k] / norm;
  return out;
}

inline double Jn(int n, double x) { return Jn_ladder(n, x)[n]; }

inline double Jn_derivative(int n, double x) {
  if (n == 0) return -Jn(1, x);
  auto j = Jn_ladder(n + 1, x);
  return 0.5 * (j[n - 1] - j[n + 1]);
}

// k-th positive zero of J_n, by sign-change bracketing, bisection, and a
// Newton polish. Residual |J_n(j_{n,k})| lands near 1e-15.
inline double bessel_j_zero(int n, int k) {
  if (k < 1) throw BesselDomainError("zero index k must be >= 1");
  double x = n > 0 ? n + 0.5 : 0.5;
  double step = 0.25;
  double prev = Jn(n, x);
  int found = 0;
  for (int it = 0; it < 200000; ++it) {
    double xn = x + step;
    double cur = Jn(n, xn);
    if (prev == 0.0) prev = 1e-300;
    if (cur * prev < 0.0) {
      ++found;
      if (found == k) {
        double a = x, b = xn;
        for (int i = 0; i < 80; ++i) {
          double m = 0.5 * (a + b);
          double fm = Jn(n, m);
          if (fm * Jn(n, a) <= 0.0)
            b = m;
          else
            a = m;
        }
        double r = 0.5 * (a + b);
        for (int i = 0; i < 6; ++i) {
          double f = Jn(n, r), fp = Jn_derivative(n, r);
          if (std::abs(fp) < 1e-30) break;
          r -= f / fp;
        }
        return r;
      }
    }
    prev = cur;
    x = xn;
  }
  throw NumericalError("bessel_j_zero: bracketing failed");
}

}  // namespace shellspec::bessel
