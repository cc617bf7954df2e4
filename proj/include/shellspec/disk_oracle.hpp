#pragma once

#include <algorithm>
#include <cmath>

#include "shellspec/bessel.hpp"
#include "shellspec/common.hpp"
#include "shellspec/spin.hpp"

namespace shellspec {

// Shell problem on the disk of radius R in one angular channel n. The
// spinor ansatz (f(r) e^{i n theta}, i g(r) e^{i(n+1) theta}) reduces
// (D_0 - z)psi = 0 to the radial system
//   f' = (n/r) f - (z+m) g,     g' = (z-m) f - ((n+1)/r) g,
// whose regular interior / decaying exterior solutions are
//   (f,g)_in  = ( I_n(wr), -w I_{n+1}(wr)/(z+m) ),
//   (f,g)_out = ( K_n(wr), +w K_{n+1}(wr)/(z+m) ),  w = sqrt(m^2-z^2).
struct DiskProblem {
  double R = 1.0;
  double m = 1.0;
  PointCouplings c;  // constant couplings, omega = 0
  int n = 0;
};

namespace oracle_detail {

inline std::pair<double, double> interior_radial(int n, double w, double r, double z, double m) {
  int a = std::abs(n), b = std::abs(n + 1);
  auto I = bessel::In_ladder(std::max(a, b), w * r);
  return {I[a], -w * I[b] / (z + m)};
}

inline std::pair<double, double> exterior_radial(int n, double w, double r, double z, double m) {
  int a = std::abs(n), b = std::abs(n + 1);
  auto K = bessel::Kn_ladder(std::max(a, b), w * r);
  return {K[a], w * K[b] / (z + m)};
}

// Transmission matrix in the (f, g) coefficient basis. Conjugating
// R = (4/(4+d))((4-d)/4 I + i eta sigma.n + tau sigma.t - lambda sigma_3)
// by the channel ansatz turns sigma.n into [[0,1],[1,0]] and sigma.t into
// [[0,-i],[i,0]] on the trace coefficients (u1, u2) = (f, ig); in the
// (f, g) variables everything becomes real:
inline Eigen::Matrix2d transmission_fg(const PointCouplings& c) {
  double d = c.d();
  Eigen::Matrix2d Q;
  Q << 0.25 * (4.0 - d) - c.lambda, c.tau - c.eta, c.tau + c.eta,
      0.25 * (4.0 - d) + c.lambda;
  return (4.0 / (4.0 + d)) * Q;
}

}  // namespace oracle_detail

// Matching determinant of the channel; its zeros in the gap are the
// eigenvalues. Both solution vectors are normalized at r = R, which keeps
// the determinant O(1) across the gap and free of spurious poles.
inline double mode_dispersion(const DiskProblem& dp, double z) {
  if (!(std::abs(z) < std::abs(dp.m)))
    throw std::domain_error("mode_dispersion requires z inside the spectral gap");
  if (std::abs(dp.c.d() + 4.0) < 1e-12)
    throw ConfiningCouplingsError("transmission matching undefined at d = -4");
  double w = std::sqrt(dp.m * dp.m - z * z);
  auto [fi, gi] = oracle_detail::interior_radial(dp.n, w, dp.R, z, dp.m);
  auto [fo, go] = oracle_detail::exterior_radial(dp.n, w, dp.R, z, dp.m);
  Eigen::Vector2d vi(fi, gi), vo(fo, go);
  vi.normalize();
  vo.normalize();
  Eigen::Vector2d rvo = oracle_detail::transmission_fg(dp.c) * vo;
  return vi(0) * rvo(1) - vi(1) * rvo(0);
}

// All dispersion roots of one channel inside (-m+margin, m-margin).
inline std::vector<double> channel_roots(const DiskProblem& dp, double margin = 1e-3,
                                         int grid = 4000) {
  std::vector<double> roots;
  double lo = -std::abs(dp.m) + margin * std::abs(dp.m);
  double hi = std::abs(dp.m) - margin * std::abs(dp.m);
  double prev = mode_dispersion(dp, lo);
  double zprev = lo;
  for (int i = 1; i <= grid; ++i) {
    double z = lo + (hi - lo) * i / grid;
    double cur = mode_dispersion(dp, z);
    if (prev * cur < 0.0) {
      double a = zprev, b = z, fa = prev;
      for (int it = 0; it < 100 && (b - a) > 1e-13; ++it) {
        double mid = 0.5 * (a + b);
        double fm = mode_dispersion(dp, mid);
        if (fa * fm <= 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = cur;
    zprev = z;
  }
  return roots;
}

struct DiskEigenvalue {
  double z = 0.0;
  int channel = 0;
};

// Gap eigenvalues across channels |n| <= nmax (n and -(n+1) are distinct
// channels; both are scanned).
inline std::vector<DiskEigenvalue> disk_gap_eigenvalues(double R, double m,
                                                        const PointCouplings& c,
                                                        int nmax = 40, double margin = 1e-3,
                                                        int grid = 4000) {
  std::vector<DiskEigenvalue> out;
  for (int n = -nmax - 1; n <= nmax; ++n) {
    DiskProblem dp{R, m, c, n};
    for (double z : channel_roots(dp, margin, grid)) out.push_back({z, n});
  }
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) { return u.z < v.z; });
  return out;
}

inline std::vector<double> distinct_values(const std::vector<DiskEigenvalue>& evs,
                                           double tol = 1e-8) {
  std::vector<double> zs;
  for (const auto& e : evs) {
    if (zs.empty() || std::abs(e.z - zs.back()) > tol) zs.push_back(e.z);
  }
  return zs;
}

struct DirichletLevel {
  double lambda = 0.0;  // eigenvalue (j_{n,k}/R)^2
  int n = 0;
  int k = 0;
  int multiplicity = 1;  // 2 for n >= 1
};

// Distinct Dirichlet-Laplacian levels of the disk covering at least `count`
// eigenvalues counted with multiplicity, ascending.
inline std::vector<DirichletLevel> disk_dirichlet_levels(double R, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  // Channel 0 alone supplies `count` eigenvalues, so j_{0,count} caps
  // everything we need; collect all zeros up to that cap.
  double jcap = bessel::bessel_j_zero(0, count);
  std::vector<DirichletLevel> pool;
  for (int n = 0;; ++n) {
    double j1 = bessel::bessel_j_zero(n, 1);
    if (j1 > jcap) break;
    for (int k = 1; k <= count; ++k) {
      double j = (k == 1) ? j1 : bessel::bessel_j_zero(n, k);
      if (j > jcap) break;
      pool.push_back({j * j / (R * R), n, k, n == 0 ? 1 : 2});
    }
  }
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  std::vector<DirichletLevel> out;
  int have = 0;
  for (const auto& lv : pool) {
    out.push_back(lv);
    have += lv.multiplicity;
    if (have >= count) break;
  }
  return out;
}

// First `count` Dirichlet eigenvalues, ascending, counted with multiplicity.
inline std::vector<double> disk_dirichlet_eigenvalues(double R, int count) {
  std::vector<double> out;
  for (const auto& lv : disk_dirichlet_levels(R, count)) {
    for (int i = 0; i < lv.multiplicity && static_cast<int>(out.size()) < count; ++i)
      out.push_back(lv.lambda);
  }
  return out;
}

// Spectrum of the critical purely magnetic shell (zig-zag case): continuous
// spectrum (-inf,-|m|] u [|m|,inf), +-m of infinite multiplicity, and the
// embedded sequence +-sqrt(m^2 + lambda_k) over the Dirichlet eigenvalues
// of the enclosed disk.
struct ZigzagSpectrum {
  double m = 0.0;
  std::vector<double> dirichlet_eigs;      // ascending, with multiplicity
  std::vector<double> embedded;            // sqrt(m^2 + lambda_k), same order
  bool flat_band_infinite_multiplicity = true;  // at +-m
  double continuum_edge = 0.0;             // |m|
};

inline ZigzagSpectrum zigzag_spectrum(double R, double m, int count) {
  ZigzagSpectrum out;
  out.m = m;
  out.continuum_edge = std::abs(m);
  out.dirichlet_eigs = disk_dirichlet_eigenvalues(R, count);
  for (double lam : out.dirichlet_eigs) out.embedded.push_back(std::sqrt(m * m + lam));
  return out;
}

// max over 100 disk sample points of |(D f) + m f| for f = (0, conj(z)^k),
// using exact polynomial derivatives; the antiholomorphic component is
// annihilated by the off-diagonal part, so the residual is pure rounding.
inline double antiholomorphic_kernel_check(double m, int k) {
  if (k < 0 || k > 20) throw std::invalid_argument("polynomial degree must be in [0, 20]");
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double rho = 0.95 * (i + 1) / 100.0;
    double th = 2.0 * kPi * 0.61803398875 * i;
    Complex zc(rho * std::cos(th), rho * std::sin(th));
    Complex f2 = std::pow(std::conj(zc), k);
    Complex dx = k == 0 ? 0.0 : Complex(double(k)) * std::pow(std::conj(zc), k - 1);
    Complex dy = k == 0 ? 0.0 : Complex(0, -1.0) * double(k) * std::pow(std::conj(zc), k - 1);
    // (D f)_1 = -i (dx - i dy),  (D f)_2 = -m f2; residual of (D + m) f
    Complex r1 = Complex(0, -1) * (dx - Complex(0, 1) * dy);
    Complex r2 = (-m * f2) + m * f2;
    worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
  }
  return worst;
}

// Exterior companion: f = ((z - z0)^{-k}, 0) with z0 strictly inside the
// disk, sampled outside; residual of (D - m) f.
inline double holomorphic_exterior_check(double m, int k, const Vec2& z0) {
  if (k < 2) throw std::invalid_argument("exterior family needs k >= 2");
  Complex c0(z0.x(), z0.y());
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double rho = 1.5 + 2.0 * (i + 1) / 100.0;
    double th = 2.0 * kPi * 0.38196601125 * i;
    Complex zc(rho * std::cos(th), rho * std::sin(th));
    Complex u = std::pow(zc - c0, -k - 1);
    Complex f1 = std::pow(zc - c0, -k);
    Complex dx = -double(k) * u;
    Complex dy = Complex(0, -1.0) * double(k) * u;
    // (D f)_2 = -i (dx + i dy) f1,  (D f)_1 = m f1 ; residual of (D - m) f
    Complex r2 = Complex(0, -1) * (dx + Complex(0, 1) * dy);
    Complex r1 = m * f1 - m * f1;
    worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
  }
  return worst;
}

}  // namespace shellspec
