#pragma once

#include <algorithm>
#include <cmath>

#include "shellspec/bessel.hpp"
#include "shellspec/couplings.hpp"
#include "shellspec/geometry.hpp"
#include "shellspec/green.hpp"
#include "shellspec/spin.hpp"

namespace shellspec {

// Periodic quadrature rules on the uniform grid t_j = 2 pi j / N.
//
// Log rule (Martensen/Kussmaul):
//   int_0^{2pi} f(tau) ln(4 sin^2((t_i - tau)/2)) dtau ~ sum_j R_{i-j} f(t_j),
//   R_k = -(2pi/n) sum_{m=1}^{n-1} cos(2pi m k/N)/m - (pi/n^2) (-1)^k,  n = N/2,
// exact for trigonometric polynomials of degree < n.
//
// Hilbert rule: p.v. int_0^{2pi} (1/2)cot((t_i - tau)/2) f(tau) dtau
//   ~ sum_j HW_{i-j} f(t_j),  HW_k = (2pi/N) cot(pi k/N) for k odd, else 0,
// exact for trigonometric monomials e^{im tau}, |m| < n (the conjugation
// multiplier pi i sign(m); the two +-n modes are mapped to zero).
struct PeriodicRules {
  int N = 0;
  std::vector<double> logw;   // R_k, k = 0..N-1 (even in k mod N)
  std::vector<double> hilw;   // HW_k, k = 0..N-1 (odd in k mod N)
  std::vector<double> ln4sin; // ln(4 sin^2(pi k/N)), k = 1..N-1; entry 0 unused
  std::vector<double> cothalf;// cot(pi k/N), k = 1..N-1; entry 0 unused

  explicit PeriodicRules(int N_) : N(N_) {
    int n = N / 2;
    logw.resize(N);
    hilw.resize(N);
    ln4sin.assign(N, 0.0);
    cothalf.assign(N, 0.0);
    for (int k = 0; k < N; ++k) {
      double acc = 0.0;
      for (int m = 1; m < n; ++m) acc += std::cos(2.0 * kPi * m * k / N) / m;
      logw[k] = -(2.0 * kPi / n) * acc - (kPi / (n * double(n))) * (k % 2 == 0 ? 1.0 : -1.0);
      hilw[k] = (k % 2 == 1) ? (2.0 * kPi / N) / std::tan(kPi * k / N) : 0.0;
      if (k > 0) {
        double sn = std::sin(kPi * k / N);
        ln4sin[k] = std::log(4.0 * sn * sn);
        cothalf[k] = std::cos(kPi * k / N) / sn;
      }
    }
  }
};

// N-node periodic discretization of the shell.
struct ShellDiscretization {
  Curve curve;
  int N;
  std::vector<FramePoint> frames;
  PeriodicRules rules;

  ShellDiscretization(const Curve& c, int N_)
      : curve(c), N(N_), frames(), rules((check_N(N_), N_)) {
    frames = curve.equispaced_nodes(N);
  }

 private:
  static void check_N(int N) {
    if (N < 8 || N % 2 != 0)
      throw InvalidNodeCountError("shell discretization requires even N >= 8");
  }
};

namespace detail {

// Cauchy coefficient of the boundary kernel: D(t) = (i/2pi) sigma.t.
inline SpinMatrix cauchy_coefficient(const FramePoint& fp) {
  return Complex(0, 0.5 / kPi) * sigma_dot(fp.t);
}

}  // namespace detail

// Nystrom matrix of the boundary integral operator
//   C_z phi(x) = p.v. int_Sigma phi_z(x - y) phi(y) ds(y)
// on the 2N-dimensional node space (2x2 blocks, nodes interleaved).
//
// Kernel structure in the scaled variable t = 2 pi s / l, with
// r = |x(t) - x(tau)|, dx = x(t) - x(tau), w = sqrt(m^2 - z^2):
//
//   A(t,tau) = (l/2pi) phi_z(dx)
//            = L(t,tau) ln(4 sin^2((t-tau)/2))
//            + (1/2)(D(t) + D(tau)) (1/2) cot((t-tau)/2)
//            + S(t,tau)                                   (S smooth periodic)
//
//   L = -(l/8pi^2) I0(wr) (m sigma_3 + z I) + (i l/8pi^2)(sigma.dx) w^2 I1(wr)/(wr),
//   D(t) = (i/2pi) sigma.t(t).
//
// The Cauchy pole carries the symmetrized coefficient (D(t)+D(tau))/2 rather
// than the frozen D(t). Expanding dx = h t + (h^2/2) kappa n + O(h^3),
// h = (l/2pi)(t - tau), gives
//   (l/2pi)(i/2pi)(sigma.dx)/r^2 = D(t)/(t-tau) + (i l kappa/8pi^2)(sigma.n) + O(t-tau),
// while (D(t)+D(tau))/2 = D(t) - (1/2)D'(t)(t-tau) + ... with
// D'(t) = -(i l kappa/4pi^2)(sigma.n). The kappa/2 diagonal term of the
// frozen-coefficient remainder is exactly -(1/2)D', so the symmetrized
// remainder S has ZERO diagonal limit from the Cauchy part; its K0 part
// tends to (l/4pi^2)(-gamma + ln(4pi/(w l)))(m sigma_3 + z I).
//
// Why the symmetrized form: the pointwise kernel satisfies
// A_z(t,tau)^H = A_{conj z}(tau,t). Weight corrections preserve that
// identity exactly when the log weight multiplies an adjoint-symmetric
// factor (it does) and the Hilbert weight (antisymmetric in i-j) multiplies
// an anti-Hermitian factor symmetric in (i,j) -- which (D_i+D_j)/2 is and a
// frozen D_i is not. The discrete matrix then obeys C_z^H = C_{conj z} to
// rounding, and every kernel piece is integrated by a spectrally accurate
// rule.
inline Eigen::MatrixXcd assemble_Cz(const ShellDiscretization& disc,
                                    const SpectralParameter& sp) {
  const int N = disc.N;
  const double l = disc.curve.length();
  const double h = 2.0 * kPi / N;
  const Complex w = sp.w;
  const SpinMatrix mzI = sp.m * sigma3() + sp.z * SpinMatrix::Identity();

  Eigen::MatrixXcd C(2 * N, 2 * N);
  std::vector<SpinMatrix> D(N);
  for (int i = 0; i < N; ++i) D[i] = detail::cauchy_coefficient(disc.frames[i]);

  const double pref_log = l / (8.0 * kPi * kPi);
  const double pref_full = l / (4.0 * kPi * kPi);

  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      SpinMatrix block;
      if (i == j) {
        Complex s0 = -kEulerGamma + std::log(4.0 * kPi / (w * l));
        block = disc.rules.logw[0] * (-pref_log) * mzI + h * pref_full * s0 * mzI;
      } else {
        int k = ((i - j) % N + N) % N;
        const Vec2 dx = disc.frames[i].x - disc.frames[j].x;
        const double r = dx.norm();
        const Complex wr = w * r;

        // full kernel value times the arc-length measure factor
        Complex k0 = bessel::K0(wr), k1 = bessel::K1(wr);
        SpinMatrix sdx = sigma_dot(dx);
        SpinMatrix full = (l / (2.0 * kPi)) *
                          ((0.5 / kPi) * k0 * mzI +
                           Complex(0, 0.5 / kPi) * w * (k1 / r) * sdx);

        block = h * full;

        // log-rule correction on the I0/I1 coefficient
        if (std::abs(wr) < 30.0) {
          SpinMatrix L = -pref_log * bessel::I0(wr) * mzI +
                         Complex(0, pref_log) * w * w * bessel::I1_over_z(wr) * sdx;
          block += (disc.rules.logw[k] - h * disc.rules.ln4sin[k]) * L;
        }

        // Hilbert-rule correction on the symmetrized Cauchy coefficient
        double hcorr = disc.rules.hilw[k] - 0.5 * h * disc.rules.cothalf[k];
        block += hcorr * SpinMatrix(0.5 * (D[i] + D[j]));
      }
      C.block<2, 2>(2 * i, 2 * j) = block;
    }
  }
  return C;
}

// Birman-Schwinger operator I + B C_z with B(s) = eta I + tau sigma_3
// + lambda sigma.t applied pointwise at the nodes. Couplings must be
// gauge-reduced (omega == 0).
struct BSOperator {
  Complex z;
  Eigen::MatrixXcd matrix;
};

inline BSOperator bs_operator(const ShellDiscretization& disc, const SpectralParameter& sp,
                              const Couplings& c) {
  for (int i = 0; i < detail::kClassifySamples; ++i) {
    if (std::abs(c.omega(c.period * i / detail::kClassifySamples)) > 1e-14)
      throw std::invalid_argument("bs_operator requires gauge-reduced couplings (omega = 0)");
  }
  Eigen::MatrixXcd M = assemble_Cz(disc, sp);
  for (int i = 0; i < disc.N; ++i) {
    SpinMatrix B = coupling_matrix_B(c.at(disc.frames[i].s), disc.frames[i]);
    M.middleRows<2>(2 * i) = B * M.middleRows<2>(2 * i);
  }
  M += Eigen::MatrixXcd::Identity(2 * disc.N, 2 * disc.N);
  return {sp.z, std::move(M)};
}

// Smallest singular value via LU-based inverse power iteration on M^{-1} M^{-H}.
inline double smallest_singular_value(const Eigen::MatrixXcd& M, int max_iter = 400,
                                      double tol = 1e-12) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const int n = static_cast<int>(M.rows());
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(1.0 + 0.05 * std::cos(1.7 * i), 0.03 * std::sin(2.3 * i));
  v.normalize();
  double mu_prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXcd y = lu.adjoint().solve(v);
    double mu = y.squaredNorm();
    Eigen::VectorXcd x = lu.solve(y);
    double nx = x.norm();
    if (!(nx > 0) || !std::isfinite(nx)) return 0.0;
    v = x / nx;
    if (it > 2 && std::abs(mu - mu_prev) <= tol * mu) {
      mu_prev = mu;
      break;
    }
    mu_prev = mu;
  }
  return 1.0 / std::sqrt(mu_prev);
}

// The k smallest singular values (for multiplicity estimates) by block
// inverse subspace iteration.
inline std::vector<double> smallest_singular_values(const Eigen::MatrixXcd& M, int k,
                                                    int iterations = 60) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const int n = static_cast<int>(M.rows());
  k = std::min(k, n);
  Eigen::MatrixXcd V(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i)
      V(i, j) = Complex(std::cos(0.37 * (i + 1) * (j + 1)), std::sin(0.23 * (i + 2) * (j + 1)));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr0(V);
  V = qr0.householderQ() * Eigen::MatrixXcd::Identity(n, k);
  for (int it = 0; it < iterations; ++it) {
    Eigen::MatrixXcd Y = lu.adjoint().solve(V);
    Eigen::MatrixXcd X = lu.solve(Y);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(X);
    V = qr.householderQ() * Eigen::MatrixXcd::Identity(n, k);
  }
  Eigen::MatrixXcd B = lu.adjoint().solve(V);
  Eigen::MatrixXcd G = B.adjoint() * B;  // Ritz matrix of M^{-1} M^{-H}
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  std::vector<double> out;
  for (int j = k - 1; j >= 0; --j) {
    double mu = es.eigenvalues()(j);
    out.push_back(mu > 0 ? 1.0 / std::sqrt(mu) : std::numeric_limits<double>::infinity());
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct GapEigenvalue {
  double z = 0.0;
  double sigma_min = 0.0;
  int multiplicity = 1;
};

struct ScanOptions {
  double detection_threshold = 1e-4;
  double refine_tol = 1e-10;
  int threads = 1;
  double multiplicity_factor = 10.0;
};

// Sweeps sigma_min(z) over the grid, refines each dip below the detection
// threshold by golden-section search, and estimates multiplicities from the
// cluster of singular values within multiplicity_factor * sigma_min.
inline std::vector<GapEigenvalue> eigenvalue_scan(const ShellDiscretization& disc,
                                                  const Couplings& c, double m,
                                                  const std::vector<double>& grid,
                                                  const ScanOptions& opts = {}) {
  ClassificationReport rep = classify(c);
  if (rep.confining)
    throw ConfiningCouplingsError("eigenvalue scan rejects confining couplings (d = -4)");
  if (rep.critical || rep.crit_abs_min < detail::kCriticalTol)
    throw CriticalCouplingsError("eigenvalue scan rejects critical couplings");
  if (grid.size() < 3) throw std::invalid_argument("scan grid needs at least 3 points");

  auto sigma_at = [&](double z) {
    return smallest_singular_value(bs_operator(disc, SpectralParameter(z, m), c).matrix);
  };

  const int K = static_cast<int>(grid.size());
  std::vector<double> sig(K);
  parallel_for(K, opts.threads, [&](int i) { sig[i] = sigma_at(grid[i]); });

  // candidate brackets around local minima below threshold
  std::vector<std::pair<double, double>> brackets;
  for (int i = 0; i < K; ++i) {
    bool left_ok = (i == 0) || sig[i] <= sig[i - 1];
    bool right_ok = (i == K - 1) || sig[i] <= sig[i + 1];
    if (left_ok && right_ok && sig[i] < opts.detection_threshold) {
      double a = grid[std::max(i - 1, 0)];
      double b = grid[std::min(i + 1, K - 1)];
      brackets.emplace_back(a, b);
    }
  }

  std::vector<GapEigenvalue> out(brackets.size());
  parallel_for(static_cast<int>(brackets.size()), opts.threads, [&](int bi) {
    auto [a, b] = brackets[bi];
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = sigma_at(x1), f2 = sigma_at(x2);
    while (b - a > opts.refine_tol) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = sigma_at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = sigma_at(x2);
      }
    }
    GapEigenvalue ev;
    ev.z = 0.5 * (a + b);
    auto svals =
        smallest_singular_values(bs_operator(disc, SpectralParameter(ev.z, m), c).matrix, 4);
    ev.sigma_min = svals.empty() ? 0.0 : svals[0];
    ev.multiplicity = 0;
    for (double s : svals)
      if (s <= opts.multiplicity_factor * ev.sigma_min + 1e-300) ++ev.multiplicity;
    ev.multiplicity = std::max(ev.multiplicity, 1);
    out[bi] = ev;
  });

  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) { return u.z < v.z; });
  // merge refinements that collapsed onto the same root
  std::vector<GapEigenvalue> merged;
  for (const auto& ev : out) {
    if (!merged.empty() && std::abs(ev.z - merged.back().z) < 1e-8) {
      if (ev.sigma_min < merged.back().sigma_min) merged.back() = ev;
    } else {
      merged.push_back(ev);
    }
  }
  return merged;
}

// Single-layer potential evaluator Phi_z phi with trigonometric upsampling
// of the density for accurate evaluation near (but off) the curve.
class LayerPotential {
 public:
  LayerPotential(const ShellDiscretization& disc, const SpectralParameter& sp,
                 Eigen::VectorXcd density, int fine = 8192)
      : sp_(sp), l_(disc.curve.length()), coarse_n_(disc.N) {
    const int N = disc.N;
    coarse_frames_ = disc.frames;
    coarse_density_.resize(N);
    for (int i = 0; i < N; ++i)
      coarse_density_[i] = SpinVector(density(2 * i), density(2 * i + 1));
    // trigonometric interpolation to the fine grid
    fine_n_ = std::max(fine, 2 * N);
    std::vector<std::vector<Complex>> coef(2, std::vector<Complex>(N));
    for (int comp = 0; comp < 2; ++comp) {
      for (int m = -N / 2; m < N / 2; ++m) {
        Complex acc = 0.0;
        for (int j = 0; j < N; ++j)
          acc += coarse_density_[j](comp) *
                 std::exp(Complex(0, -2.0 * kPi * m * j / double(N)));
        coef[comp][m + N / 2] = acc / double(N);
      }
    }
    fine_frames_.resize(fine_n_);
    fine_density_.resize(fine_n_);
    for (int q = 0; q < fine_n_; ++q) {
      fine_frames_[q] = disc.curve.frame_at(l_ * q / fine_n_);
      double tq = 2.0 * kPi * q / fine_n_;
      SpinVector val = SpinVector::Zero();
      for (int m = -N / 2; m < N / 2; ++m) {
        Complex e = std::exp(Complex(0, m * tq));
        val(0) += coef[0][m + N / 2] * e;
        val(1) += coef[1][m + N / 2] * e;
      }
      fine_density_[q] = val;
    }
  }

  SpinVector operator()(const Vec2& x) const {
    double dist2 = 1e300;
    for (const auto& fp : coarse_frames_) dist2 = std::min(dist2, (x - fp.x).squaredNorm());
    double near_thresh = 5.0 * l_ / coarse_n_;
    if (dist2 > near_thresh * near_thresh) return sum_over(coarse_frames_, coarse_density_, x);
    return sum_over(fine_frames_, fine_density_, x);
  }

 private:
  SpinVector sum_over(const std::vector<FramePoint>& frames,
                      const std::vector<SpinVector>& dens, const Vec2& x) const {
    SpinVector acc = SpinVector::Zero();
    double wq = l_ / frames.size();
    for (size_t q = 0; q < frames.size(); ++q)
      acc += wq * (green_phi(sp_, Vec2(x - frames[q].x)) * dens[q]);
    return acc;
  }

  SpectralParameter sp_;
  double l_;
  int coarse_n_, fine_n_;
  std::vector<FramePoint> coarse_frames_, fine_frames_;
  std::vector<SpinVector> coarse_density_, fine_density_;
};

// Compactly supported smooth source, sampled on a tensor Gauss-Legendre
// grid over its bounding square.
struct SourceSpec {
  std::function<SpinVector(const Vec2&)> f;
  Vec2 center = Vec2::Zero();
  double radius = 0.5;
  int n1d = 48;
};

namespace detail {

inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double step = p0 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[i] = -t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace detail

// Resolvent application by the Krein formula:
//   u = (D_0 - z)^{-1} f - Phi_z (I + B C_z)^{-1} B T[(D_0 - z)^{-1} f].
class KreinSolution {
 public:
  KreinSolution(const ShellDiscretization& disc, const SpectralParameter& sp,
                const Couplings& c, const SourceSpec& src, int fine = 8192,
                double sigma_floor = 1e-4)
      : sp_(sp) {
    // source quadrature
    std::vector<double> gx, gw;
    detail::gauss_legendre(src.n1d, gx, gw);
    for (int i = 0; i < src.n1d; ++i) {
      for (int j = 0; j < src.n1d; ++j) {
        Vec2 y = src.center + src.radius * Vec2(gx[i], gx[j]);
        SpinVector fv = src.f(y);
        if (fv.norm() == 0.0) continue;
        quad_pts_.push_back(y);
        quad_vals_.push_back(fv);
        quad_wts_.push_back(src.radius * src.radius * gw[i] * gw[j]);
      }
    }
    // boundary data of the free solution
    Eigen::VectorXcd g(2 * disc.N);
    for (int i = 0; i < disc.N; ++i) {
      SpinVector u0 = free_part(disc.frames[i].x);
      SpinMatrix B = coupling_matrix_B(c.at(disc.frames[i].s), disc.frames[i]);
      g.segment<2>(2 * i) = B * u0;
    }
    BSOperator bs = bs_operator(disc, sp, c);
    double smin = smallest_singular_value(bs.matrix);
    if (smin < sigma_floor)
      throw NearSingularOperatorError(
          "Birman-Schwinger operator is near singular: z is too close to an eigenvalue");
    Eigen::VectorXcd psi = Eigen::PartialPivLU<Eigen::MatrixXcd>(bs.matrix).solve(g);
    layer_.emplace(disc, sp, psi, fine);
  }

  SpinVector free_part(const Vec2& x) const {
    SpinVector acc = SpinVector::Zero();
    for (size_t q = 0; q < quad_pts_.size(); ++q) {
      Vec2 d = x - quad_pts_[q];
      if (d.norm() < 1e-12)
        throw NumericalError("evaluation point coincides with a source quadrature node");
      acc += quad_wts_[q] * (green_phi(sp_, d) * quad_vals_[q]);
    }
    return acc;
  }

  SpinVector operator()(const Vec2& x) const { return free_part(x) - (*layer_)(x); }

  const LayerPotential& layer() const { return *layer_; }

 private:
  SpectralParameter sp_;
  std::vector<Vec2> quad_pts_;
  std::vector<SpinVector> quad_vals_;
  std::vector<double> quad_wts_;
  std::optional<LayerPotential> layer_;
};

// One-sided boundary trace by Richardson extrapolation from offsets
// {4,2,1} * base along the normal; side = +1 approaches from the interior.
inline SpinVector one_sided_trace(const std::function<SpinVector(const Vec2&)>& u,
                                  const FramePoint& fp, int side, double base = 1e-3) {
  double sgn = (side > 0) ? -1.0 : 1.0;  // interior has negative normal offset
  double d1 = 4 * base, d2 = 2 * base, d3 = base;
  SpinVector u1 = u(fp.x + sgn * d1 * fp.n);
  SpinVector u2 = u(fp.x + sgn * d2 * fp.n);
  SpinVector u3 = u(fp.x + sgn * d3 * fp.n);
  // quadratic extrapolation to offset 0 through (d1,u1),(d2,u2),(d3,u3)
  return (8.0 * u3 - 6.0 * u2 + u1) / 3.0;
}

}  // namespace shellspec
