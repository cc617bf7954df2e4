#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>

#include "shellspec/common.hpp"

namespace shellspec {

// Frame of a positively oriented closed curve at arc length s.
// Conventions: t = gamma'(s), n = (t2, -t1) points out of the enclosed
// region, and the Frenet equations read t' = -kappa n, n' = kappa t, so
// kappa > 0 on convex arcs.
struct FramePoint {
  double s = 0.0;
  Vec2 x = Vec2::Zero();
  Vec2 t = Vec2::Zero();
  Vec2 n = Vec2::Zero();
  double kappa = 0.0;
};

struct TubularPoint {
  double s = 0.0;
  double p = 0.0;       // signed normal offset
  double weight = 0.0;  // 1 + p*kappa(s), the chart Jacobian
};

namespace detail {

// Underlying 2pi-periodic parametrization with analytic derivatives.
struct ParametricCurve {
  std::function<Vec2(double)> gamma;
  std::function<Vec2(double)> dgamma;
  std::function<Vec2(double)> ddgamma;
};

}  // namespace detail

// Smooth closed planar curve, reparametrized to arc length at construction.
// All evaluators are immutable and safe to share across threads.
class Curve {
 public:
  static Curve circle(double radius) {
    if (radius <= 0) throw std::invalid_argument("circle radius must be positive");
    detail::ParametricCurve pc;
    pc.gamma = [radius](double u) { return Vec2(radius * std::cos(u), radius * std::sin(u)); };
    pc.dgamma = [radius](double u) { return Vec2(-radius * std::sin(u), radius * std::cos(u)); };
    pc.ddgamma = [radius](double u) { return Vec2(-radius * std::cos(u), -radius * std::sin(u)); };
    return Curve(std::move(pc), "circle");
  }

  static Curve ellipse(double a, double b) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("ellipse semi-axes must be positive");
    detail::ParametricCurve pc;
    pc.gamma = [a, b](double u) { return Vec2(a * std::cos(u), b * std::sin(u)); };
    pc.dgamma = [a, b](double u) { return Vec2(-a * std::sin(u), b * std::cos(u)); };
    pc.ddgamma = [a, b](double u) { return Vec2(-a * std::cos(u), -b * std::sin(u)); };
    return Curve(std::move(pc), "ellipse");
  }

  // Star-shaped curve r(theta) = R(1 + amplitude*cos(lobes*theta)).
  static Curve star(double radius, double amplitude, int lobes) {
    if (radius <= 0) throw std::invalid_argument("star radius must be positive");
    if (std::abs(amplitude) >= 1.0)
      throw std::invalid_argument("star amplitude must satisfy |a| < 1");
    if (lobes < 1) throw std::invalid_argument("star lobes must be >= 1");
    double R = radius, a = amplitude;
    int k = lobes;
    auto r = [=](double u) { return R * (1.0 + a * std::cos(k * u)); };
    auto dr = [=](double u) { return -R * a * k * std::sin(k * u); };
    auto ddr = [=](double u) { return -R * a * k * k * std::cos(k * u); };
    detail::ParametricCurve pc;
    pc.gamma = [=](double u) {
      return Vec2(r(u) * std::cos(u), r(u) * std::sin(u));
    };
    pc.dgamma = [=](double u) {
      Vec2 e(std::cos(u), std::sin(u)), f(-std::sin(u), std::cos(u));
      return Vec2(dr(u) * e + r(u) * f);
    };
    pc.ddgamma = [=](double u) {
      Vec2 e(std::cos(u), std::sin(u)), f(-std::sin(u), std::cos(u));
      return Vec2((ddr(u) - r(u)) * e + 2.0 * dr(u) * f);
    };
    return Curve(std::move(pc), "star");
  }

  // User-supplied analytic parametrization over [0, 2pi), positively oriented.
  static Curve parametric(std::function<Vec2(double)> gamma,
                          std::function<Vec2(double)> dgamma,
                          std::function<Vec2(double)> ddgamma) {
    detail::ParametricCurve pc{std::move(gamma), std::move(dgamma), std::move(ddgamma)};
    return Curve(std::move(pc), "custom");
  }

  double length() const { return length_; }
  const std::string& kind() const { return kind_; }

  FramePoint frame_at(double s) const {
    double u = parameter_of_arclength(s);
    FramePoint fp;
    fp.s = reduce_mod(s, length_);
    Vec2 d1 = pc_.dgamma(u), d2 = pc_.ddgamma(u);
    double speed = d1.norm();
    fp.x = pc_.gamma(u);
    fp.t = d1 / speed;
    fp.n = Vec2(fp.t.y(), -fp.t.x());
    fp.kappa = (d1.x() * d2.y() - d1.y() * d2.x()) / (speed * speed * speed);
    return fp;
  }

  Vec2 position(double s) const { return pc_.gamma(parameter_of_arclength(s)); }

  Vec2 tubular_to_cartesian(double s, double p) const {
    if (std::abs(p) >= max_tube_halfwidth())
      throw OutsideTubeError("normal offset exceeds the tube half-width");
    FramePoint fp = frame_at(s);
    return fp.x + p * fp.n;
  }

  // Inverts the tubular chart by Newton iteration on the orthogonality
  // condition (x - gamma(s)) . t(s) = 0, seeded from the nearest presample.
  TubularPoint cartesian_to_tubular(const Vec2& x) const {
    auto tp = try_cartesian_to_tubular(x);
    if (!tp) throw OutsideTubeError("point lies outside the admissible tube");
    return *tp;
  }

  // Same inversion, nullopt instead of a throw for out-of-tube points.
  std::optional<TubularPoint> try_cartesian_to_tubular(const Vec2& x) const {
    double beta = max_tube_halfwidth();
    int best = 0;
    double best_d2 = (x - samples_[0].x).squaredNorm();
    for (int i = 1; i < static_cast<int>(samples_.size()); ++i) {
      double d2 = (x - samples_[i].x).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    double s = samples_[best].s;
    FramePoint fp = samples_[best];
    for (int it = 0; it < 50; ++it) {
      Vec2 dx = x - fp.x;
      double f = dx.dot(fp.t);
      double fprime = -1.0 - fp.kappa * dx.dot(fp.n);
      if (std::abs(fprime) < 1e-14) break;
      double step = f / fprime;
      s -= step;
      fp = frame_at(s);
      if (std::abs(step) < 1e-13 * length_) break;
    }
    TubularPoint tp;
    tp.s = reduce_mod(s, length_);
    tp.p = (x - fp.x).dot(fp.n);
    tp.weight = 1.0 + tp.p * fp.kappa;
    double resid = std::abs((x - fp.x).dot(fp.t));
    if (std::abs(tp.p) >= beta || resid > 1e-8 * std::max(1.0, x.norm()))
      return std::nullopt;
    return tp;
  }

  // Largest allowed half-width of the tubular chart. Bounded by a 0.9
  // safety factor below 1/max|kappa| and by half the smallest chord between
  // arc-distant sample pairs (guards thin necks of non-convex curves).
  double max_tube_halfwidth() const { return beta0_; }

  double max_abs_curvature() const { return kappa_max_; }

  // N frames at s_j = j*l/N, each carrying trapezoid weight l/N.
  std::vector<FramePoint> equispaced_nodes(int N) const {
    if (N < 4 || N % 2 != 0)
      throw InvalidNodeCountError("node count must be even and at least 4");
    std::vector<FramePoint> nodes(N);
    for (int j = 0; j < N; ++j) nodes[j] = frame_at(j * length_ / N);
    return nodes;
  }

 private:
  Curve(detail::ParametricCurve pc, std::string kind)
      : pc_(std::move(pc)), kind_(std::move(kind)) {
    build_arclength_table();
    build_samples();
  }

  // Cumulative arc length on a 4096-interval grid; each increment by
  // 8-point Gauss-Legendre, then theta(s) recovered by lookup + Newton.
  void build_arclength_table() {
    const int M = 4096;
    u_grid_.resize(M + 1);
    s_grid_.resize(M + 1);
    s_grid_[0] = 0.0;
    for (int i = 0; i <= M; ++i) u_grid_[i] = 2.0 * kPi * i / M;
    for (int i = 0; i < M; ++i)
      s_grid_[i + 1] = s_grid_[i] + gauss8_speed(u_grid_[i], u_grid_[i + 1]);
    length_ = s_grid_[M];
    // orientation check via the shoelace integral (1/2) \oint (x dy - y dx)
    double area = 0.0;
    for (int i = 0; i < M; ++i) {
      double u = u_grid_[i];
      Vec2 g = pc_.gamma(u), d = pc_.dgamma(u);
      area += 0.5 * (g.x() * d.y() - g.y() * d.x()) * (2.0 * kPi / M);
    }
    if (area <= 0)
      throw std::invalid_argument("curve must be positively oriented (counter-clockwise)");
  }

  void build_samples() {
    const int K = 2048;
    samples_.resize(K);
    kappa_max_ = 0.0;
    for (int i = 0; i < K; ++i) {
      samples_[i] = frame_at(i * length_ / K);
      kappa_max_ = std::max(kappa_max_, std::abs(samples_[i].kappa));
    }
    double beta = 0.9 / kappa_max_;
    // neck guard: pairs far apart along the curve but close in the plane
    for (int i = 0; i < K; i += 8) {
      for (int j = i + 8; j < K; j += 8) {
        double arc = std::min(std::abs(samples_[i].s - samples_[j].s),
                              length_ - std::abs(samples_[i].s - samples_[j].s));
        double chord = (samples_[i].x - samples_[j].x).norm();
        if (arc > 4.0 * chord) beta = std::min(beta, 0.5 * chord);
      }
    }
    beta0_ = beta;
  }

  double gauss8_speed(double ua, double ub) const {
    static const double xg[8] = {-0.9602898564975362, -0.7966664774136267,
                                 -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,
                                 0.7966664774136267,  0.9602898564975362};
    static const double wg[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    double c = 0.5 * (ua + ub), hl = 0.5 * (ub - ua), acc = 0.0;
    for (int q = 0; q < 8; ++q) acc += wg[q] * pc_.dgamma(c + hl * xg[q]).norm();
    return acc * hl;
  }

  double arclength_of_parameter(double u) const {
    // locate the grid cell and integrate the remainder
    int M = static_cast<int>(u_grid_.size()) - 1;
    double ur = reduce_mod(u, 2.0 * kPi);
    int i = std::min(static_cast<int>(ur / (2.0 * kPi) * M), M - 1);
    return s_grid_[i] + gauss8_speed(u_grid_[i], ur);
  }

  double parameter_of_arclength(double s) const {
    double sr = reduce_mod(s, length_);
    int M = static_cast<int>(s_grid_.size()) - 1;
    auto it = std::upper_bound(s_grid_.begin(), s_grid_.end(), sr);
    int i = std::clamp(static_cast<int>(it - s_grid_.begin()) - 1, 0, M - 1);
    double u = u_grid_[i] + (u_grid_[i + 1] - u_grid_[i]) * (sr - s_grid_[i]) /
                                (s_grid_[i + 1] - s_grid_[i]);
    for (int k = 0; k < 30; ++k) {
      double f = arclength_of_parameter(u) - sr;
      double fp = pc_.dgamma(u).norm();
      double step = f / fp;
      u -= step;
      if (std::abs(step) < 1e-15 * 2.0 * kPi) break;
    }
    return u;
  }

  detail::ParametricCurve pc_;
  std::string kind_;
  double length_ = 0.0;
  double beta0_ = 0.0;
  double kappa_max_ = 0.0;
  std::vector<double> u_grid_, s_grid_;
  std::vector<FramePoint> samples_;
};

}  // namespace shellspec
