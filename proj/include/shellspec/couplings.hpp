#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "shellspec/common.hpp"
#include "shellspec/spin.hpp"

namespace shellspec {

// One shell coupling: either a real constant or a smooth periodic function
// of arc length.
class CouplingFunction {
 public:
  CouplingFunction() = default;
  CouplingFunction(double c) : constant_(true), value_(c) {}
  static CouplingFunction function(std::function<double(double)> f) {
    CouplingFunction cf;
    cf.constant_ = false;
    cf.fn_ = std::move(f);
    return cf;
  }
  double operator()(double s) const { return constant_ ? value_ : fn_(s); }
  bool is_constant() const { return constant_; }
  double constant_value() const {
    if (!constant_) throw std::logic_error("coupling is not constant");
    return value_;
  }

 private:
  bool constant_ = true;
  double value_ = 0.0;
  std::function<double(double)> fn_;
};

// The quadruple (eta, tau, lambda, omega) on a curve of length `period`.
struct Couplings {
  CouplingFunction eta, tau, lambda, omega;
  double period = 2.0 * kPi;

  Couplings() = default;
  Couplings(double e, double t, double l, double w = 0.0, double per = 2.0 * kPi)
      : eta(e), tau(t), lambda(l), omega(w), period(per) {}

  PointCouplings at(double s) const { return {eta(s), tau(s), lambda(s), omega(s)}; }
  double d(double s) const {
    double e = eta(s), t = tau(s), l = lambda(s);
    return e * e - t * t - l * l;
  }
  double criticality(double s) const {
    double q = 0.25 * d(s) - 1.0;
    double l = lambda(s);
    return q * q - l * l;
  }
  bool all_constant() const {
    return eta.is_constant() && tau.is_constant() && lambda.is_constant() &&
           omega.is_constant();
  }
};

struct ClassificationReport {
  double d_min = 0, d_max = 0;
  double crit_min = 0, crit_max = 0;  // range of the criticality functional
  double crit_abs_min = 0;            // min |criticality|
  bool confining = false;             // d == -4 everywhere
  bool critical = false;              // criticality vanishes somewhere
  bool zigzag = false;                // (eta,tau,lambda) == (0,0,+-2)
  bool d_constant = false;
  bool omega_zero = false;
  std::optional<double> theta0;  // quantum-dot angle at s=0 (confining, eta==0)
  std::function<double(double)> theta;
};

namespace detail {
inline constexpr int kClassifySamples = 1024;
inline constexpr double kConstTol = 1e-10;
inline constexpr double kCriticalTol = 1e-8;
// shared exceptional-set tolerance on sqrt(d)/2 vs (k+1/2)pi
inline constexpr double kExceptionalTol = 1e-6;
}  // namespace detail

inline ClassificationReport classify(const Couplings& c) {
  ClassificationReport r;
  const int S = detail::kClassifySamples;
  double dmin = 1e300, dmax = -1e300, cmin = 1e300, cmax = -1e300, cabs = 1e300;
  bool eta0 = true, tau0 = true, lam_p2 = true, lam_m2 = true, omg0 = true;
  for (int i = 0; i < S; ++i) {
    double s = c.period * i / S;
    double dv = c.d(s), cv = c.criticality(s);
    dmin = std::min(dmin, dv);
    dmax = std::max(dmax, dv);
    cmin = std::min(cmin, cv);
    cmax = std::max(cmax, cv);
    cabs = std::min(cabs, std::abs(cv));
    eta0 = eta0 && std::abs(c.eta(s)) < detail::kConstTol;
    tau0 = tau0 && std::abs(c.tau(s)) < detail::kConstTol;
    lam_p2 = lam_p2 && std::abs(c.lambda(s) - 2.0) < detail::kConstTol;
    lam_m2 = lam_m2 && std::abs(c.lambda(s) + 2.0) < detail::kConstTol;
    omg0 = omg0 && std::abs(c.omega(s)) < detail::kConstTol;
  }
  r.d_min = dmin;
  r.d_max = dmax;
  r.crit_min = cmin;
  r.crit_max = cmax;
  r.crit_abs_min = cabs;
  r.d_constant = (dmax - dmin) < detail::kConstTol;
  r.confining = std::abs(dmin + 4.0) < detail::kConstTol && std::abs(dmax + 4.0) < detail::kConstTol;
  r.critical = cabs < detail::kCriticalTol || (cmin < 0 && cmax > 0);
  r.zigzag = eta0 && tau0 && (lam_p2 || lam_m2);
  r.omega_zero = omg0;
  if (r.confining && eta0) {
    Couplings cc = c;
    r.theta = [cc](double s) { return std::atan2(-0.5 * cc.lambda(s), 0.5 * cc.tau(s)); };
    r.theta0 = r.theta(0.0);
  }
  return r;
}

// One solution of the gauge-elimination problem for omega: X solves
// d X^2 - 4 + (4 + omega^2 - d) X = 0 and z = (d X^2 + 4)/(X(4 + d - omega^2 + 4 i omega))
// has |z| = 1; the reduced couplings are (X eta, X tau, X lambda, 0).
struct GaugeReduction {
  double X = 1.0;
  Complex z = 1.0;
  Couplings reduced;
};

inline std::vector<GaugeReduction> gauge_reduce(const Couplings& c) {
  ClassificationReport rep = classify(c);
  if (!rep.d_constant)
    throw DNotConstantError("gauge reduction requires d constant on the curve");
  if (!c.omega.is_constant())
    throw DNotConstantError("gauge reduction requires omega constant on the curve");
  double d = 0.5 * (rep.d_min + rep.d_max);
  double w = c.omega(0.0);

  std::vector<double> roots;
  if (std::abs(d) < 1e-12) {
    roots.push_back(4.0 / (4.0 + w * w));
  } else if (std::abs(d + 4.0) < 1e-12 && std::abs(w) < 1e-12) {
    roots.push_back(1.0);  // double root
  } else {
    double disc = (d - w * w - 4.0) * (d - w * w - 4.0) + 16.0 * d;
    double sq = std::sqrt(std::max(disc, 0.0));
    roots.push_back(((d - w * w - 4.0) + sq) / (2.0 * d));
    roots.push_back(((d - w * w - 4.0) - sq) / (2.0 * d));
  }

  std::vector<GaugeReduction> out;
  for (double X : roots) {
    GaugeReduction g;
    g.X = X;
    Complex den = X * Complex(4.0 + d - w * w, 4.0 * w);
    if (std::abs(den) < 1e-14)
      g.z = 1.0;  // (d, omega) = (-4, 0): the identity transform
    else
      g.z = Complex(d * X * X + 4.0, 0.0) / den;
    Couplings red = c;
    auto scale = [X](const CouplingFunction& f) {
      if (f.is_constant()) return CouplingFunction(X * f.constant_value());
      return CouplingFunction::function([X, f](double s) { return X * f(s); });
    };
    red.eta = scale(c.eta);
    red.tau = scale(c.tau);
    red.lambda = scale(c.lambda);
    red.omega = CouplingFunction(0.0);
    g.reduced = red;
    out.push_back(std::move(g));
  }
  return out;
}

// (eta,tau,lambda) -> (-4/d)(eta,tau,lambda); point spectra coincide.
inline Couplings isospectral_partner(const Couplings& c) {
  const int S = detail::kClassifySamples;
  for (int i = 0; i < S; ++i) {
    double s = c.period * i / S;
    double dv = c.d(s);
    if (std::abs(dv) < detail::kConstTol || std::abs(dv + 4.0) < detail::kConstTol)
      throw ExceptionalCouplingError("isospectral transform undefined where d is 0 or -4");
  }
  Couplings out = c;
  auto mapf = [c](const CouplingFunction& f) {
    if (c.all_constant() && f.is_constant()) {
      double d = c.d(0.0);
      return CouplingFunction(-4.0 / d * f.constant_value());
    }
    Couplings cc = c;
    return CouplingFunction::function([cc, f](double s) { return -4.0 / cc.d(s) * f(s); });
  };
  out.eta = mapf(c.eta);
  out.tau = mapf(c.tau);
  out.lambda = mapf(c.lambda);
  out.omega = CouplingFunction(0.0);
  return out;
}

// (eta,tau,lambda) -> (-eta,tau,-lambda); spectra mirror z <-> -z.
inline Couplings charge_conjugate(const Couplings& c) {
  auto neg = [](const CouplingFunction& f) {
    if (f.is_constant()) return CouplingFunction(-f.constant_value());
    return CouplingFunction::function([f](double s) { return -f(s); });
  };
  Couplings out = c;
  out.eta = neg(c.eta);
  out.lambda = neg(c.lambda);
  out.omega = CouplingFunction(0.0);
  return out;
}

namespace detail {

// f(d) = tan(sqrt(d)/2)/(sqrt(d)/2), continued as tanh(sqrt(-d)/2)/(sqrt(-d)/2)
// for d < 0; analytic in d away from the poles d = (2k+1)^2 pi^2.
inline double renorm_factor_forward(double d) {
  if (std::abs(d) < 1e-8)
    return 1.0 + d / 12.0 + d * d / 120.0 + 17.0 * d * d * d / 20160.0;
  if (d > 0) {
    double x = 0.5 * std::sqrt(d);
    return std::tan(x) / x;
  }
  double y = 0.5 * std::sqrt(-d);
  return std::tanh(y) / y;
}

inline void check_forward_admissible(double d, bool constant) {
  if (d > 0) {
    double x = 0.5 * std::sqrt(d);
    double frac = x / kPi;  // poles at half-integers, zeros at integers
    double to_half = std::abs(frac - (std::floor(frac) + 0.5));
    if (to_half * kPi < kExceptionalTol)
      throw ExceptionalCouplingError(
          "d lies on the exceptional set (2k+1)^2 pi^2: no shell operator matches exp");
    if (!constant) {
      double to_int = std::abs(frac - std::round(frac));
      if (to_int * kPi < kExceptionalTol && std::round(frac) != 0.0)
        throw ExceptionalCouplingError(
            "non-constant couplings require d away from k^2 pi^2");
    }
  }
  if (!constant && std::abs(d) < kExceptionalTol)
    throw ExceptionalCouplingError("non-constant couplings require d away from 0");
}

}  // namespace detail

// The renormalization map of the squeezed-potential limit:
//   (eta,tau,lambda) -> f(d) (eta,tau,lambda),
//   f = tan(sqrt(d)/2)/(sqrt(d)/2) for d>0, 1 at d=0, tanh-version for d<0.
inline Couplings renormalize_forward(const Couplings& c) {
  bool constant = c.eta.is_constant() && c.tau.is_constant() && c.lambda.is_constant();
  const int S = detail::kClassifySamples;
  for (int i = 0; i < (constant ? 1 : S); ++i) {
    double s = c.period * i / S;
    detail::check_forward_admissible(c.d(s), constant);
  }
  Couplings out = c;
  auto mapf = [c, constant](const CouplingFunction& f) {
    if (constant && f.is_constant()) {
      return CouplingFunction(detail::renorm_factor_forward(c.d(0.0)) * f.constant_value());
    }
    Couplings cc = c;
    return CouplingFunction::function(
        [cc, f](double s) { return detail::renorm_factor_forward(cc.d(s)) * f(s); });
  };
  out.eta = mapf(c.eta);
  out.tau = mapf(c.tau);
  out.lambda = mapf(c.lambda);
  out.omega = CouplingFunction(0.0);
  return out;
}

// Branch-k preimage of the forward map; defined for dhat > -4 everywhere.
// For k != 0 the preimage exists only when dhat > 0 everywhere, except the
// degenerate case chat == 0 where any constants with d = (2k pi)^2 work and
// (2k pi, 0, 0) is returned as the canonical pick.
inline Couplings renormalize_backward(const Couplings& chat, int k) {
  const int S = detail::kClassifySamples;
  double dmin = 1e300, dmax = -1e300, max_abs = 0.0;
  for (int i = 0; i < S; ++i) {
    double s = chat.period * i / S;
    double dv = chat.d(s);
    dmin = std::min(dmin, dv);
    dmax = std::max(dmax, dv);
    max_abs = std::max({max_abs, std::abs(chat.eta(s)), std::abs(chat.tau(s)),
                        std::abs(chat.lambda(s))});
  }
  if (dmin <= -4.0 + 1e-12)
    throw ExceptionalCouplingError("backward renormalization requires dhat > -4 everywhere");
  if (k != 0) {
    if (max_abs < detail::kConstTol) {
      Couplings out = chat;
      out.eta = CouplingFunction(2.0 * k * kPi);
      out.tau = CouplingFunction(0.0);
      out.lambda = CouplingFunction(0.0);
      out.omega = CouplingFunction(0.0);
      return out;
    }
    if (dmin <= 1e-12)
      throw ExceptionalCouplingError("branch k != 0 requires dhat > 0 (or chat == 0)");
  }
  auto factor = [k](double dh) {
    if (std::abs(dh) < 1e-8) return 1.0 - dh / 12.0 + dh * dh / 80.0;  // k = 0 only here
    if (dh > 0) {
      double x = 0.5 * std::sqrt(dh);
      return (std::atan(x) + k * kPi) / x;
    }
    double y = 0.5 * std::sqrt(-dh);
    return std::atanh(y) / y;
  };
  Couplings out = chat;
  auto mapf = [chat, factor](const CouplingFunction& f) {
    if (chat.all_constant() && f.is_constant())
      return CouplingFunction(factor(chat.d(0.0)) * f.constant_value());
    Couplings cc = chat;
    return CouplingFunction::function([cc, f, factor](double s) { return factor(cc.d(s)) * f(s); });
  };
  out.eta = mapf(chat.eta);
  out.tau = mapf(chat.tau);
  out.lambda = mapf(chat.lambda);
  out.omega = CouplingFunction(0.0);
  return out;
}

// Description of the decoupled one-sided boundary conditions when d == -4.
struct ConfinementSplit {
  enum class Kind { ZigZag, InfiniteMass, QuantumDot, General };
  Kind kind = Kind::General;
  int sign = 0;                   // sign of lambda (zig-zag) or tau (infinite mass)
  std::optional<double> theta0;   // quantum-dot angle at s = 0 when eta == 0
  std::function<double(double)> theta;
  // [ side * i sigma.n + (1/2)(eta I + tau sigma_3 + lambda sigma.t) ] T f = 0
  std::function<SpinMatrix(const FramePoint&, int side)> bc_matrix;
};

inline ConfinementSplit confinement_split(const Couplings& c) {
  ClassificationReport rep = classify(c);
  if (!rep.confining) throw NotConfiningError("couplings are not confining (d != -4)");
  ConfinementSplit out;
  bool eta0 = true, tau0 = true, lam0 = true;
  const int S = detail::kClassifySamples;
  for (int i = 0; i < S; ++i) {
    double s = c.period * i / S;
    eta0 = eta0 && std::abs(c.eta(s)) < detail::kConstTol;
    tau0 = tau0 && std::abs(c.tau(s)) < detail::kConstTol;
    lam0 = lam0 && std::abs(c.lambda(s)) < detail::kConstTol;
  }
  if (rep.zigzag) {
    out.kind = ConfinementSplit::Kind::ZigZag;
    out.sign = c.lambda(0.0) > 0 ? 1 : -1;
  } else if (eta0 && lam0) {
    out.kind = ConfinementSplit::Kind::InfiniteMass;
    out.sign = c.tau(0.0) > 0 ? 1 : -1;
  } else if (eta0) {
    out.kind = ConfinementSplit::Kind::QuantumDot;
  } else {
    out.kind = ConfinementSplit::Kind::General;
  }
  if (eta0) {
    Couplings cc = c;
    out.theta = [cc](double s) { return std::atan2(-0.5 * cc.lambda(s), 0.5 * cc.tau(s)); };
    out.theta0 = out.theta(0.0);
  }
  Couplings cc = c;
  out.bc_matrix = [cc](const FramePoint& fp, int side) {
    PointCouplings pc = cc.at(fp.s);
    return SpinMatrix(Complex(0, side) * sigma_dot(fp.n) + 0.5 * coupling_matrix_B(pc, fp));
  };
  return out;
}

}  // namespace shellspec
