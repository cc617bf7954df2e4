#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shellspec/approximation.hpp"
#include "shellspec/config.hpp"
#include "shellspec/disk_oracle.hpp"
#include "shellspec/shell_operator.hpp"

namespace shellspec::cli {

inline int log_level() {
  const char* v = std::getenv("SHELLSPEC_LOG");
  if (!v) return 1;
  std::string s(v);
  if (s == "quiet") return 0;
  if (s == "debug") return 2;
  return 1;
}

inline void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[shellspec] " << msg << "\n";
}

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  int threads = 1;
  long seed = 0;  // reserved for randomized property tooling
};

namespace detail {

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("--out", "cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

inline Couplings reduced_couplings(const Config& cfg, double period) {
  Couplings c = cfg.make_couplings(period);
  bool omega_zero = true;
  for (int i = 0; i < 64; ++i)
    omega_zero = omega_zero && std::abs(c.omega(period * i / 64)) < 1e-14;
  if (omega_zero) {
    c.omega = CouplingFunction(0.0);
    return c;
  }
  auto reductions = gauge_reduce(c);
  const auto& g = reductions.front();
  std::ostringstream os;
  os << "gauge reduction: X = " << format_g15(g.X) << ", z = " << format_g15(g.z.real())
     << (g.z.imag() < 0 ? " - " : " + ") << format_g15(std::abs(g.z.imag())) << "i";
  log_info(os.str());
  return g.reduced;
}

inline std::vector<double> spectral_grid(const Config& cfg, double m) {
  double margin = cfg.get_double("zgrid.margin", 1e-3);
  double lo = cfg.get_double("zgrid.min", -std::abs(m) * (1.0 - margin));
  double hi = cfg.get_double("zgrid.max", std::abs(m) * (1.0 - margin));
  int count = cfg.get_int("zgrid.count", 41);
  if (count < 3) throw ConfigError("zgrid.count", "needs at least 3 points");
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);
  return grid;
}

inline PointCouplings constant_point_couplings(const Couplings& c) {
  for (const auto* f : {&c.eta, &c.tau, &c.lambda})
    if (!f->is_constant())
      throw ConfigError("couplings", "this subcommand requires constant couplings");
  return c.at(0.0);
}

}  // namespace detail

inline int classify_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  Curve curve = cfg.make_curve();
  Couplings c = cfg.make_couplings(curve.length());
  ClassificationReport rep = classify(c);
  std::cout << "d range: [" << format_g15(rep.d_min) << ", " << format_g15(rep.d_max) << "]"
            << (rep.d_constant ? " (constant)" : "") << "\n";
  std::cout << "criticality range: [" << format_g15(rep.crit_min) << ", "
            << format_g15(rep.crit_max) << "], min |c| = " << format_g15(rep.crit_abs_min)
            << "\n";
  std::string flags;
  if (rep.confining) flags += " confining";
  if (rep.critical) flags += " critical";
  if (rep.zigzag) flags += " zig-zag";
  if (flags.empty()) flags = " none";
  std::cout << "flags:" << flags << "\n";
  if (rep.theta0)
    std::cout << "quantum-dot angle theta(0) = " << format_g15(*rep.theta0) << "\n";
  nlohmann::json j{{"d_min", rep.d_min},
                   {"d_max", rep.d_max},
                   {"d_constant", rep.d_constant},
                   {"crit_min", rep.crit_min},
                   {"crit_max", rep.crit_max},
                   {"crit_abs_min", rep.crit_abs_min},
                   {"confining", rep.confining},
                   {"critical", rep.critical},
                   {"zigzag", rep.zigzag},
                   {"omega_zero", rep.omega_zero}};
  if (rep.theta0) j["theta0"] = *rep.theta0;
  if (!rep.omega_zero) {
    auto reductions = gauge_reduce(c);
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& g : reductions) {
      std::cout << "gauge root: X = " << format_g15(g.X) << ", z = " << format_g15(g.z.real())
                << (g.z.imag() < 0 ? " - " : " + ") << format_g15(std::abs(g.z.imag()))
                << "i\n";
      roots.push_back({{"X", g.X}, {"z_re", g.z.real()}, {"z_im", g.z.imag()}});
    }
    j["gauge_roots"] = roots;
  }
  if (!args.out_path.empty()) {
    detail::Output out(args.out_path);
    out.stream() << j.dump() << "\n";
  }
  return 0;
}

inline int spectrum_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  Curve curve = cfg.make_curve();
  double m = cfg.get_double("mass", 1.0);
  int N = cfg.get_int("N", 256);
  Couplings c = detail::reduced_couplings(cfg, curve.length());
  ShellDiscretization disc(curve, N);
  ScanOptions opts;
  opts.threads = args.threads;
  auto grid = detail::spectral_grid(cfg, m);
  auto evs = eigenvalue_scan(disc, c, m, grid, opts);
  detail::Output out(args.out_path);
  out.stream() << "z_refined,sigma_min,multiplicity_estimate,N,curve_kind\n";
  for (const auto& ev : evs)
    out.stream() << format_g15(ev.z) << "," << format_g15(ev.sigma_min) << ","
                 << ev.multiplicity << "," << N << "," << curve.kind() << "\n";
  return 0;
}

inline int oracle_compare_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  if (cfg.get_string("curve.kind", "circle") != "circle")
    throw ConfigError("curve.kind", "oracle-compare runs on the disk (circle) only");
  Curve curve = cfg.make_curve();
  double R = cfg.get_double("curve.radius", 1.0);
  double m = cfg.get_double("mass", 1.0);
  int N = cfg.get_int("N", 256);
  int nmax = cfg.get_int("channel.max", 40);
  Couplings c = detail::reduced_couplings(cfg, curve.length());
  PointCouplings pc = detail::constant_point_couplings(c);

  double margin = cfg.get_double("zgrid.margin", 1e-3);
  auto oracle = distinct_values(disk_gap_eigenvalues(R, m, pc, nmax, margin));
  ShellDiscretization disc(curve, N);
  ScanOptions opts;
  opts.threads = args.threads;
  auto evs = eigenvalue_scan(disc, c, m, detail::spectral_grid(cfg, m), opts);

  detail::Output out(args.out_path);
  out.stream() << "oracle_z,nystrom_z,abs_diff\n";
  size_t i = 0, j = 0;
  double pair_tol = cfg.get_double("pair_tolerance", 1e-4);
  while (i < oracle.size() || j < evs.size()) {
    if (i < oracle.size() && j < evs.size() && std::abs(oracle[i] - evs[j].z) < pair_tol) {
      out.stream() << format_g15(oracle[i]) << "," << format_g15(evs[j].z) << ","
                   << format_g15(std::abs(oracle[i] - evs[j].z)) << "\n";
      ++i;
      ++j;
    } else if (j >= evs.size() || (i < oracle.size() && oracle[i] < evs[j].z)) {
      out.stream() << format_g15(oracle[i]) << ",,\n";
      ++i;
    } else {
      out.stream() << "," << format_g15(evs[j].z) << ",\n";
      ++j;
    }
  }
  return 0;
}

inline int approx_converge_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  if (cfg.get_string("curve.kind", "circle") != "circle")
    throw ConfigError("curve.kind", "approx-converge runs on the disk (circle) only");
  double R = cfg.get_double("curve.radius", 1.0);
  double m = cfg.get_double("mass", 1.0);
  Couplings craw = cfg.make_couplings(2.0 * kPi * R);
  for (int i = 0; i < 64; ++i)
    if (std::abs(craw.omega(2.0 * kPi * R * i / 64)) > 1e-14)
      throw ConfigError("couplings.omega", "approx-converge requires omega = 0");
  PointCouplings pc = detail::constant_point_couplings(craw);
  Profile profile = Profile::by_name(cfg.get_string("profile", "box"));
  std::vector<double> eps_list =
      cfg.get_double_list("epsilons", {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4});
  int ch_min = cfg.get_int("channel.min", -2), ch_max = cfg.get_int("channel.max", 1);
  double margin = cfg.get_double("zgrid.margin", 1e-3);

  Couplings chat = renormalize_forward(Couplings(pc.eta, pc.tau, pc.lambda));
  PointCouplings pchat = chat.at(0.0);

  detail::Output out(args.out_path);
  out.stream() << "epsilon,channel,eigenvalue,oracle_limit,abs_err,profile\n";
  for (int n = ch_min; n <= ch_max; ++n) {
    auto oracle = channel_roots(DiskProblem{R, m, pchat, n}, margin, 4000);
    std::map<size_t, std::vector<std::pair<double, double>>> history;
    for (double eps : eps_list) {
      RadialShellProblem rp;
      rp.R = R;
      rp.m = m;
      rp.c = pc;
      rp.eps = eps;
      rp.profile = profile;
      rp.n = n;
      auto evs = radial_channel_eigenvalues(rp, margin, 800);
      for (double e : evs) {
        // pair with the nearest oracle root
        double best = std::numeric_limits<double>::quiet_NaN();
        size_t best_idx = 0;
        double bd = 1e300;
        for (size_t q = 0; q < oracle.size(); ++q) {
          if (std::abs(oracle[q] - e) < bd) {
            bd = std::abs(oracle[q] - e);
            best = oracle[q];
            best_idx = q;
          }
        }
        out.stream() << format_g15(eps) << "," << n << "," << format_g15(e) << ",";
        if (std::isnan(best))
          out.stream() << ",,";
        else {
          out.stream() << format_g15(best) << "," << format_g15(std::abs(e - best)) << ",";
          history[best_idx].push_back({eps, e});
        }
        out.stream() << profile.name << "\n";
      }
    }
    // Richardson extrapolation from the two smallest eps of each track
    for (auto& [idx, track] : history) {
      if (track.size() < 2) continue;
      std::sort(track.begin(), track.end());
      double e1 = track[1].second, eps1 = track[1].first;
      double e0 = track[0].second, eps0 = track[0].first;
      double extrap = (eps1 * e0 - eps0 * e1) / (eps1 - eps0);
      out.stream() << "0," << n << "," << format_g15(extrap) << ","
                   << format_g15(oracle[idx]) << ","
                   << format_g15(std::abs(extrap - oracle[idx])) << "," << profile.name
                   << "\n";
    }
  }
  return 0;
}

inline int zigzag_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  double R = cfg.get_double("curve.radius", 1.0);
  double m = cfg.get_double("mass", 1.0);
  int count = cfg.get_int("count", 5);
  auto levels = disk_dirichlet_levels(R, count);
  detail::Output out(args.out_path);
  out.stream() << "embedded_z,dirichlet_lambda,multiplicity,bessel_order,zero_index\n";
  int have = 0;
  for (const auto& lv : levels) {
    if (have >= count) break;
    out.stream() << format_g15(std::sqrt(m * m + lv.lambda)) << "," << format_g15(lv.lambda)
                 << "," << lv.multiplicity << "," << lv.n << "," << lv.k << "\n";
    have += lv.multiplicity;
  }
  return 0;
}

inline int fields_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  Curve curve = cfg.make_curve();
  double lambda = cfg.get_double("couplings.lambda", 1.0);
  Profile profile = Profile::by_name(cfg.get_string("profile", "raised_cosine"));
  std::vector<double> eps_list = cfg.get_double_list("epsilons", {1e-1, 3e-2, 1e-2, 3e-3});
  auto phi = [](const Vec2& x) { return std::exp(-x.squaredNorm()); };
  auto grad_phi = [](const Vec2& x) { return Vec2(-2.0 * std::exp(-x.squaredNorm()) * x); };
  auto table = field_checks(curve, lambda, profile, eps_list, phi, grad_phi);
  detail::Output out(args.out_path);
  out.stream() << "epsilon,pairing_A_err,order_A,pairing_B_err,order_B,curl_err\n";
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out.stream() << format_g15(row.eps) << "," << format_g15(row.pairing_A_err) << ",";
    if (i > 0) {
      const auto& prev = table.rows[i - 1];
      out.stream() << format_g15(std::log(prev.pairing_A_err / row.pairing_A_err) /
                                 std::log(prev.eps / row.eps));
    }
    out.stream() << "," << format_g15(row.pairing_B_err) << ",";
    if (i > 0) {
      const auto& prev = table.rows[i - 1];
      out.stream() << format_g15(std::log(prev.pairing_B_err / row.pairing_B_err) /
                                 std::log(prev.eps / row.eps));
    }
    out.stream() << ",";
    if (row.curl_err) out.stream() << format_g15(*row.curl_err);
    out.stream() << "\n";
  }
  log_info("observed orders: A " + format_g15(table.order_A) + ", B " +
           format_g15(table.order_B));
  return 0;
}

inline int resolvent_check_cmd(const CommonArgs& args) {
  Config cfg = Config::from_file(args.config_path);
  Curve curve = cfg.make_curve();
  double m = cfg.get_double("mass", 1.0);
  int N = cfg.get_int("N", 256);
  Complex z(cfg.get_double("z.re", 0.3), cfg.get_double("z.im", 0.1));
  Couplings c = detail::reduced_couplings(cfg, curve.length());
  ShellDiscretization disc(curve, N);
  SpectralParameter sp(z, m);

  SourceSpec src;
  src.center = Vec2(cfg.get_double("source.x", 0.0), cfg.get_double("source.y", 0.0));
  src.radius = cfg.get_double("source.radius", 0.35);
  src.n1d = cfg.get_int("source.n1d", 48);
  double r0 = src.radius;
  src.f = [r0, center = src.center](const Vec2& x) -> SpinVector {
    double q = (x - center).squaredNorm() / (r0 * r0);
    if (q >= 1.0) return SpinVector::Zero();
    double bump = std::exp(-1.0 / (1.0 - q));
    return SpinVector(Complex(bump, 0), Complex(0.6 * bump, -0.2 * bump));
  };

  KreinSolution u(disc, sp, c, src, cfg.get_int("fine", 8192));

  // PDE residual at off-curve, off-support sample points
  double fd = 1e-4;
  double pde_max = 0.0, u_scale = 0.0;
  double beta = curve.max_tube_halfwidth();
  for (int k = 0; k < 6; ++k) {
    double s = curve.length() * k / 6.0;
    FramePoint fp = curve.frame_at(s);
    for (double off : {0.8 * beta, -0.8 * beta}) {
      Vec2 x = fp.x + off * fp.n;
      if ((x - src.center).norm() < src.radius + 5 * fd) continue;
      SpinVector ux = u(x);
      SpinVector dx1 = (u(x + Vec2(fd, 0)) - u(x - Vec2(fd, 0))) / (2 * fd);
      SpinVector dx2 = (u(x + Vec2(0, fd)) - u(x - Vec2(0, fd))) / (2 * fd);
      SpinVector resid = Complex(0, -1) * (sigma1() * dx1 + sigma2() * dx2) +
                         m * (sigma3() * ux) - z * ux;
      pde_max = std::max(pde_max, resid.norm());
      u_scale = std::max(u_scale, ux.norm());
    }
  }

  // transmission condition across the shell
  double trans_max = 0.0;
  auto eval = [&u](const Vec2& x) { return u(x); };
  for (int k = 0; k < 8; ++k) {
    double s = curve.length() * (k + 0.5) / 8.0;
    FramePoint fp = curve.frame_at(s);
    SpinVector tp = one_sided_trace(eval, fp, +1);
    SpinVector tm = one_sided_trace(eval, fp, -1);
    SpinMatrix R = transmission_matrix_R(c.at(s), fp);
    trans_max = std::max(trans_max, (tp - R * tm).norm());
  }

  double smin = smallest_singular_value(bs_operator(disc, sp, c).matrix);
  detail::Output out(args.out_path);
  out.stream() << "check,value\n";
  out.stream() << "sigma_min," << format_g15(smin) << "\n";
  out.stream() << "pde_residual_max," << format_g15(pde_max) << "\n";
  out.stream() << "u_scale_max," << format_g15(u_scale) << "\n";
  out.stream() << "transmission_mismatch_max," << format_g15(trans_max) << "\n";
  return 0;
}

inline int run_cli(std::vector<std::string> args) {
  CLI::App app{"spectra, classifications, and regular approximations of "
               "two-dimensional Dirac shell interactions"};
  app.require_subcommand(1);
  CommonArgs common;

  struct Sub {
    const char* name;
    const char* desc;
    int (*fn)(const CommonArgs&);
  };
  const Sub subs[] = {
      {"classify", "classify the shell couplings and report gauge reduction", classify_cmd},
      {"spectrum", "scan the spectral gap for shell eigenvalues", spectrum_cmd},
      {"oracle-compare", "compare Nystrom eigenvalues against the disk oracle",
       oracle_compare_cmd},
      {"approx-converge", "regularized-potential eigenvalue convergence study",
       approx_converge_cmd},
      {"zigzag", "embedded spectrum of the critical purely magnetic shell", zigzag_cmd},
      {"fields", "distributional convergence of the mollified magnetic field", fields_cmd},
      {"resolvent-check", "Krein resolvent residual diagnostics", resolvent_check_cmd},
  };
  std::map<std::string, int (*)(const CommonArgs&)> dispatch;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.desc);
    cmd->add_option("--config", common.config_path, "run configuration file")->required();
    cmd->add_option("--out", common.out_path, "output CSV path (default: stdout)");
    cmd->add_option("--threads", common.threads, "worker threads");
    cmd->add_option("--seed", common.seed, "seed for randomized property suites");
    dispatch[s.name] = s.fn;
  }

  std::vector<std::string> rargs(args.rbegin(), args.rend());
  try {
    app.parse(rargs);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    for (const auto& [name, fn] : dispatch)
      if (app.got_subcommand(name)) return fn(common);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const CriticalCouplingsError& e) {
    std::cerr << "critical couplings: " << e.what() << "\n";
    return 2;
  } catch (const ConfiningCouplingsError& e) {
    std::cerr << "confining couplings: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace shellspec::cli
