#pragma once

#include <complex>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace shellspec {

using Vec2 = Eigen::Vector2d;
using Complex = std::complex<double>;
using SpinMatrix = Eigen::Matrix2cd;
using SpinVector = Eigen::Vector2cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Domain-specific error types. Each maps to a named error condition of the
// library contract; the CLI translates them into exit codes.
struct OutsideTubeError : std::domain_error {
  using std::domain_error::domain_error;
};
struct InvalidNodeCountError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ConfiningCouplingsError : std::domain_error {
  using std::domain_error::domain_error;
};
struct CriticalCouplingsError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ExceptionalCouplingError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NotConfiningError : std::domain_error {
  using std::domain_error::domain_error;
};
struct DNotConstantError : std::domain_error {
  using std::domain_error::domain_error;
};
struct InvalidSpectralParameterError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NearSingularOperatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BesselDomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ProfileNotDifferentiableError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ConfigError : std::runtime_error {
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error("config key '" + key + "': " + what), key(key) {}
  std::string key;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Static-partition parallel map. Results must be written by index so the
// outcome is independent of the thread count.
inline void parallel_for(int n, int nthreads, const std::function<void(int)>& fn) {
  if (nthreads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  nthreads = std::min(nthreads, n);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (int t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (int i = t; i < n; i += nthreads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline double reduce_mod(double s, double period) {
  double r = std::fmod(s, period);
  if (r < 0) r += period;
  return r;
}

}  // namespace shellspec
