#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace certnn {

/// Deterministic random source. The engine state evolution is pinned by the
/// C++ standard (mt19937_64) and the mappings to doubles are written out by
/// hand, so a given seed yields the same sequence on every platform and
/// standard-library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller. Always two engine draws per call.
  double gaussian() {
    double u1 = 1.0 - uniform();  // in (0, 1], keeps the log finite
    double u2 = uniform();
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Eigen::VectorXd gaussian_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  /// Uniform point in the closed unit ball of dimension n: gaussian
  /// direction, radius U^(1/n).
  Eigen::VectorXd unit_ball(int n) {
    Eigen::VectorXd g = gaussian_vector(n);
    double norm = g.norm();
    if (norm < 1e-300) return Eigen::VectorXd::Zero(n);
    double r = std::pow(uniform(), 1.0 / n);
    return (r / norm) * g;
  }

  std::uint64_t raw() { return engine_(); }

  /// Derive an independent stream seed (splitmix64 finalizer), used to give
  /// sampling chunks their own deterministic substreams.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace certnn
