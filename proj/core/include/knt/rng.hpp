#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace knt {

// Deterministic random source with cheap substream derivation.
//
// Every bootstrap replication / simulation run draws from its own substream,
// derived from (seed, stream id) by a splitmix64 mix.  Results are therefore
// independent of how work is scheduled across threads, and identical across
// standard library implementations because all transforms (Box-Muller,
// chi-square, ...) are spelled out here instead of delegated to the
// implementation-defined std::*_distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
  }

  // A fresh seed value deterministically derived from (seed, stream); used to
  // seed nested procedures (per-rank inner tests, calibration replicates).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed) ^ mix(stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the paired value is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  // Student t with integer degrees of freedom: N(0,1) / sqrt(chi2_df / df).
  double student_t(int df) {
    double chi2 = 0.0;
    for (int i = 0; i < df; ++i) {
      const double z = normal();
      chi2 += z * z;
    }
    return normal() / std::sqrt(chi2 / static_cast<double>(df));
  }

  Eigen::VectorXd normal_vector(Eigen::Index size) {
    Eigen::VectorXd out(size);
    for (Eigen::Index i = 0; i < size; ++i) out(i) = normal();
    return out;
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = normal();
    return out;
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer.
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace knt
