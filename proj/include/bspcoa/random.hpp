#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace bspcoa {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seedable generator passed explicitly to every stochastic routine.
///
/// `split(stream)` yields a generator whose sequence depends only on the
/// parent seed and the stream index, so replicate `r` of a study gets the same
/// draws regardless of execution order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x5851F42D4C957F2DULL)));
  }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    double u;
    do {
      u = std::generate_canonical<double, 53>(engine_);
    } while (u <= 0.0);
    return u;
  }

  double normal() { return std_normal_(engine_); }

  /// Gamma with the given shape and *rate*.
  double gamma(double shape, double rate) {
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(engine_);
  }

  std::int64_t poisson(double mean) {
    std::poisson_distribution<std::int64_t> dist(mean);
    return dist(engine_);
  }

  std::int64_t binomial(std::int64_t trials, double prob) {
    std::binomial_distribution<std::int64_t> dist(trials, prob);
    return dist(engine_);
  }

  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound) {
    std::uniform_int_distribution<std::size_t> dist(0, bound - 1);
    return dist(engine_);
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal();
    return out;
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> std_normal_{0.0, 1.0};
};

} // namespace bspcoa
