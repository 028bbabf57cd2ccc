#pragma once

#include <cstdint>
#include <random>

namespace cbvs {

/// Seedable generator with derivable substreams. Every stochastic operation
/// in the library takes one of these explicitly; the same seed produces the
/// same draws on a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix(seed)) {}

  /// Independent substream derived from (seed, id). Streams with distinct
  /// ids are decorrelated regardless of how much either stream is consumed.
  Rng stream(std::uint64_t id) const {
    return Rng(splitmix(seed_ ^ (0x9e3779b97f4a7c15ULL * (id + 1))));
  }

  std::uint64_t seed() const { return seed_; }

  /// Uniform on (0, 1); never returns an endpoint.
  double uniform() {
    std::uint64_t bits;
    do {
      bits = gen_() >> 11;
    } while (bits == 0);
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  double normal() { return normal_(gen_); }

  double gamma(double shape, double scale = 1.0) {
    std::gamma_distribution<double> d(shape, scale);
    return d(gen_);
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  /// Draw with density proportional to x^{-(shape+1)} exp(-rate / x).
  double inverse_gamma(double shape, double rate) {
    return rate / gamma(shape);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return gen_; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

}  // namespace cbvs
