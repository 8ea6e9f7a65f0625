#ifndef NPNS_RNG_HPP_
#define NPNS_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace npns {

/// Gaussian stream for one trajectory. Streams are keyed by
/// (master seed, trajectory index); distinct keys give independent streams.
/// Not shareable between trajectories.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x6e70u};
    engine_.seed(seq);
  }

  /// Sample from N(0, variance).
  double normal(double variance) {
    return std::sqrt(variance) * standard_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> standard_{0.0, 1.0};
};

}  // namespace npns

#endif  // NPNS_RNG_HPP_
