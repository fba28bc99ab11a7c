#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace cellgeo {

// 64-bit seed. All randomness in the library flows from one of these.
struct RngSeed {
  std::uint64_t value = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Child seed for replicate `index` of a computation seeded by `master`:
//   child = splitmix64(splitmix64(master) + index)
// The rule is fixed so replicates can run in any order or in parallel.
RngSeed derive_seed(RngSeed master, std::uint64_t index) noexcept;

// Random source with platform-independent variates. The engine is the
// standardized mt19937_64; all distributions are implemented here rather than
// taken from <random>, whose distribution algorithms differ between standard
// libraries.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(splitmix64(seed.value)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [0, n). n must be positive.
  std::size_t index(std::size_t n) noexcept;
  double exponential() noexcept;
  double normal() noexcept;
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads. Bodies
// must only write to their own output slot; the result is then independent
// of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace cellgeo
