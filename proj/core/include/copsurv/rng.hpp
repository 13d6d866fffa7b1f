#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace copsurv {

// Seedable generator handed explicitly to every sampling routine.
// The uniform draw is built from raw engine bits so streams are
// reproducible bit-for-bit across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on the open interval (0, 1).
  double uniform();

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

  // Seed for sub-stream `stream` of `seed` (splitmix64 mixing of both).
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace copsurv
