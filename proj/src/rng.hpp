#pragma once

#include <cstdint>
#include <random>

namespace clockaug::detail {

/// Platform-stable draws: mt19937_64's output sequence is fixed by the standard,
/// the standard distributions are not.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(seed)
  {}

  /// Uniform in [0, bound). bound > 0.
  std::uint64_t below(std::uint64_t bound)
  {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x     = engine_();
    while (x >= limit)
    {
      x = engine_();
    }
    return x % bound;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace clockaug::detail
