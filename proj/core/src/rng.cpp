#include "gmd/rng.hpp"

#include <cmath>
#include <numbers>

namespace gmd {

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return base ^ splitmix64(stream);
}

double Rng::uniform01() {
  // 53 random bits, offset to the midpoint of each cell: values lie in
  // [2^-54, 1 - 2^-54], never exactly 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal01() {
  const double u1 = uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace gmd
