#pragma once

#include <cstdint>
#include <random>

namespace gmd {

// One step of the splitmix64 sequence started at `state`. Used only for seed
// mixing, never for simulation draws.
std::uint64_t splitmix64(std::uint64_t state);

// Decorrelated child seed for a named stream. Children of the same base with
// distinct stream ids drive statistically independent generators; the scheme
// is pure arithmetic, so seeds are reproducible across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// mt19937_64 wrapped with explicit samplers. std's distribution objects are
// implementation-defined, so every variate here is produced from raw 64-bit
// words by fixed formulas; streams are bit-identical everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1); safe as a CDF argument.
  double uniform01();

  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal01();

 private:
  std::mt19937_64 engine_;
};

}  // namespace gmd
