#include "pmmh/rng.hpp"

#include <cmath>
#include <numbers>

namespace pmmh {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t iteration, std::uint64_t sample)
    : root_seed_(root_seed), iteration_(iteration), sample_(sample) {
  std::uint64_t h = mix64(root_seed + kGoldenGamma);
  h = mix64(h ^ (iteration + kGoldenGamma));
  h = mix64(h ^ (sample + kGoldenGamma));
  base_ = h;
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(base_ + counter_ * kGoldenGamma);
}

double RngStream::uniform() {
  // 52 high bits plus a half-ulp offset: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

}  // namespace pmmh
