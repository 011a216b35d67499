#ifndef PMMH_RNG_HPP
#define PMMH_RNG_HPP

#include <cstdint>

namespace pmmh {

// Counter-based random stream keyed by (root_seed, iteration, sample).
// The key triple is hashed into a base state and outputs come from mixing
// successive counter values, so a stream is fully determined by its identity
// and never shares state with any other stream. That is what lets the
// estimator hand stream (seed, i, k) to worker k and still be bit-reproducible
// for any worker count.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::uint64_t iteration, std::uint64_t sample);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); safe under log().
  double uniform();

  // Standard normal via Box-Muller; the spare draw is cached.
  double normal();

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t iteration() const { return iteration_; }
  std::uint64_t sample_index() const { return sample_; }

 private:
  std::uint64_t root_seed_;
  std::uint64_t iteration_;
  std::uint64_t sample_;
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace pmmh

#endif
