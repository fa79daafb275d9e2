#ifndef FAIRTV_RNG_HPP
#define FAIRTV_RNG_HPP

#include <cstdint>

namespace fairtv {

// SplitMix64 (Steele, Lea, Flood 2014). Used for the record resampling
// streams: one independent stream per record, derived from the run seed and
// the record index, so parallel application stays deterministic.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Stream for one record: the index is mixed through the same finalizer
  // before being combined with the seed.
  static SplitMix64 for_record(std::uint64_t seed, std::uint64_t record_index) {
    SplitMix64 mixer(record_index);
    return SplitMix64(seed ^ mixer.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace fairtv

#endif  // FAIRTV_RNG_HPP
