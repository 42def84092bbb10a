#pragma once

#include <cstdint>

namespace bidisc {

// Counter-based substream generator.  A draw is a pure function of
// (seed, stream, counter, slot), so sampling is reproducible under any
// partitioning of the counter range across threads.
class SubstreamRng {
  public:
    SubstreamRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

    std::uint64_t word(std::uint64_t counter, std::uint64_t slot) const {
        return mix(key_ ^ mix(counter * 0xD1B54A32D192ED03ULL +
                              slot * 0x9E3779B97F4A7C15ULL +
                              0x2545F4914F6CDD1DULL));
    }

    // Uniform on the open interval (0,1).
    double uniform(std::uint64_t counter, std::uint64_t slot) const {
        return (static_cast<double>(word(counter, slot) >> 11) + 0.5) *
               0x1.0p-53;
    }

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

  private:
    std::uint64_t key_;
};

}  // namespace bidisc
