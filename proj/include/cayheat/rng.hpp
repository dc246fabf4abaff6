#pragma once

#include <cstdint>

namespace cayheat {

/// splitmix64 stream: fixed algorithm so that a seed determines every
/// random draw identically across platforms and compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Independent child stream; mixing the tag through the generator keeps
    /// per-trial streams reproducible regardless of evaluation order.
    Rng derive(std::uint64_t tag) const {
        Rng r(state_ ^ (0x517cc1b727220a95ull * (tag + 1)));
        r.next_u64();
        return r;
    }

  private:
    std::uint64_t state_;
};

}  // namespace cayheat
