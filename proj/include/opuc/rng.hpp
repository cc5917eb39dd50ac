#pragma once

#include <cstdint>
#include <cmath>

#include "opuc/common.hpp"

namespace opuc {

namespace detail {
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Counter-based random stream keyed by (seed, stream index). Draws depend
/// only on the key and the draw counter, never on scheduling.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index)
        : key_(detail::mix64(seed ^ detail::mix64(stream_index * 0x9e3779b97f4a7c15ull + 1))),
          ctr_(0) {}

    std::uint64_t next_u64() {
        std::uint64_t v = detail::mix64(key_ ^ detail::mix64(ctr_ + 0x632be59bd9b4e019ull));
        ++ctr_;
        return v;
    }

    /// Uniform in the open interval (0, 1).
    double uniform() {
        std::uint64_t v = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(v) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal (Box-Muller; both uniforms consumed every call).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

/// Per-sample stream derived from a master seed, as stream(seed, i).
inline RngStream stream(std::uint64_t seed, std::uint64_t index) { return RngStream(seed, index); }

}  // namespace opuc
