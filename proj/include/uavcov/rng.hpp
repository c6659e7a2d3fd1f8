#pragma once

#include <cstdint>
#include <limits>

namespace uavcov {

/// SplitMix64 stream keyed by (seed, trial). Every trial owns its stream,
/// so results do not depend on which worker runs it or in what order.
/// Satisfies UniformRandomBitGenerator for use with <random> distributions.
class TrialRng
{
public:
    using result_type = std::uint64_t;

    TrialRng(std::uint64_t seed, std::uint64_t trial);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_;
};

/// The SplitMix64 output function.
std::uint64_t mix64(std::uint64_t z);

}  // namespace uavcov
