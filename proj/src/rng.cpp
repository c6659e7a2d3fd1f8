#include "uavcov/rng.hpp"

namespace uavcov {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : state_(mix64(seed + kGolden) ^ mix64(trial * kGolden + 0x632be59bd9b4e019ULL))
{
}

TrialRng::result_type TrialRng::operator()()
{
    state_ += kGolden;
    return mix64(state_);
}

double TrialRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

}  // namespace uavcov
