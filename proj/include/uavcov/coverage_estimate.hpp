#pragma once

#include <cstdint>

namespace uavcov {

/// A coverage probability together with its provenance: Monte-Carlo
/// estimates carry a trial count and a 95% normal-approximation half-width,
/// analytic values carry the quadrature error estimate.
struct CoverageEstimate
{
    double value = 0.0;
    double ci_halfwidth = 0.0;
    std::uint64_t trials = 0;
    double quad_error = 0.0;

    bool is_monte_carlo() const { return trials > 0; }
};

}  // namespace uavcov
