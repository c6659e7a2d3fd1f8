#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/coverage_estimate.hpp"
#include "uavcov/geometry.hpp"
#include "uavcov/rng.hpp"

namespace uavcov {

struct MonteCarloConfig
{
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 4096;
    unsigned threads = 0;  // 0: use worker_count() default

    void validate() const;
};

struct Point3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// N transmitters uniform on the disk of radius r_a at height h.
std::vector<Point3> sample_network(TrialRng& rng, const NetworkConfig& config);

/// Unit-mean gamma gain with shape m (rate m); exactly 1 for kNoFading.
double sample_gamma_fading(TrialRng& rng, double m);

/// 1.96 sqrt(p (1 - p) / n).
double binomial_ci_halfwidth(double p, std::uint64_t trials);

/// Fraction of trials with SIR > beta under nearest-distance association.
CoverageEstimate simulate_coverage(const NetworkConfig& config, const ChannelModel& model,
                                   double x0, double beta, const MonteCarloConfig& mc);

/// Same trials evaluated against every threshold in `betas`.
std::vector<CoverageEstimate> simulate_coverage_grid(const NetworkConfig& config,
                                                     const ChannelModel& model, double x0,
                                                     std::span<const double> betas,
                                                     const MonteCarloConfig& mc);

/// Per-trial SIR in dB, in trial order. Trials without interferers give +inf.
std::vector<double> simulate_sir_db(const NetworkConfig& config, const ChannelModel& model,
                                    double x0, const MonteCarloConfig& mc);

struct Interval
{
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct SampleMoments
{
    std::uint64_t count = 0;
    double mean = 0.0;
    double mean_se = 0.0;
    double variance = 0.0;
    double variance_se = 0.0;
    double third_abs = 0.0;  // E|X - mean|^3
    double third_abs_se = 0.0;
};

SampleMoments sample_moments(std::span<const double> xs);

/// Trials accepted when the serving distance falls in `r_bin` and the
/// dominant-interferer distance in `u1_bin`.
struct ConditionalStatistics
{
    std::uint64_t attempted = 0;
    std::uint64_t accepted = 0;
    std::vector<double> serving;             // R
    std::vector<double> dominant;            // U1
    std::vector<double> residual_distances;  // U_2..U_{N-1}, pooled
    std::vector<double> residual_power;      // per-trial sum of U_i^-α over i >= 2
    std::vector<double> laplace_samples;     // exp(-s I), I the faded interference
    SampleMoments residual;
    SampleMoments residual_terms;  // per-term V_i = U_i^-α, pooled
    SampleMoments laplace;

    double acceptance_rate() const;
};

/// Rejection-conditioned samples. `s` is the Laplace evaluation point.
/// Throws std::runtime_error if the acceptance rate falls below 1e-4.
ConditionalStatistics conditional_statistics(const NetworkConfig& config,
                                             const ChannelModel& model, double x0,
                                             const MonteCarloConfig& mc, Interval r_bin,
                                             Interval u1_bin, double s = 0.0);

}  // namespace uavcov
