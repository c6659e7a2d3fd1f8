#include <cmath>
#include <random>

#include "doctest.h"
#include "uavcov/approx.hpp"

using namespace uavcov;

namespace {

QuadratureSpec tight()
{
    QuadratureSpec s;
    s.abs_tol = 0.0;
    s.rel_tol = 1e-12;
    s.max_subdivisions = 1000;
    return s;
}

double residual_oracle(const GeometryFrame& f, double alpha, double r, double u1, double power)
{
    return integrate(
               [&](double u) {
                   return std::pow(u, -alpha * power) * pdf_residual_interferer(f, r, u1, u);
               },
               u1, f.w_p, tight().with_breakpoints({f.w_m}))
        .value;
}

}  // namespace

TEST_CASE("residual mean matches direct quadrature")
{
    for (double x0 : {0.0, 2e3, 4e3, 9e3}) {
        const auto f = make_frame({6, 10e3, 10e3}, x0);
        for (double t : {0.0, 0.2, 0.5, 0.8, 0.99}) {
            const double r = f.altitude + 0.1 * (f.w_p - f.altitude);
            const double u1 = r + t * (f.w_p - r);
            CAPTURE(x0);
            CAPTURE(u1);
            const auto m = residual_mean(f, 6, 3.0, r, u1);
            const double oracle = residual_oracle(f, 3.0, r, u1, 1.0);
            CHECK(m.mean_per_term == doctest::Approx(oracle).epsilon(1e-8));
            CHECK(m.mean_total == doctest::Approx(4 * oracle).epsilon(1e-8));
            CHECK(m.mean_per_term <= std::pow(u1, -3.0) * (1 + 1e-12));
            CHECK(m.mean_per_term >= std::pow(f.w_p, -3.0) * (1 - 1e-12));
        }
    }
}

TEST_CASE("residual variance and third moment match direct quadrature")
{
    const auto f = make_frame({5, 10e3, 8e3}, 3e3);
    const double alpha = 2.5, r = 9e3, u1 = 12e3;
    const double e1 = residual_oracle(f, alpha, r, u1, 1.0);
    const double e2 = residual_oracle(f, alpha, r, u1, 2.0);
    CHECK(residual_variance(f, 5, alpha, r, u1) ==
          doctest::Approx(3 * (e2 - e1 * e1)).epsilon(1e-7));
    const double third = integrate(
                             [&](double u) {
                                 return std::pow(std::abs(std::pow(u, -alpha) - e1), 3) *
                                        pdf_residual_interferer(f, r, u1, u);
                             },
                             u1, f.w_p,
                             tight().with_breakpoints({f.w_m, std::pow(e1, -1 / alpha)}))
                             .value;
    CHECK(residual_third_abs_moment(f, 5, alpha, r, u1) == doctest::Approx(third).epsilon(1e-8));
}

TEST_CASE("origin closed forms for the residual moments")
{
    const double ra = 1e4, h = 1e4, alpha = 4.0;
    const int n = 5;
    const auto f = make_frame({n, ra, h}, 0.0);
    const double u1 = 12000.0;
    const double closed = origin::residual_mean_total(ra, h, n, alpha, u1);
    const double d = std::hypot(ra, h);
    CHECK(closed == doctest::Approx(2.0 * 3 * (std::pow(u1, -2.0) - std::pow(d, -2.0)) /
                                    (2.0 * (d * d - u1 * u1))));
    CHECK(residual_mean(f, n, alpha, h, u1).mean_total == doctest::Approx(closed).epsilon(1e-10));
    CHECK(residual_variance(f, n, alpha, h, u1) ==
          doctest::Approx(origin::residual_variance_total(ra, h, n, alpha, u1)).epsilon(1e-8));
}

TEST_CASE("moment inequalities over random draws")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const NetworkConfig net{3 + static_cast<int>(20 * uni(gen)), 1e3 + 2e4 * uni(gen),
                                100 + 1e4 * uni(gen)};
        const auto f = make_frame(net, uni(gen) * net.disk_radius);
        const double alpha = 2.05 + 3 * uni(gen);
        const double r = f.altitude + uni(gen) * (f.w_p - f.altitude);
        const double u1 = r + uni(gen) * (f.w_p - r);
        const auto m = residual_moments(f, net.n_nodes, alpha, r, u1);
        REQUIRE(m.variance_total >= 0.0);
        REQUIRE(m.third_abs_moment_per_term >= 0.0);
        // Lyapunov: E|X|^3 >= (E X^2)^(3/2), allowing for rounding.
        REQUIRE(m.third_abs_moment_per_term >=
                std::pow(m.variance_per_term, 1.5) * (1 - 1e-6) - 1e-300);
    }
}

TEST_CASE("support collapse and argument checks")
{
    const auto f = make_frame({5, 10e3, 10e3}, 4e3);
    const auto m = residual_moments(f, 5, 2.5, 11e3, f.w_p);
    CHECK(m.mean_per_term == doctest::Approx(std::pow(f.w_p, -2.5)));
    CHECK(m.variance_total == 0.0);
    const auto near = residual_mean(f, 5, 2.5, 11e3, f.w_p * (1 - 1e-7));
    CHECK(near.mean_per_term == doctest::Approx(std::pow(f.w_p, -2.5)).epsilon(1e-6));
    CHECK_THROWS_AS(residual_mean(f, 2, 2.5, 11e3, 12e3), std::invalid_argument);
    CHECK_THROWS_AS(residual_mean(f, 5, 2.5, 13e3, 12e3), std::invalid_argument);
    CHECK_THROWS_AS(coverage_bounds({2, 10e3, 10e3}, 2.5, 4e3, 1.0), std::invalid_argument);
}

TEST_CASE("two nodes: the CLT engine is exact")
{
    const NetworkConfig net{2, 10e3, 10e3};
    const auto f = make_frame(net, 4e3);
    const double alpha = 2.5;
    for (double beta : {0.5, 1.0, 1.3}) {
        QuadratureSpec spec;
        spec.abs_tol = 1e-12;
        spec.rel_tol = 1e-10;
        const double k = std::pow(beta, 1 / alpha);
        // SIR > beta  <=>  u1 > k r; the inner limit carries the discontinuity.
        const auto oracle = integrate(
            [&](double r) {
                const double lo = std::max(r, k * r);
                if (lo >= f.w_p) return 0.0;
                std::vector<double> bp;
                if (f.w_m > lo && f.w_m < f.w_p) bp.push_back(f.w_m);
                return integrate([&](double u1) { return joint_pdf_serving_dominant(f, 2, r, u1); },
                                 lo, f.w_p, spec.with_breakpoints(bp))
                    .value;
            },
            f.altitude, f.w_p,
            spec.with_breakpoints({f.w_m, std::min(f.w_p, f.w_p / k), f.w_m / k}));
        CHECK(coverage_clt(net, alpha, 4e3, beta).value ==
              doctest::Approx(oracle.value).epsilon(1e-5));
    }
    CHECK(coverage_clt({1, 10e3, 10e3}, 2.5, 4e3, 5.0).value == 1.0);
}

TEST_CASE("CLT coverage properties")
{
    const NetworkConfig net{5, 10e3, 10e3};
    CHECK(coverage_clt(net, 2.5, 4e3, 1e-6).value == doctest::Approx(1.0));
    double prev = 1.0;
    for (double db = -10; db <= 10; db += 1.0) {
        const double v = coverage_clt(net, 2.5, 4e3, std::pow(10, db / 10)).value;
        CHECK(v >= 0.0);
        CHECK(v <= prev + 1e-9);
        prev = v;
    }
}

TEST_CASE("CLT trends in altitude and path-loss exponent")
{
    for (double db : {-6.0, -4.0, -2.0}) {
        const double beta = std::pow(10, db / 10);
        double prev = 1.0 + 1e-9;
        for (double h : {2e3, 4e3, 6e3, 8e3}) {
            const double v = coverage_clt({5, 10e3, h}, 2.5, 1e3, beta).value;
            CHECK(v <= prev + 1e-9);
            prev = v;
        }
        prev = -1.0;
        for (double alpha : {2.5, 3.0, 3.5}) {
            const double v = coverage_clt({5, 10e3, 10e3}, alpha, 4e3, beta).value;
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("Berry-Esseen sandwich")
{
    for (int n : {3, 5, 20}) {
        for (double db : {-5.0, -2.0, 0.0}) {
            const auto b = coverage_bounds({n, 10e3, 10e3}, 3.0, 4e3, std::pow(10, db / 10));
            CHECK(b.lower_unclamped <= b.clt);
            CHECK(b.clt <= b.upper_unclamped);
            CHECK(b.lower <= b.upper);
            CHECK(b.lower >= 0.0);
            CHECK(b.upper <= 1.0);
            const double clt = coverage_clt({n, 10e3, 10e3}, 3.0, 4e3, std::pow(10, db / 10)).value;
            CHECK(b.clt == doctest::Approx(clt).epsilon(1e-6));
        }
    }
    // A zero constant collapses the sandwich.
    const auto b = coverage_bounds({8, 10e3, 10e3}, 3.0, 4e3, 0.5, 0.0);
    CHECK(b.width_unclamped() == 0.0);
}
