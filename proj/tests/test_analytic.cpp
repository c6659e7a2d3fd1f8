#include <cmath>
#include <random>

#include "doctest.h"
#include "uavcov/analytic.hpp"

using namespace uavcov;

namespace {

QuadratureSpec tight()
{
    QuadratureSpec s;
    s.abs_tol = 1e-14;
    s.rel_tol = 1e-12;
    s.max_subdivisions = 1000;
    return s;
}

template <class F>
double derivative(F&& f, double x, double h)
{
    const double d1 = (f(x + h) - f(x - h)) / (2 * h);
    const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
    return (4 * d2 - d1) / 3;
}

}  // namespace

TEST_CASE("channel validation")
{
    CHECK_THROWS_AS((ChannelModel{2.0, 1, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ChannelModel{3.0, 0, 1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ChannelModel{3.0, 1, 1.5}.validate()), std::invalid_argument);
    CHECK_NOTHROW((ChannelModel{3.0, 0.7, 2}.validate()));
    CHECK((ChannelModel{3.0, kNoFading, kNoFading}.no_fading()));
}

TEST_CASE("single-node factor derivatives")
{
    for (double m : {0.5, 1.0, 3.0, kNoFading}) {
        const ChannelModel model{3.0, m, 1};
        const double u = 1.3;
        const double s = 0.8;
        for (int k = 1; k <= 4; ++k) {
            CAPTURE(m);
            CAPTURE(k);
            const double fd = derivative(
                [&](double v) { return single_node_factor_derivative(k - 1, v, u, model); }, s,
                1e-3);
            CHECK(single_node_factor_derivative(k, s, u, model) ==
                  doctest::Approx(fd).epsilon(1e-8));
        }
    }
}

TEST_CASE("Laplace transform basics")
{
    const auto f = make_frame({4, 10e3, 10e3}, 4e3);
    const ChannelModel model{2.5, 2, 2};
    const double r = 12e3;
    CHECK(laplace_interference(f, 4, model, 0.0, r) == doctest::Approx(1.0));
    CHECK(laplace_interference(f, 1, model, 5.0, r) == 1.0);
    // Direct quadrature oracle: (E[factor | r])^(N-1).
    const double s = 0.7 * std::pow(r, 2.5);
    const auto num = integrate(
        [&](double u) {
            return std::pow(1 + s * std::pow(u, -2.5) / 2, -2) * pdf_link_distance(f, u);
        },
        r, f.w_p, tight().with_breakpoints({f.w_m}));
    const double g = num.value / ccdf_link_distance(f, r);
    CHECK(laplace_interference(f, 4, model, s, r, tight()) ==
          doctest::Approx(std::pow(g, 3)).epsilon(1e-9));
}

TEST_CASE("Laplace derivatives match finite differences")
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int draw = 0; draw < 8; ++draw) {
        const NetworkConfig net{2 + static_cast<int>(uni(gen) * 10), 5e3 + 10e3 * uni(gen),
                                1e3 + 9e3 * uni(gen)};
        const auto f = make_frame(net, uni(gen) * net.disk_radius);
        const double m_choices[] = {0.5, 1, 2, 4, kNoFading};
        const ChannelModel model{2.2 + 2 * uni(gen), m_choices[draw % 5], 1};
        const double r = f.altitude + 0.5 * uni(gen) * (f.w_p - f.altitude);
        const double s = (0.1 + 3 * uni(gen)) * std::pow(r, model.alpha);
        const auto d = laplace_derivatives(f, net.n_nodes, model, s, r, 4, tight());
        for (int k = 1; k <= 4; ++k) {
            CAPTURE(draw);
            CAPTURE(k);
            const double fd = derivative(
                [&](double v) {
                    return laplace_derivatives(f, net.n_nodes, model, v, r, k - 1, tight())
                        .values[k - 1];
                },
                s, 1e-2 * s);
            CHECK(d.values[k] == doctest::Approx(fd).epsilon(1e-6));
            // Complete monotonicity.
            CHECK((k % 2 == 0 ? d.values[k] : -d.values[k]) >= 0.0);
        }
    }
    const auto f = make_frame({3, 1e3, 1e3}, 0.0);
    CHECK_THROWS_AS(laplace_derivatives(f, 3, ChannelModel{}, 1.0, 1.2e3, 10), std::invalid_argument);
    CHECK_THROWS_AS(laplace_derivatives(f, 3, ChannelModel{}, 1.0, 0.5e3, 2), std::invalid_argument);
}

TEST_CASE("Rayleigh conditional coverage is the Laplace transform")
{
    const auto f = make_frame({5, 10e3, 10e3}, 4e3);
    const ChannelModel model{2.5, 1, 1};
    const double r = 11e3, beta = 0.8;
    CHECK(conditional_coverage_nakagami(f, 5, model, beta, r) ==
          doctest::Approx(laplace_interference(f, 5, model, beta * std::pow(r, 2.5), r)));
}

TEST_CASE("Rayleigh coverage for two nodes at the origin")
{
    // Independent nested-quadrature oracle from the origin densities.
    const double ra = 10e3, h = 10e3, alpha = 3.0, beta = 0.5;
    const double d = std::hypot(ra, h);
    const auto oracle = integrate(
        [&](double r) {
            const double inner =
                integrate(
                    [&](double u) {
                        return 1.0 / (1.0 + beta * std::pow(r / u, alpha)) * 2 * u / (ra * ra);
                    },
                    r, d, tight())
                    .value;
            return 2.0 * inner * 2 * r / (ra * ra);  // f_R(r) / (1 - F(r)) = 2 f(r)
        },
        h, d, tight());
    const auto est = coverage_nakagami({2, ra, h}, {alpha, 1, 1}, 0.0, beta, tight());
    CHECK(est.value == doctest::Approx(oracle.value).epsilon(1e-8));
}

TEST_CASE("coverage properties")
{
    const NetworkConfig net{5, 10e3, 10e3};
    const ChannelModel model{2.5, 2, 2};
    CHECK(coverage_nakagami({1, 10e3, 10e3}, model, 4e3, 3.0).value == 1.0);
    CHECK(coverage_nakagami(net, model, 4e3, 1e-9).value == doctest::Approx(1.0).epsilon(1e-6));
    double prev = 1.0;
    for (double db = -10; db <= 20; db += 5) {
        const double v = coverage_nakagami(net, model, 4e3, std::pow(10, db / 10)).value;
        CHECK(v <= prev + 1e-9);
        CHECK(v >= 0.0);
        prev = v;
    }
    CHECK_THROWS_AS(coverage_nakagami(net, {2.5, 1, 11}, 4e3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(coverage_nakagami(net, {2.5, 1, kNoFading}, 4e3, 1.0),
                    std::invalid_argument);
}

TEST_CASE("interferer shape infinity with Rayleigh serving link")
{
    // E[exp(-s I)] with deterministic interference gains.
    const auto f = make_frame({3, 10e3, 10e3}, 0.0);
    const ChannelModel model{3.0, kNoFading, 1};
    const double r = 11e3, s = 2 * std::pow(r, 3.0);
    const auto num = integrate(
        [&](double u) { return std::exp(-s * std::pow(u, -3.0)) * pdf_link_distance(f, u); }, r,
        f.w_p, tight());
    const double g = num.value / ccdf_link_distance(f, r);
    CHECK(laplace_interference(f, 3, model, s, r, tight()) ==
          doctest::Approx(g * g).epsilon(1e-9));
}
