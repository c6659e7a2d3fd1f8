#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavcov/geometry.hpp"

namespace uavcov {

/// Raised when an iterative numerical method fails to reach its tolerance.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureSpec
{
    double abs_tol = 1e-9;
    double rel_tol = 1e-7;
    int max_subdivisions = 200;
    /// Points inside (a, b) where the integrand may have a kink; the interval
    /// is split there before any adaptive refinement.
    std::vector<double> mandatory_breakpoints;

    void validate() const;
    QuadratureSpec with_breakpoints(std::vector<double> points) const;
};

struct QuadResult
{
    double value = 0.0;
    double error = 0.0;
};

/// Vector-valued result: component c of `value` is the integral of the c-th
/// integrand output.
struct QuadVectorResult
{
    std::vector<double> value;
    std::vector<double> error;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel
{
    double a;
    double b;
    std::size_t offset;  // into the flat value/error storage
};

// One GK15 panel on [a, b]. Writes `dim` results and error estimates.
// `f(x, out)` fills out[0..dim).
template <class F>
void gk15(F& f, double a, double b, std::size_t dim, double* result, double* abserr,
          std::vector<double>& scratch)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    // scratch layout: 15 samples of dim values each.
    scratch.resize(15 * dim);
    auto sample = [&](int i) { return std::span<double>(scratch.data() + i * dim, dim); };
    f(centr, sample(0));
    for (int j = 0; j < 7; ++j) {
        const double dx = hlgth * kXgk[j];
        f(centr - dx, sample(1 + 2 * j));
        f(centr + dx, sample(2 + 2 * j));
    }

    for (std::size_t c = 0; c < dim; ++c) {
        const double fc = scratch[c];
        double resk = kWgk[7] * fc;
        double resg = kWg[3] * fc;
        double resabs = std::abs(resk);
        for (int j = 0; j < 7; ++j) {
            const double f1 = scratch[(1 + 2 * j) * dim + c];
            const double f2 = scratch[(2 + 2 * j) * dim + c];
            resk += kWgk[j] * (f1 + f2);
            resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
            if (j % 2 == 1) {
                resg += kWg[j / 2] * (f1 + f2);
            }
        }
        const double reskh = 0.5 * resk;
        double resasc = kWgk[7] * std::abs(fc - reskh);
        for (int j = 0; j < 7; ++j) {
            resasc += kWgk[j] * (std::abs(scratch[(1 + 2 * j) * dim + c] - reskh) +
                                 std::abs(scratch[(2 + 2 * j) * dim + c] - reskh));
        }
        result[c] = resk * hlgth;
        resabs *= std::abs(hlgth);
        resasc *= std::abs(hlgth);
        double err = std::abs((resk - resg) * hlgth);
        if (resasc != 0.0 && err != 0.0) {
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        }
        if (resabs > uflow / (50.0 * eps)) {
            err = std::max(eps * 50.0 * resabs, err);
        }
        abserr[c] = err;
    }
}

}  // namespace detail

/// Global adaptive Gauss-Kronrod integration of a vector-valued integrand.
///
/// `f(x, out)` must fill `out` (size `dim`) with the integrands at x. The rule
/// is open, so a and b themselves are never sampled. Refinement stops when
/// every component satisfies err <= max(abs_tol, rel_tol * |value|).
/// Throws NumericalError after spec.max_subdivisions bisections.
template <class F>
QuadVectorResult integrate_vector(F&& f, std::size_t dim, double a, double b,
                                  const QuadratureSpec& spec)
{
    QuadVectorResult out;
    out.value.assign(dim, 0.0);
    out.error.assign(dim, 0.0);
    if (!(b > a)) {
        if (b < a) {
            throw std::invalid_argument("integrate: requires a <= b");
        }
        return out;
    }

    std::vector<double> cuts{a};
    for (double p : spec.mandatory_breakpoints) {
        if (p > a && p < b) cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(b);

    std::vector<detail::Panel> panels;
    std::vector<double> vals;
    std::vector<double> errs;
    std::vector<double> scratch;
    auto evaluate = [&](double lo, double hi) {
        detail::Panel p{lo, hi, vals.size()};
        vals.resize(vals.size() + dim);
        errs.resize(errs.size() + dim);
        detail::gk15(f, lo, hi, dim, vals.data() + p.offset, errs.data() + p.offset, scratch);
        return p;
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        panels.push_back(evaluate(cuts[i], cuts[i + 1]));
    }

    std::vector<double> total(dim);
    std::vector<double> total_err(dim);
    std::vector<double> tol(dim);
    auto accumulate = [&] {
        std::fill(total.begin(), total.end(), 0.0);
        std::fill(total_err.begin(), total_err.end(), 0.0);
        for (const auto& p : panels) {
            for (std::size_t c = 0; c < dim; ++c) {
                total[c] += vals[p.offset + c];
                total_err[c] += errs[p.offset + c];
            }
        }
        bool converged = true;
        for (std::size_t c = 0; c < dim; ++c) {
            tol[c] = std::max(spec.abs_tol, spec.rel_tol * std::abs(total[c]));
            if (total_err[c] > tol[c]) converged = false;
        }
        return converged;
    };

    int subdivisions = 0;
    while (!accumulate()) {
        if (subdivisions >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg << "integrate: no convergence on [" << a << ", " << b << "] after "
                << subdivisions << " subdivisions (error estimate";
            for (std::size_t c = 0; c < dim; ++c) msg << ' ' << total_err[c];
            msg << ")";
            throw NumericalError(msg.str());
        }
        // Bisect the panel with the largest error relative to its component
        // tolerance.
        std::size_t worst = 0;
        double worst_ratio = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            double ratio = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double t = tol[c] > 0.0 ? tol[c] : std::numeric_limits<double>::min();
                ratio = std::max(ratio, errs[panels[i].offset + c] / t);
            }
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst = i;
            }
        }
        const detail::Panel p = panels[worst];
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            throw NumericalError("integrate: panel width reached machine resolution near x = " +
                                 std::to_string(mid));
        }
        panels[worst] = evaluate(p.a, mid);
        panels.insert(panels.begin() + static_cast<std::ptrdiff_t>(worst) + 1,
                      evaluate(mid, p.b));
        ++subdivisions;
    }
    out.value = total;
    out.error = total_err;
    return out;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

/// Iterated integral of f(r, u1) over the wedge h <= r <= u1 <= w_p: inner in
/// u1, outer in r, both split at w_m. Inner tolerances are scaled by the
/// outer span so their accumulated error stays within spec.abs_tol.
QuadResult integrate_2d_wedge(const std::function<double(double, double)>& f,
                              const GeometryFrame& frame, const QuadratureSpec& spec = {});

}  // namespace uavcov
