#include "uavcov/quad.hpp"

namespace uavcov {

void QuadratureSpec::validate() const
{
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0)) {
        throw std::invalid_argument("QuadratureSpec: tolerances must be non-negative, not both 0");
    }
    if (max_subdivisions < 0) {
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 0");
    }
    if (!std::is_sorted(mandatory_breakpoints.begin(), mandatory_breakpoints.end())) {
        throw std::invalid_argument("QuadratureSpec: breakpoints must be sorted");
    }
}

QuadratureSpec QuadratureSpec::with_breakpoints(std::vector<double> points) const
{
    QuadratureSpec s = *this;
    std::sort(points.begin(), points.end());
    s.mandatory_breakpoints = std::move(points);
    return s;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec)
{
    spec.validate();
    auto r = integrate_vector([&](double x, std::span<double> out) { out[0] = f(x); }, 1, a, b,
                              spec);
    return {r.value[0], r.error[0]};
}

QuadResult integrate_2d_wedge(const std::function<double(double, double)>& f,
                              const GeometryFrame& frame, const QuadratureSpec& spec)
{
    spec.validate();
    const double h = frame.altitude;
    const double wp = frame.w_p;
    const double span = wp - h;

    QuadratureSpec inner = spec.with_breakpoints({frame.w_m});
    if (span > 0.0) inner.abs_tol = spec.abs_tol / span;
    const QuadratureSpec outer = spec.with_breakpoints({frame.w_m});

    double worst_inner_error = 0.0;
    auto inner_integral = [&](double r) {
        try {
            auto res = integrate([&](double u1) { return f(r, u1); }, r, wp, inner);
            worst_inner_error = std::max(worst_inner_error, res.error);
            return res.value;
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << "integrate_2d_wedge: inner integral failed at r = " << r << ": " << e.what();
            throw NumericalError(msg.str());
        }
    };
    auto res = integrate(inner_integral, h, wp, outer);
    res.error += worst_inner_error * span;
    return res;
}

}  // namespace uavcov
