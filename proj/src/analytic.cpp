#include "uavcov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace uavcov {

namespace {

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

// Scaled Taylor coefficients of the single-interferer factor at u:
// out[j] = c^j / j! * d^j/ds^j factor(s, u), j < order, with c the scale.
// out[order] receives 1 so the same pass integrates the normalizer.
void scaled_factor_terms(double s, double u, double scale, const ChannelModel& model,
                         std::span<double> out)
{
    const std::size_t order = out.size() - 1;
    const double v = std::pow(u, -model.alpha);
    const double m = model.m_interferer;
    double term = 0.0;
    double step = 0.0;
    if (std::isinf(m)) {
        term = std::exp(-s * v);
        step = scale * v;
        for (std::size_t j = 0; j < order; ++j) {
            out[j] = term;
            term *= -step / static_cast<double>(j + 1);
        }
    } else {
        const double base = 1.0 + s * v / m;
        term = std::pow(base, -m);
        step = scale * v / (m * base);
        for (std::size_t j = 0; j < order; ++j) {
            out[j] = term;
            term *= -step * (m + static_cast<double>(j)) / static_cast<double>(j + 1);
        }
    }
    out[order] = 1.0;
}

// a_j = c^j g^(j)(s) / j! for j < order, g the conditional expectation of the
// single-interferer factor given the serving distance r.
std::vector<double> single_interferer_coefficients(const GeometryFrame& frame,
                                                   const ChannelModel& model, double s, double r,
                                                   double scale, int order,
                                                   const QuadratureSpec& spec)
{
    QuadratureSpec inner = spec.with_breakpoints({frame.w_m});
    inner.abs_tol = 0.0;
    const std::size_t dim = static_cast<std::size_t>(order) + 1;
    auto res = integrate_vector(
        [&](double u, std::span<double> out) {
            scaled_factor_terms(s, u, scale, model, out);
            const double density = pdf_link_distance(frame, u);
            for (double& v : out) v *= density;
        },
        dim, r, frame.w_p, inner);
    std::vector<double> a(static_cast<std::size_t>(order));
    const double norm = res.value[dim - 1];
    if (!(norm > 0.0)) {
        // Serving node on the rim: no interferer can be farther, the
        // conditional law degenerates to a point mass at w_p.
        std::vector<double> point(dim);
        scaled_factor_terms(s, frame.w_p, scale, model, point);
        std::copy_n(point.begin(), order, a.begin());
        return a;
    }
    for (int j = 0; j < order; ++j) a[j] = res.value[j] / norm;
    return a;
}

// Taylor coefficients of H = g^p from those of g (a[0] != 0):
// b_0 = a_0^p, b_k = 1/(k a_0) sum_{j=1..k} (j (p + 1) - k) a_j b_{k-j}.
std::vector<double> power_series(const std::vector<double>& a, int power)
{
    std::vector<double> b(a.size(), 0.0);
    if (a.empty()) return b;
    b[0] = std::pow(a[0], power);
    if (a[0] == 0.0) return b;
    for (std::size_t k = 1; k < a.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            sum += (static_cast<double>(j) * (power + 1) - static_cast<double>(k)) * a[j] *
                   b[k - j];
        }
        b[k] = sum / (static_cast<double>(k) * a[0]);
    }
    return b;
}

double natural_scale(double r, double alpha) { return r > 0.0 ? std::pow(r, alpha) : 1.0; }

void check_serving_distance(const GeometryFrame& frame, double r, const char* op)
{
    if (!(r >= frame.altitude) || !(r <= frame.w_p)) {
        std::ostringstream msg;
        msg << op << ": serving distance r = " << r << " outside [" << frame.altitude << ", "
            << frame.w_p << "]";
        throw std::invalid_argument(msg.str());
    }
}

int serving_shape(const ChannelModel& model, const char* op)
{
    if (!is_integer(model.m_serving) || model.m_serving < 1 ||
        model.m_serving > kMaxServingShape) {
        std::ostringstream msg;
        msg << op << ": serving shape m0 must be an integer in [1, " << kMaxServingShape
            << "] (got " << model.m_serving << ")";
        throw std::invalid_argument(msg.str());
    }
    return static_cast<int>(model.m_serving);
}

}  // namespace

bool ChannelModel::no_fading() const
{
    return std::isinf(m_interferer) && std::isinf(m_serving);
}

void ChannelModel::validate() const
{
    if (!(alpha > 2.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("ChannelModel: path-loss exponent alpha must be > 2");
    }
    if (!(m_interferer > 0.0)) {
        throw std::invalid_argument("ChannelModel: interferer shape m must be > 0");
    }
    if (!(m_serving > 0.0) || (std::isfinite(m_serving) && !is_integer(m_serving))) {
        throw std::invalid_argument("ChannelModel: serving shape m0 must be a positive integer");
    }
}

double single_node_factor_derivative(int k, double s, double u, const ChannelModel& model)
{
    if (k < 0) throw std::invalid_argument("single_node_factor_derivative: k must be >= 0");
    const double v = std::pow(u, -model.alpha);
    const double m = model.m_interferer;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    if (std::isinf(m)) {
        return sign * std::pow(v, k) * std::exp(-s * v);
    }
    double rising = 1.0;  // (m)_k m^-k
    for (int i = 0; i < k; ++i) rising *= (m + i) / m;
    return sign * rising * std::pow(v, k) * std::pow(1.0 + s * v / m, -m - k);
}

double laplace_interference(const GeometryFrame& frame, int n_nodes, const ChannelModel& model,
                            double s, double r, const QuadratureSpec& spec)
{
    return laplace_derivatives(frame, n_nodes, model, s, r, 0, spec).values[0];
}

LaplaceDerivatives laplace_derivatives(const GeometryFrame& frame, int n_nodes,
                                       const ChannelModel& model, double s, double r,
                                       int max_order, const QuadratureSpec& spec)
{
    model.validate();
    if (max_order < 0 || max_order > kMaxServingShape - 1) {
        std::ostringstream msg;
        msg << "laplace_derivatives: max_order must be in [0, " << kMaxServingShape - 1
            << "] (got " << max_order << ")";
        throw std::invalid_argument(msg.str());
    }
    if (!(s >= 0.0)) throw std::invalid_argument("laplace_derivatives: s must be >= 0");
    if (n_nodes < 1) throw std::invalid_argument("laplace_derivatives: n_nodes must be >= 1");
    check_serving_distance(frame, r, "laplace_derivatives");

    LaplaceDerivatives out;
    out.s = s;
    out.values.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    if (n_nodes == 1) {
        out.values[0] = 1.0;
        return out;
    }
    const double scale = natural_scale(r, model.alpha);
    const auto a = single_interferer_coefficients(frame, model, s, r, scale, max_order + 1, spec);
    const auto b = power_series(a, n_nodes - 1);
    double factorial = 1.0;
    double scale_pow = 1.0;
    for (int k = 0; k <= max_order; ++k) {
        if (k > 0) {
            factorial *= k;
            scale_pow *= scale;
        }
        out.values[k] = factorial * b[k] / scale_pow;
    }
    return out;
}

double conditional_coverage_nakagami(const GeometryFrame& frame, int n_nodes,
                                     const ChannelModel& model, double beta, double r,
                                     const QuadratureSpec& spec)
{
    model.validate();
    const int m0 = serving_shape(model, "conditional_coverage_nakagami");
    if (!(beta > 0.0)) {
        throw std::invalid_argument("conditional_coverage_nakagami: beta must be > 0");
    }
    check_serving_distance(frame, r, "conditional_coverage_nakagami");
    if (n_nodes == 1) return 1.0;

    // With c = r^α the evaluation point is s = m0 β c, so the k-th term
    // (-s)^k L^(k)/k! is (-m0 β)^k times the scaled Taylor coefficient.
    const double scale = natural_scale(r, model.alpha);
    const double s = m0 * beta * scale;
    const auto a = single_interferer_coefficients(frame, model, s, r, scale, m0, spec);
    const auto b = power_series(a, n_nodes - 1);
    double sum = 0.0;
    double weight = 1.0;
    for (int k = 0; k < m0; ++k) {
        sum += weight * b[k];
        weight *= -m0 * beta;
    }
    return std::clamp(sum, 0.0, 1.0);
}

CoverageEstimate coverage_nakagami(const NetworkConfig& config, const ChannelModel& model,
                                   double x0, double beta, const QuadratureSpec& spec)
{
    model.validate();
    serving_shape(model, "coverage_nakagami");
    const GeometryFrame frame = make_frame(config, x0);
    CoverageEstimate est;
    if (config.n_nodes == 1) {
        est.value = 1.0;
        return est;
    }
    try {
        const auto res = integrate(
            [&](double r) {
                const double weight = pdf_serving_distance(frame, config.n_nodes, r);
                if (weight == 0.0) return 0.0;
                return conditional_coverage_nakagami(frame, config.n_nodes, model, beta, r,
                                                     spec) *
                       weight;
            },
            frame.altitude, frame.w_p, spec.with_breakpoints({frame.w_m}));
        est.value = std::clamp(res.value, 0.0, 1.0);
        est.quad_error = res.error;
    } catch (const NumericalError& e) {
        std::ostringstream msg;
        msg << "coverage_nakagami(N=" << config.n_nodes << ", r_a=" << config.disk_radius
            << " m, h=" << config.altitude << " m, x0=" << x0 << " m, alpha=" << model.alpha
            << ", m=" << model.m_interferer << ", m0=" << model.m_serving << ", beta=" << beta
            << "): " << e.what();
        throw NumericalError(msg.str());
    }
    return est;
}

}  // namespace uavcov
