#pragma once

namespace uavcov {

/// Regularized upper incomplete gamma Q(a, x) = Γ(a, x) / Γ(a).
///
/// Series for the lower ratio when x < a + 1, modified-Lentz continued
/// fraction otherwise; both stop at a relative increment of 1e-14.
/// Throws std::domain_error for a <= 0 or x < 0, NumericalError if the
/// iteration does not converge.
double regularized_upper_gamma(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double regularized_lower_gamma(double a, double x);

double erf(double x);

/// Gaussian tail Q(x) = 1 - Φ(x).
double q_function(double x);

/// Standard normal CDF Φ(x).
double normal_cdf(double x);

struct AsymptoticExpansionResult
{
    double value = 0.0;          // approximates Γ(m0, m0 z) / Γ(m0)
    int order_used = 0;          // retained terms of the expansion
    double error_bound_hint = 0.0;
};

/// Large-m0 expansion of Γ(m0, m0 z)/Γ(m0) in y = sqrt(m0/2)(z - 1):
///   1/2 - erf(y)/2 + (1/3) sqrt(2/(m0 π)) (1 + y^2) exp(-y^2).
/// Only valid for m0 >= 10; smaller shapes throw std::domain_error.
AsymptoticExpansionResult asymptotic_gamma_ratio(double m0, double z);

/// Pointwise limit of Γ(m0, m0 z)/Γ(m0) as m0 -> ∞: 1 below 1, 1/2 at 1
/// (within 1e-12), 0 above.
double nofading_limit_indicator(double z);

}  // namespace uavcov
