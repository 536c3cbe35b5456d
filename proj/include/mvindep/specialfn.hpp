#pragma once

// Special functions and distribution functions used throughout the library.
// Everything here is pure and reentrant.

namespace mvindep::sf {

/// Largest argument accepted by bessel_j.
inline constexpr double kBesselMaxArgument = 60.0;

/// ln Γ(x) for x > 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed without cancellation.
double reg_upper_gamma(double a, double x);

/// Chi-square distribution function Ψ_k.
double chi2_cdf(int k, double x);

/// Chi-square survival function 1 - Ψ_k, accurate in the upper tail.
double chi2_sf(int k, double x);

/// Ψ_k⁻¹(p) for p in [0, 1).
double chi2_quantile(int k, double p);

/// Ψ_k⁻¹(1 - tail) for tail in (0, 1]; keeps full relative accuracy for tiny tails.
double chi2_quantile_upper(int k, double tail);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// Fisher F(d1, d2) distribution function. Degrees of freedom may be fractional.
double f_cdf(double d1, double d2, double x);

/// Standard normal quantile (Wichura's AS 241).
double normal_quantile(double p);

/// Bessel function of the first kind J_ν(x) for ν ≥ 0 and 0 ≤ x ≤ kBesselMaxArgument,
/// by the ascending power series.
double bessel_j(double nu, double x);

}  // namespace mvindep::sf
