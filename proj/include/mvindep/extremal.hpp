#pragma once

// The least-favourable radial law for Wilcoxon scores. Its radial distribution
// function is H(r) = √r J_ν(r) / (√c J_ν(c)) on (0, c], with ν = √(2k-1)/2 and
// c = c_k the first stationary point of √x J_ν(x).

namespace mvindep::efficiency {

/// c_k: smallest x > 0 where d/dx [√x J_ν(x)] vanishes, ν = √(2k-1)/2.
double bessel_critical(int k);

/// Bessel order ν = √(2k-1)/2 attached to dimension k.
double extremal_order(int k);

/// The unit-scale law h_{k,1}, with constants precomputed once.
class ExtremalLaw {
public:
    explicit ExtremalLaw(int k);

    int dim() const noexcept { return k_; }
    double order() const noexcept { return nu_; }
    double cutoff() const noexcept { return cutoff_; }
    /// ω_k = (2c² + k - 1)/(8c): the scale σ at which D_k(I, h_{k,σ}) = 1.
    double omega() const noexcept;

    /// H(r).
    double cdf(double r) const;
    /// 1 - H(r), accurate near the cutoff.
    double tail(double r) const;
    /// H'(r), the density of the radius.
    double cdf_derivative(double r) const;
    /// h(r) = H'(r) / r^{k-1}; normalized so that ∫ r^{k-1} h = 1.
    double density(double r) const;
    /// -h'(r)/h(r) on (0, c).
    double location_score(double r) const;
    /// H⁻¹(u) for u in (0, 1).
    double quantile(double u) const;
    /// H⁻¹(1 - tail) for tail in (0, 1); relative accuracy in the gap c - r.
    double quantile_upper(double tail) const;

private:
    // ((ν + 1/2)/r) J_ν(r) - J_{ν+1}(r) = r^{-1/2} d/dr[√r J_ν(r)].
    double stationarity(double r) const;

    int k_;
    double nu_;
    double cutoff_;
    double norm_;       // √c J_ν(c)
    double curvature_;  // second derivative of √r J_ν(r) at c
};

/// H_{k,1}(r).
double extremal_radial_cdf(int k, double r);

/// h_{k,σ}(r) = h_{k,1}(σ r); zero beyond the support.
double extremal_radial_density(int k, double sigma, double r);

/// Location score of h_{k,σ}. Throws DomainError outside (0, c_k/σ).
double extremal_location_score(int k, double sigma, double r);

}  // namespace mvindep::efficiency
