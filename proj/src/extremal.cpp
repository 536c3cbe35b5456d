#include "mvindep/extremal.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "mvindep/errors.hpp"
#include "mvindep/quadrature.hpp"
#include "mvindep/specialfn.hpp"

namespace mvindep::efficiency {

namespace {

constexpr double kScanStep = 0.05;

double stationarity_of(double nu, double x) {
    return (nu + 0.5) / x * sf::bessel_j(nu, x) - sf::bessel_j(nu + 1.0, x);
}

// 20-point Gauss–Legendre rule on [-1, 1], by Newton iteration on P_20.
struct LegendreRule {
    static constexpr int n = 20;
    std::array<double, n> nodes{};
    std::array<double, n> weights{};
};

const LegendreRule& legendre20() {
    static const LegendreRule rule = [] {
        LegendreRule r;
        constexpr int n = LegendreRule::n;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-16) break;
            }
            r.nodes[i] = -x;
            r.nodes[n - 1 - i] = x;
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.weights[i] = w;
            r.weights[n - 1 - i] = w;
        }
        return r;
    }();
    return rule;
}

void check_dim(int k) {
    if (k < 1) throw DomainError("extremal law: dimension must be >= 1");
}

}  // namespace

double extremal_order(int k) {
    check_dim(k);
    return 0.5 * std::sqrt(2.0 * k - 1.0);
}

double bessel_critical(int k) {
    const double nu = extremal_order(k);
    auto g = [nu](double x) { return stationarity_of(nu, x); };
    double x = kScanStep;
    double gx = g(x);
    while (x + kScanStep <= sf::kBesselMaxArgument) {
        const double next = x + kScanStep;
        const double gn = g(next);
        if ((gx > 0.0) != (gn > 0.0) || gn == 0.0) return sf::find_root(g, x, next, 1e-14);
        x = next;
        gx = gn;
    }
    throw RangeError("bessel_critical: no stationary point below x = 60");
}

ExtremalLaw::ExtremalLaw(int k)
    : k_(k), nu_(extremal_order(k)), cutoff_(bessel_critical(k)) {
    norm_ = std::sqrt(cutoff_) * sf::bessel_j(nu_, cutoff_);
    curvature_ = -sf::bessel_j(nu_, cutoff_) * (cutoff_ * cutoff_ - nu_ * nu_ + 0.25) /
                 std::pow(cutoff_, 1.5);
}

double ExtremalLaw::omega() const noexcept {
    return (2.0 * cutoff_ * cutoff_ + k_ - 1.0) / (8.0 * cutoff_);
}

double ExtremalLaw::stationarity(double r) const {
    // Close to the cutoff the two terms cancel; use d/dr[√r J_ν] ≈ S''(c)(r - c) instead.
    if (cutoff_ - r < 1e-6 * cutoff_) return curvature_ * (r - cutoff_) / std::sqrt(r);
    return stationarity_of(nu_, r);
}

double ExtremalLaw::cdf(double r) const {
    if (!(r > 0.0)) return 0.0;
    if (r >= cutoff_) return 1.0;
    return std::sqrt(r) * sf::bessel_j(nu_, r) / norm_;
}

double ExtremalLaw::cdf_derivative(double r) const {
    if (!(r > 0.0) || r >= cutoff_) return 0.0;
    return std::sqrt(r) * stationarity(r) / norm_;
}

double ExtremalLaw::tail(double r) const {
    if (!(r > 0.0)) return 1.0;
    if (r >= cutoff_) return 0.0;
    const double lower = cdf(r);
    if (lower < 0.5) return 1.0 - lower;
    // ∫_r^c H'(t) dt: no cancellation when H(r) is close to one.
    const auto& rule = legendre20();
    const double center = 0.5 * (cutoff_ + r);
    const double half = 0.5 * (cutoff_ - r);
    double sum = 0.0;
    for (int i = 0; i < LegendreRule::n; ++i)
        sum += rule.weights[i] * cdf_derivative(center + half * rule.nodes[i]);
    return sum * half;
}

double ExtremalLaw::density(double r) const {
    if (!(r > 0.0) || r >= cutoff_) return 0.0;
    return cdf_derivative(r) / std::pow(r, k_ - 1);
}

double ExtremalLaw::location_score(double r) const {
    if (!(r > 0.0) || !(r < cutoff_))
        throw DomainError("extremal location score: r outside the support (0, c_k)");
    // H'' = -J_ν(r) (r² - ν² + 1/4) / (r^{3/2} N), from Bessel's equation.
    const double j = sf::bessel_j(nu_, r);
    return (k_ - 1.0) / r + (j / r) * (r * r - nu_ * nu_ + 0.25) / (r * stationarity(r));
}

double ExtremalLaw::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("extremal quantile: requires 0 < u < 1");
    if (u > 0.5) return quantile_upper(1.0 - u);
    const double log_u = std::log(u);
    // Solve ln H(e^s) = ln u; ln H is close to linear in s near the origin.
    auto g = [&](double s) { return std::log(cdf(std::exp(s))) - log_u; };
    const double hi = std::log(cutoff_);
    double lo = hi - 40.0;
    while (g(lo) > 0.0) lo -= 40.0;
    return std::exp(sf::find_root(g, lo, hi, 1e-14));
}

double ExtremalLaw::quantile_upper(double tail_prob) const {
    if (!(tail_prob > 0.0 && tail_prob < 1.0))
        throw DomainError("extremal quantile: requires 0 < tail < 1");
    if (tail_prob > 0.5) return quantile(1.0 - tail_prob);
    const double log_t = std::log(tail_prob);
    // Solve in s = ln(c - r) so that the gap to the cutoff is resolved relatively.
    auto g = [&](double s) { return std::log(tail(cutoff_ - std::exp(s))) - log_t; };
    const double hi = std::log(cutoff_);
    double lo = hi - 40.0;
    while (g(lo) > 0.0) lo -= 40.0;
    return cutoff_ - std::exp(sf::find_root(g, lo, hi, 1e-14));
}

double extremal_radial_cdf(int k, double r) {
    if (!(r >= 0.0)) throw DomainError("extremal_radial_cdf: requires r >= 0");
    return ExtremalLaw(k).cdf(r);
}

double extremal_radial_density(int k, double sigma, double r) {
    if (!(sigma > 0.0)) throw DomainError("extremal_radial_density: sigma must be > 0");
    if (!(r > 0.0)) throw DomainError("extremal_radial_density: requires r > 0");
    return ExtremalLaw(k).density(sigma * r);
}

double extremal_location_score(int k, double sigma, double r) {
    if (!(sigma > 0.0)) throw DomainError("extremal_location_score: sigma must be > 0");
    return sigma * ExtremalLaw(k).location_score(sigma * r);
}

}  // namespace mvindep::efficiency
