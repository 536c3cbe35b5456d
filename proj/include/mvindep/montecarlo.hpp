#pragma once

// Seeded size and power studies under Konijn alternatives.
//
// Replicate r of a study draws its sample from the stream
//   RandomStream(seed).substream(key(δ)).substream(r)
// where key(δ) depends only on the bit pattern of δ. A power curve is a loop of
// studies, so each δ has its own streams and the δ = 0 entry equals the null study.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mvindep/independence.hpp"
#include "mvindep/radial.hpp"
#include "mvindep/ranksigns.hpp"

namespace mvindep::montecarlo {

inline constexpr std::uint64_t kDefaultSeed = 20080601;

struct KonijnSpec {
    int p = 2;
    int q = 2;
    std::size_t n = 200;
    radial::RadialFamily f = radial::Gaussian{};
    radial::RadialFamily g = radial::Gaussian{};
    double delta = 0.0;
    std::optional<Eigen::MatrixXd> mixing;  // defaults to e₁e₁'

    radial::KonijnModel model() const;
};

struct SimConfig {
    KonijnSpec konijn;
    std::vector<independence::Method> tests{independence::Method::Wilks,
                                            independence::Method::Sign,
                                            independence::Method::Wilcoxon,
                                            independence::Method::VanDerWaerden};
    double alpha = 0.05;
    std::size_t replications = 1000;
    ranksigns::Estimator estimator = ranksigns::Estimator::Tyler;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;  // 0 = hardware concurrency; never affects results

    /// Throws DomainError on an invalid configuration.
    void validate() const;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// Kolmogorov–Smirnov distance between a sample and the χ²_df distribution.
double ks_distance_chi2(std::vector<double> statistics, int df);

/// Asymptotic 1% critical value of the one-sample KS distance, 1.6276/√m.
double ks_critical_1pct(std::size_t m);

inline const std::vector<double> kReportedProbabilities{0.01, 0.05, 0.10, 0.25, 0.50,
                                                        0.75, 0.90, 0.95, 0.99};

struct QuantileRow {
    double probability = 0.0;
    double empirical = 0.0;
    double chi2 = 0.0;
};

struct TestSummary {
    independence::Method method = independence::Method::Wilks;
    std::size_t successes = 0;  // denominator of the rate
    std::size_t failures = 0;
    std::size_t rejections = 0;
    double rate = 0.0;
    Interval ci;
    double ci_half_width = 0.0;
    std::vector<QuantileRow> quantiles;
    double ks_distance = 0.0;
    double ks_critical = 0.0;
};

struct SimReport {
    SimConfig config;
    int df = 0;
    std::vector<TestSummary> tests;

    const TestSummary& summary(independence::Method method) const;
};

/// Runs every configured test on each replicate. Rank tests share one
/// standardization per replicate. Replicates that fail with a degeneracy or
/// convergence error are excluded from the failing test's denominator; more
/// than 1% failures for any test throws DegenerateDataError.
SimReport run_study(const SimConfig& config);

/// One study per δ, everything else shared.
std::vector<SimReport> run_power_curve(const SimConfig& config, const std::vector<double>& deltas);

/// Raw per-replicate statistics (NaN where the test failed), indexed [test][replicate].
std::vector<std::vector<double>> simulate_statistics(const SimConfig& config);

}  // namespace mvindep::montecarlo
