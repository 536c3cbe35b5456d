#pragma once

// Tests of independence between the two blocks of a PairedSample: Wilks'
// Gaussian likelihood-ratio test and the rank-score statistics
//
//   T = n p q / (σ²_{K1} σ²_{K2}) · ‖ ave_i { K1(R1i/(n+1)) K2(R2i/(n+1)) U1i U2i' } ‖²_F
//
// built on standardized spatial signs U and ranks R of the radii. All
// statistics are referred to χ²_{pq}.

#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include "mvindep/ranksigns.hpp"
#include "mvindep/sample.hpp"

namespace mvindep::independence {

/// Score function K on (0, 1) together with σ²_K = ∫₀¹ K².
class ScoreFunction {
public:
    struct Sign {};
    struct Wilcoxon {};
    struct VanDerWaerden {
        int dim;
    };
    struct Custom {
        std::string name;
        std::function<double(double)> eval;
    };
    using Kind = std::variant<Sign, Wilcoxon, VanDerWaerden, Custom>;

    static ScoreFunction sign();
    static ScoreFunction wilcoxon();
    /// Normal scores √(Ψ_k⁻¹(u)) for a block of dimension k.
    static ScoreFunction van_der_waerden(int dim);
    /// σ² is computed by quadrature; throws ModelError when it is not positive and finite.
    static ScoreFunction custom(std::string name, std::function<double(double)> eval);

    const Kind& kind() const noexcept { return kind_; }
    double sigma2() const noexcept { return sigma2_; }
    /// K(u); throws DomainError outside (0, 1).
    double operator()(double u) const;
    std::string name() const;

private:
    ScoreFunction(Kind kind, double sigma2) : kind_(std::move(kind)), sigma2_(sigma2) {}

    Kind kind_;
    double sigma2_;
};

double score_eval(const ScoreFunction& score, double u);
double score_sigma2(const ScoreFunction& score);

enum class Method { Wilks, Sign, Wilcoxon, VanDerWaerden };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

struct TestResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    double critical_value = 0.0;
    bool reject = false;
    std::string method;
};

/// Assembles a result against χ²_df: p-value, critical value and decision
/// (reject iff statistic > critical value).
TestResult make_result(double statistic, int df, double alpha, std::string method);

/// -n ln(det S / (det S11 det S22)) from the partitioned covariance (divisor n).
/// Perfect cross-block collinearity yields +∞ with p-value 0.
TestResult wilks_test(const PairedSample& sample, double alpha);

/// Generic rank-score statistic on already standardized blocks.
double rank_score_statistic(const ranksigns::StandardizedBlock& block1,
                            const ranksigns::StandardizedBlock& block2, const ScoreFunction& k1,
                            const ScoreFunction& k2);

/// n ‖ave{Φ̃_p⁻¹(R1/(n+1)) Φ̃_q⁻¹(R2/(n+1)) U1 U2'}‖².
double vdw_statistic(const ranksigns::StandardizedBlock& block1,
                     const ranksigns::StandardizedBlock& block2);
/// 9npq/(n+1)⁴ ‖ave{R1 R2 U1 U2'}‖² on integer ranks.
double wilcoxon_statistic(const ranksigns::StandardizedBlock& block1,
                          const ranksigns::StandardizedBlock& block2);
/// npq ‖ave{U1 U2'}‖².
double sign_statistic(const ranksigns::StandardizedBlock& block1,
                      const ranksigns::StandardizedBlock& block2);

TestResult rank_score_test(const PairedSample& sample, const ScoreFunction& k1,
                           const ScoreFunction& k2, ranksigns::Estimator estimator, double alpha);
TestResult vdw_test(const PairedSample& sample, ranksigns::Estimator estimator, double alpha);
TestResult wilcoxon_test(const PairedSample& sample, ranksigns::Estimator estimator, double alpha);
TestResult sign_test(const PairedSample& sample, ranksigns::Estimator estimator, double alpha);

/// Any of the four named tests. The estimator only affects rank-score tests.
TestResult run_test(const PairedSample& sample, Method method, ranksigns::Estimator estimator,
                    double alpha);

/// Rank-score test from blocks standardized once and shared across methods.
TestResult run_rank_test(const ranksigns::StandardizedBlock& block1,
                         const ranksigns::StandardizedBlock& block2, Method method, double alpha);

}  // namespace mvindep::independence
