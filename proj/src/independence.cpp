#include "mvindep/independence.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mvindep/errors.hpp"
#include "mvindep/quadrature.hpp"
#include "mvindep/radial.hpp"
#include "mvindep/specialfn.hpp"

namespace mvindep::independence {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

void check_pair(const ranksigns::StandardizedBlock& b1, const ranksigns::StandardizedBlock& b2) {
    if (b1.signs.rows() != b2.signs.rows())
        throw DomainError("rank statistic: blocks have different sizes");
    if (b1.signs.rows() == 0) throw DomainError("rank statistic: empty blocks");
}

std::vector<double> scores_for(const ranksigns::StandardizedBlock& block,
                               const ScoreFunction& score) {
    const double denom = static_cast<double>(block.ranks.size()) + 1.0;
    std::vector<double> out(block.ranks.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = score(block.ranks[i] / denom);
    return out;
}

// ‖ (1/n) Σ w_i U1i U2i' ‖²_F
double weighted_cross_norm2(const ranksigns::StandardizedBlock& b1,
                            const ranksigns::StandardizedBlock& b2,
                            const std::vector<double>& weights) {
    const auto n = b1.signs.rows();
    const Eigen::Map<const Eigen::VectorXd> w(weights.data(), n);
    const Eigen::MatrixXd a =
        b1.signs.transpose() * w.asDiagonal() * b2.signs / static_cast<double>(n);
    return a.squaredNorm();
}

std::pair<ranksigns::StandardizedBlock, ranksigns::StandardizedBlock> standardize_both(
    const PairedSample& sample, ranksigns::Estimator estimator) {
    const auto n = sample.n();
    if (n < static_cast<std::size_t>(std::max(sample.p(), sample.q()) + 2))
        throw DomainError("rank test: requires n >= max(p, q) + 2");
    auto b1 = ranksigns::standardize(sample.block1(),
                                     ranksigns::estimate(sample.block1(), estimator));
    auto b2 = ranksigns::standardize(sample.block2(),
                                     ranksigns::estimate(sample.block2(), estimator));
    return {std::move(b1), std::move(b2)};
}

// Lower Cholesky factor of a covariance block; degenerate when badly conditioned.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& s, const char* which) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    const double top = eig.eigenvalues().maxCoeff();
    if (!(top > 0.0) || !(eig.eigenvalues().minCoeff() > 1e-12 * top))
        throw DegenerateDataError(std::string("wilks test: ") + which + " is singular");
    return Eigen::LLT<Eigen::MatrixXd>(s).matrixL();
}

}  // namespace

ScoreFunction ScoreFunction::sign() { return {Sign{}, 1.0}; }

ScoreFunction ScoreFunction::wilcoxon() { return {Wilcoxon{}, 1.0 / 3.0}; }

ScoreFunction ScoreFunction::van_der_waerden(int dim) {
    if (dim < 1) throw ModelError("van der Waerden scores: dimension must be >= 1");
    return {VanDerWaerden{dim}, static_cast<double>(dim)};
}

ScoreFunction ScoreFunction::custom(std::string name, std::function<double(double)> eval) {
    if (!eval) throw ModelError("custom score: empty function");
    const sf::Integrand squared{[&eval](double u) {
                                    const double k = eval(u);
                                    return k * k;
                                },
                                true, true};
    const double sigma2 = sf::integrate(squared, 0.0, 1.0, {1e-12, 1e-11, 4000});
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw ModelError("custom score: squared norm must be positive and finite");
    return {Custom{std::move(name), std::move(eval)}, sigma2};
}

double ScoreFunction::operator()(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("score function: requires 0 < u < 1");
    struct Visitor {
        double u;
        double operator()(const Sign&) const { return 1.0; }
        double operator()(const Wilcoxon&) const { return u; }
        double operator()(const VanDerWaerden& v) const {
            return u > 0.5 ? std::sqrt(sf::chi2_quantile_upper(v.dim, 1.0 - u))
                           : std::sqrt(sf::chi2_quantile(v.dim, u));
        }
        double operator()(const Custom& c) const { return c.eval(u); }
    };
    return std::visit(Visitor{u}, kind_);
}

std::string ScoreFunction::name() const {
    struct Visitor {
        std::string operator()(const Sign&) const { return "sign"; }
        std::string operator()(const Wilcoxon&) const { return "wilcoxon"; }
        std::string operator()(const VanDerWaerden& v) const {
            return "vdw(" + std::to_string(v.dim) + ")";
        }
        std::string operator()(const Custom& c) const { return c.name; }
    };
    return std::visit(Visitor{}, kind_);
}

double score_eval(const ScoreFunction& score, double u) { return score(u); }

double score_sigma2(const ScoreFunction& score) { return score.sigma2(); }

Method parse_method(std::string_view name) {
    if (name == "wilks") return Method::Wilks;
    if (name == "sign") return Method::Sign;
    if (name == "wilcoxon") return Method::Wilcoxon;
    if (name == "vdw") return Method::VanDerWaerden;
    throw InputError("unknown test method '" + std::string(name) +
                     "' (expected wilks, sign, wilcoxon or vdw)");
}

std::string_view to_string(Method method) {
    switch (method) {
        case Method::Wilks: return "wilks";
        case Method::Sign: return "sign";
        case Method::Wilcoxon: return "wilcoxon";
        case Method::VanDerWaerden: return "vdw";
    }
    return "unknown";
}

TestResult make_result(double statistic, int df, double alpha, std::string method) {
    check_alpha(alpha);
    TestResult r;
    r.statistic = statistic;
    r.df = df;
    r.alpha = alpha;
    r.method = std::move(method);
    r.critical_value = sf::chi2_quantile(df, 1.0 - alpha);
    r.p_value = std::isinf(statistic) ? 0.0 : sf::chi2_sf(df, statistic);
    r.reject = statistic > r.critical_value;
    return r;
}

TestResult wilks_test(const PairedSample& sample, double alpha) {
    check_alpha(alpha);
    const auto n = sample.n();
    const int p = sample.p();
    const int q = sample.q();
    if (n <= static_cast<std::size_t>(p + q)) throw DomainError("wilks test: requires n > p + q");
    const double nd = static_cast<double>(n);
    const Eigen::MatrixXd c1 = sample.block1().rowwise() - sample.block1().colwise().mean();
    const Eigen::MatrixXd c2 = sample.block2().rowwise() - sample.block2().colwise().mean();
    const Eigen::MatrixXd s11 = c1.transpose() * c1 / nd;
    const Eigen::MatrixXd s22 = c2.transpose() * c2 / nd;
    const Eigen::MatrixXd s12 = c1.transpose() * c2 / nd;
    const Eigen::MatrixXd l11 = covariance_factor(s11, "S11");
    const Eigen::MatrixXd l22 = covariance_factor(s22, "S22");

    // det S / (det S11 det S22) = Π (1 - ρ_i²), ρ_i the canonical correlations.
    const Eigen::MatrixXd left = l11.triangularView<Eigen::Lower>().solve(s12);
    const Eigen::MatrixXd whitened =
        l22.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(whitened);
    double log_ratio = 0.0;
    bool collinear = false;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double rho2 = svd.singularValues()(i) * svd.singularValues()(i);
        if (1.0 - rho2 <= 1e-12) {
            collinear = true;
            break;
        }
        log_ratio += std::log1p(-rho2);
    }
    const double statistic =
        collinear ? std::numeric_limits<double>::infinity() : std::max(0.0, -nd * log_ratio);
    return make_result(statistic, p * q, alpha, "wilks");
}

double rank_score_statistic(const ranksigns::StandardizedBlock& block1,
                            const ranksigns::StandardizedBlock& block2, const ScoreFunction& k1,
                            const ScoreFunction& k2) {
    check_pair(block1, block2);
    const auto a1 = scores_for(block1, k1);
    const auto a2 = scores_for(block2, k2);
    std::vector<double> w(a1.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = a1[i] * a2[i];
    const double n = static_cast<double>(w.size());
    const double pq = static_cast<double>(block1.signs.cols() * block2.signs.cols());
    return n * pq / (k1.sigma2() * k2.sigma2()) * weighted_cross_norm2(block1, block2, w);
}

double vdw_statistic(const ranksigns::StandardizedBlock& block1,
                     const ranksigns::StandardizedBlock& block2) {
    check_pair(block1, block2);
    const auto n = block1.ranks.size();
    const int p = static_cast<int>(block1.signs.cols());
    const int q = static_cast<int>(block2.signs.cols());
    const radial::RadialModel gauss_p(p, radial::Gaussian{1.0});
    const radial::RadialModel gauss_q(q, radial::Gaussian{1.0});
    const double denom = static_cast<double>(n) + 1.0;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = gauss_p.quantile(block1.ranks[i] / denom) * gauss_q.quantile(block2.ranks[i] / denom);
    return static_cast<double>(n) * weighted_cross_norm2(block1, block2, w);
}

double wilcoxon_statistic(const ranksigns::StandardizedBlock& block1,
                          const ranksigns::StandardizedBlock& block2) {
    check_pair(block1, block2);
    const auto n = block1.ranks.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = static_cast<double>(block1.ranks[i]) * static_cast<double>(block2.ranks[i]);
    const double nd = static_cast<double>(n);
    const double pq = static_cast<double>(block1.signs.cols() * block2.signs.cols());
    return 9.0 * nd * pq / std::pow(nd + 1.0, 4) * weighted_cross_norm2(block1, block2, w);
}

double sign_statistic(const ranksigns::StandardizedBlock& block1,
                      const ranksigns::StandardizedBlock& block2) {
    check_pair(block1, block2);
    const std::vector<double> w(block1.ranks.size(), 1.0);
    const double nd = static_cast<double>(w.size());
    const double pq = static_cast<double>(block1.signs.cols() * block2.signs.cols());
    return nd * pq * weighted_cross_norm2(block1, block2, w);
}

TestResult rank_score_test(const PairedSample& sample, const ScoreFunction& k1,
                           const ScoreFunction& k2, ranksigns::Estimator estimator, double alpha) {
    check_alpha(alpha);
    const auto [b1, b2] = standardize_both(sample, estimator);
    return make_result(rank_score_statistic(b1, b2, k1, k2), sample.p() * sample.q(), alpha,
                       "rank-score(" + k1.name() + "," + k2.name() + ")");
}

TestResult run_rank_test(const ranksigns::StandardizedBlock& block1,
                         const ranksigns::StandardizedBlock& block2, Method method, double alpha) {
    const int df = static_cast<int>(block1.signs.cols() * block2.signs.cols());
    switch (method) {
        case Method::Sign: return make_result(sign_statistic(block1, block2), df, alpha, "sign");
        case Method::Wilcoxon:
            return make_result(wilcoxon_statistic(block1, block2), df, alpha, "wilcoxon");
        case Method::VanDerWaerden:
            return make_result(vdw_statistic(block1, block2), df, alpha, "vdw");
        case Method::Wilks: break;
    }
    throw DomainError("run_rank_test: wilks is not a rank test");
}

TestResult vdw_test(const PairedSample& sample, ranksigns::Estimator estimator, double alpha) {
    check_alpha(alpha);
    const auto [b1, b2] = standardize_both(sample, estimator);
    return run_rank_test(b1, b2, Method::VanDerWaerden, alpha);
}

TestResult wilcoxon_test(const PairedSample& sample, ranksigns::Estimator estimator, double alpha) {
    check_alpha(alpha);
    const auto [b1, b2] = standardize_both(sample, estimator);
    return run_rank_test(b1, b2, Method::Wilcoxon, alpha);
}

TestResult sign_test(const PairedSample& sample, ranksigns::Estimator estimator, double alpha) {
    check_alpha(alpha);
    const auto [b1, b2] = standardize_both(sample, estimator);
    return run_rank_test(b1, b2, Method::Sign, alpha);
}

TestResult run_test(const PairedSample& sample, Method method, ranksigns::Estimator estimator,
                    double alpha) {
    switch (method) {
        case Method::Wilks: return wilks_test(sample, alpha);
        case Method::Sign: return sign_test(sample, estimator, alpha);
        case Method::Wilcoxon: return wilcoxon_test(sample, estimator, alpha);
        case Method::VanDerWaerden: return vdw_test(sample, estimator, alpha);
    }
    throw DomainError("run_test: unknown method");
}

}  // namespace mvindep::independence
