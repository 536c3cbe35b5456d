#include "mvindep/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "mvindep/errors.hpp"
#include "mvindep/parallel.hpp"
#include "mvindep/specialfn.hpp"

namespace mvindep::montecarlo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t delta_key(double delta) {
    if (delta == 0.0) delta = 0.0;  // -0 and +0 share streams
    return std::bit_cast<std::uint64_t>(delta);
}

bool is_rank_test(independence::Method m) { return m != independence::Method::Wilks; }

// Type-7 sample quantile of sorted data.
double sorted_quantile(const std::vector<double>& sorted, double prob) {
    if (sorted.empty()) return kNaN;
    const double h = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0 || sorted[lo] == sorted[hi]) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

radial::KonijnModel KonijnSpec::model() const {
    return radial::KonijnModel(radial::RadialModel(p, f), radial::RadialModel(q, g), delta, n,
                               mixing);
}

void SimConfig::validate() const {
    if (replications < 1) throw DomainError("simulation: replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("simulation: alpha must lie in (0, 1)");
    if (tests.empty()) throw DomainError("simulation: no tests configured");
    if (konijn.p < 1 || konijn.q < 1) throw DomainError("simulation: p and q must be >= 1");
    if (!std::isfinite(konijn.delta)) throw DomainError("simulation: delta must be finite");
    const bool any_rank = std::any_of(tests.begin(), tests.end(), is_rank_test);
    const auto need_rank = static_cast<std::size_t>(std::max(konijn.p, konijn.q) + 2);
    if (any_rank && konijn.n < need_rank)
        throw DomainError("simulation: rank tests need n >= max(p, q) + 2");
    if (konijn.n <= static_cast<std::size_t>(konijn.p + konijn.q) &&
        std::find(tests.begin(), tests.end(), independence::Method::Wilks) != tests.end())
        throw DomainError("simulation: the Wilks test needs n > p + q");
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) return {0.0, 1.0};
    const double m = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / m;
    const double z2 = z * z;
    const double center = (phat + z2 / (2.0 * m)) / (1.0 + z2 / m);
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / m + z2 / (4.0 * m * m)) / (1.0 + z2 / m);
    return {std::max(0.0, std::min(center - half, phat)), std::min(1.0, std::max(center + half, phat))};
}

double ks_distance_chi2(std::vector<double> statistics, int df) {
    if (statistics.empty()) return kNaN;
    std::sort(statistics.begin(), statistics.end());
    const double m = static_cast<double>(statistics.size());
    double d = 0.0;
    for (std::size_t i = 0; i < statistics.size(); ++i) {
        const double x = statistics[i];
        const double cdf = std::isinf(x) ? 1.0 : sf::chi2_cdf(df, std::max(0.0, x));
        d = std::max({d, static_cast<double>(i + 1) / m - cdf, cdf - static_cast<double>(i) / m});
    }
    return d;
}

double ks_critical_1pct(std::size_t m) { return 1.6276 / std::sqrt(static_cast<double>(m)); }

const TestSummary& SimReport::summary(independence::Method method) const {
    for (const auto& t : tests)
        if (t.method == method) return t;
    throw DomainError("simulation report: test '" + std::string(independence::to_string(method)) +
                      "' was not run");
}

std::vector<std::vector<double>> simulate_statistics(const SimConfig& config) {
    config.validate();
    const radial::KonijnModel model = config.konijn.model();
    const RandomStream study_stream =
        RandomStream(config.seed).substream(delta_key(config.konijn.delta));
    const std::size_t reps = config.replications;
    const std::size_t nt = config.tests.size();
    std::vector<std::vector<double>> stats(nt, std::vector<double>(reps, kNaN));
    const bool any_rank = std::any_of(config.tests.begin(), config.tests.end(), is_rank_test);

    detail::parallel_for(
        reps,
        [&](std::size_t r) {
            const PairedSample sample = radial::sample_konijn(model, study_stream.substream(r));
            std::optional<std::pair<ranksigns::StandardizedBlock, ranksigns::StandardizedBlock>>
                blocks;
            if (any_rank) {
                try {
                    auto b1 = ranksigns::standardize(
                        sample.block1(), ranksigns::estimate(sample.block1(), config.estimator));
                    auto b2 = ranksigns::standardize(
                        sample.block2(), ranksigns::estimate(sample.block2(), config.estimator));
                    blocks.emplace(std::move(b1), std::move(b2));
                } catch (const DegenerateDataError&) {
                } catch (const ConvergenceError&) {
                }
            }
            for (std::size_t t = 0; t < nt; ++t) {
                const auto method = config.tests[t];
                try {
                    if (method == independence::Method::Wilks) {
                        stats[t][r] = independence::wilks_test(sample, config.alpha).statistic;
                    } else if (blocks) {
                        stats[t][r] = independence::run_rank_test(blocks->first, blocks->second,
                                                                  method, config.alpha)
                                          .statistic;
                    }
                } catch (const DegenerateDataError&) {
                } catch (const ConvergenceError&) {
                }
            }
        },
        config.threads);
    return stats;
}

SimReport run_study(const SimConfig& config) {
    const auto stats = simulate_statistics(config);
    SimReport report;
    report.config = config;
    report.df = config.konijn.p * config.konijn.q;
    const double critical = sf::chi2_quantile(report.df, 1.0 - config.alpha);
    for (std::size_t t = 0; t < config.tests.size(); ++t) {
        TestSummary s;
        s.method = config.tests[t];
        std::vector<double> ok;
        ok.reserve(stats[t].size());
        for (double x : stats[t]) {
            if (std::isnan(x)) continue;
            ok.push_back(x);
            if (x > critical) ++s.rejections;
        }
        s.successes = ok.size();
        s.failures = stats[t].size() - ok.size();
        if (static_cast<double>(s.failures) > 0.01 * static_cast<double>(config.replications))
            throw DegenerateDataError("simulation: " + std::to_string(s.failures) + " of " +
                                      std::to_string(config.replications) + " replicates failed for " +
                                      std::string(independence::to_string(s.method)));
        s.rate = s.successes ? static_cast<double>(s.rejections) / s.successes : kNaN;
        s.ci = wilson_interval(s.rejections, s.successes);
        s.ci_half_width = 0.5 * (s.ci.high - s.ci.low);
        std::sort(ok.begin(), ok.end());
        for (double prob : kReportedProbabilities)
            s.quantiles.push_back({prob, sorted_quantile(ok, prob), sf::chi2_quantile(report.df, prob)});
        s.ks_distance = ks_distance_chi2(ok, report.df);
        s.ks_critical = ks_critical_1pct(ok.size());
        report.tests.push_back(std::move(s));
    }
    return report;
}

std::vector<SimReport> run_power_curve(const SimConfig& config, const std::vector<double>& deltas) {
    if (deltas.empty()) throw DomainError("power curve: no delta values");
    std::vector<SimReport> out;
    out.reserve(deltas.size());
    for (double delta : deltas) {
        SimConfig c = config;
        c.konijn.delta = delta;
        out.push_back(run_study(c));
    }
    return out;
}

}  // namespace mvindep::montecarlo
