#include "mvindep/radial.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mvindep/errors.hpp"
#include "mvindep/quadrature.hpp"
#include "mvindep/specialfn.hpp"

namespace mvindep::radial {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string shortest(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_positive(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end || !(value > 0.0) || !std::isfinite(value))
        throw InputError("family: invalid " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

// Solves ln F(e^s) = target for s, F increasing in s, F(e^0) = 1 at the top end.
double solve_log_probability(const std::function<double(double)>& prob, double log_target) {
    auto g = [&](double s) { return std::log(prob(std::exp(s))) - log_target; };
    double lo = -40.0;
    while (g(lo) > 0.0) lo -= 40.0;
    return std::exp(sf::find_root(g, lo, 0.0, 1e-14));
}

}  // namespace

RadialFamily parse_family(std::string_view text) {
    const auto colon = text.find(':');
    const auto name = text.substr(0, colon);
    const bool has_arg = colon != std::string_view::npos;
    const auto arg = has_arg ? text.substr(colon + 1) : std::string_view{};
    if (name == "gauss")
        return Gaussian{has_arg ? parse_positive(arg, "gauss scale") : 1.0};
    if (name == "t") {
        if (!has_arg) throw InputError("family: 't' needs degrees of freedom, e.g. t:3");
        return StudentT{parse_positive(arg, "t degrees of freedom"), 1.0};
    }
    if (name == "extremal")
        return Extremal{has_arg ? parse_positive(arg, "extremal sigma") : 1.0};
    throw InputError("family: unknown radial family '" + std::string(text) + "'");
}

std::string format_family(const RadialFamily& family) {
    return std::visit(
        Overloaded{
            [](const Gaussian& g) {
                return g.scale == 1.0 ? std::string("gauss") : "gauss:" + shortest(g.scale);
            },
            [](const StudentT& t) {
                std::string s = "t:" + shortest(t.nu);
                if (t.scale != 1.0) s += " (scale " + shortest(t.scale) + ")";
                return s;
            },
            [](const Extremal& e) {
                return e.sigma == 1.0 ? std::string("extremal") : "extremal:" + shortest(e.sigma);
            },
            [](const Custom& c) { return c.name.empty() ? std::string("custom") : c.name; },
        },
        family);
}

RadialModel::RadialModel(int k, RadialFamily family) : k_(k), family_(std::move(family)) {
    if (k_ < 1) throw ModelError("radial model: dimension must be >= 1");
    std::visit(
        Overloaded{
            [](const Gaussian& g) {
                if (!(g.scale > 0.0) || !std::isfinite(g.scale))
                    throw ModelError("gaussian family: scale must be > 0");
            },
            [](const StudentT& t) {
                if (!(t.nu > 2.0) || !std::isfinite(t.nu))
                    throw ModelError("student family: requires nu > 2 (finite variance)");
                if (!(t.scale > 0.0) || !std::isfinite(t.scale))
                    throw ModelError("student family: scale must be > 0");
            },
            [this](const Extremal& e) {
                if (!(e.sigma > 0.0) || !std::isfinite(e.sigma))
                    throw ModelError("extremal family: sigma must be > 0");
                extremal_ = std::make_shared<const efficiency::ExtremalLaw>(k_);
            },
            [this](const Custom& c) {
                if (!c.density || !c.score)
                    throw ModelError("custom family: density and score are both required");
                if (!(k_ + 1.0 < c.moment_bound))
                    throw ModelError("custom family: declared moments do not cover order k+1");
                // μ_{k-1;f} = ∫_0^∞ r^{k-1} f(r) dr, folded onto (0, 1) by r = t/(1-t).
                const int k = k_;
                sf::Integrand integrand{[&c, k](double t) {
                                            const double r = t / (1.0 - t);
                                            return std::pow(r, k - 1) * c.density(r) /
                                                   ((1.0 - t) * (1.0 - t));
                                        },
                                        true, true};
                custom_norm_ = sf::integrate(integrand, 0.0, 1.0, {1e-13, 1e-12, 4000});
                if (!(custom_norm_ > 0.0) || !std::isfinite(custom_norm_))
                    throw ModelError("custom family: density is not normalizable");
            },
        },
        family_);
}

double RadialModel::density(double r) const {
    if (!(r > 0.0)) throw DomainError("density: requires r > 0");
    return std::visit(
        Overloaded{
            [r](const Gaussian& g) {
                const double s = g.scale * r;
                return std::exp(-0.5 * s * s);
            },
            [r, this](const StudentT& t) {
                const double s = t.scale * r;
                return std::pow(1.0 + s * s / t.nu, -0.5 * (k_ + t.nu));
            },
            [r, this](const Extremal& e) { return extremal_->density(e.sigma * r); },
            [r](const Custom& c) { return c.density(r); },
        },
        family_);
}

double RadialModel::location_score(double r) const {
    if (!(r > 0.0)) throw DomainError("location_score: requires r > 0");
    return std::visit(
        Overloaded{
            [r](const Gaussian& g) { return g.scale * g.scale * r; },
            [r, this](const StudentT& t) {
                const double s = t.scale * r;
                return t.scale * (k_ + t.nu) * s / (t.nu + s * s);
            },
            [r, this](const Extremal& e) {
                return e.sigma * extremal_->location_score(e.sigma * r);
            },
            [r](const Custom& c) { return c.score(r); },
        },
        family_);
}

double RadialModel::custom_mass(double r) const {
    const auto& c = std::get<Custom>(family_);
    const int k = k_;
    sf::Integrand integrand{[&c, k](double t) { return std::pow(t, k - 1) * c.density(t); }, true,
                            false};
    return sf::integrate(integrand, 0.0, r, {1e-14, 1e-12, 4000}) / custom_norm_;
}

double RadialModel::cdf(double r) const {
    if (!(r >= 0.0)) throw DomainError("radial cdf: requires r >= 0");
    if (r == 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [r, this](const Gaussian& g) {
                const double s = g.scale * r;
                return sf::chi2_cdf(k_, s * s);
            },
            [r, this](const StudentT& t) {
                const double s = t.scale * r;
                return sf::f_cdf(k_, t.nu, s * s / k_);
            },
            [r, this](const Extremal& e) { return extremal_->cdf(e.sigma * r); },
            [r, this](const Custom&) {
                if (std::isinf(r)) return 1.0;
                return std::min(1.0, custom_mass(r));
            },
        },
        family_);
}

double RadialModel::tail(double r) const {
    if (!(r >= 0.0)) throw DomainError("radial tail: requires r >= 0");
    if (r == 0.0) return 1.0;
    return std::visit(
        Overloaded{
            [r, this](const Gaussian& g) {
                const double s = g.scale * r;
                return sf::chi2_sf(k_, s * s);
            },
            [r, this](const StudentT& t) {
                const double s = t.scale * r;
                if (std::isinf(s)) return 0.0;
                return sf::reg_inc_beta(0.5 * t.nu, 0.5 * k_, t.nu / (t.nu + s * s));
            },
            [r, this](const Extremal& e) { return extremal_->tail(e.sigma * r); },
            [r, this](const Custom&) { return std::max(0.0, 1.0 - cdf(r)); },
        },
        family_);
}

double RadialModel::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("radial quantile: requires 0 < u < 1");
    if (u > 0.5 && !std::holds_alternative<Custom>(family_)) return quantile_upper(1.0 - u);
    return std::visit(
        Overloaded{
            [u, this](const Gaussian& g) { return std::sqrt(sf::chi2_quantile(k_, u)) / g.scale; },
            [u, this](const StudentT& t) {
                // y = s²/(s² + ν) solves I_y(k/2, ν/2) = u.
                const double a = 0.5 * k_;
                const double b = 0.5 * t.nu;
                const double y = solve_log_probability(
                    [a, b](double y) { return sf::reg_inc_beta(a, b, y); }, std::log(u));
                return std::sqrt(t.nu * y / (1.0 - y)) / t.scale;
            },
            [u, this](const Extremal& e) { return extremal_->quantile(u) / e.sigma; },
            [u, this](const Custom&) {
                double hi = 1.0;
                while (cdf(hi) < u) hi *= 2.0;
                return sf::find_root([&](double r) { return cdf(r) - u; }, 0.0, hi, 1e-13 * hi);
            },
        },
        family_);
}

double RadialModel::quantile_upper(double t_prob) const {
    if (!(t_prob > 0.0 && t_prob < 1.0))
        throw DomainError("radial quantile: requires 0 < tail < 1");
    if (t_prob > 0.5 || std::holds_alternative<Custom>(family_)) return quantile(1.0 - t_prob);
    return std::visit(
        Overloaded{
            [t_prob, this](const Gaussian& g) {
                return std::sqrt(sf::chi2_quantile_upper(k_, t_prob)) / g.scale;
            },
            [t_prob, this](const StudentT& t) {
                // w = ν/(s² + ν) solves I_w(ν/2, k/2) = tail.
                const double a = 0.5 * t.nu;
                const double b = 0.5 * k_;
                const double w = solve_log_probability(
                    [a, b](double w) { return sf::reg_inc_beta(a, b, w); }, std::log(t_prob));
                return std::sqrt(t.nu * (1.0 - w) / w) / t.scale;
            },
            [t_prob, this](const Extremal& e) {
                return extremal_->quantile_upper(t_prob) / e.sigma;
            },
            [](const Custom&) -> double { return 0.0; },  // handled above
        },
        family_);
}

double RadialModel::support_upper() const noexcept {
    if (const auto* e = std::get_if<Extremal>(&family_)) return extremal_->cutoff() / e->sigma;
    return std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd sample_spherical(const RadialModel& model, std::size_t n, RandomStream& rng,
                                 SamplingPath path) {
    const int k = model.dim();
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), k);
    const auto& family = model.family();
    const bool automatic = path == SamplingPath::Automatic;
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::RowVectorXd z(k);
        for (int j = 0; j < k; ++j) z(j) = rng.normal();
        const auto row = static_cast<Eigen::Index>(i);
        if (automatic && std::holds_alternative<Gaussian>(family)) {
            out.row(row) = z / std::get<Gaussian>(family).scale;
            continue;
        }
        if (automatic && std::holds_alternative<StudentT>(family)) {
            const auto& t = std::get<StudentT>(family);
            const double chi2 = 2.0 * rng.gamma(0.5 * t.nu);
            out.row(row) = z / (t.scale * std::sqrt(chi2 / t.nu));
            continue;
        }
        double norm = z.norm();
        while (!(norm > 0.0)) {
            for (int j = 0; j < k; ++j) z(j) = rng.normal();
            norm = z.norm();
        }
        out.row(row) = model.quantile(rng.uniform()) * z / norm;
    }
    return out;
}

KonijnModel::KonijnModel(RadialModel f, RadialModel g, double delta, std::size_t n,
                         std::optional<Eigen::MatrixXd> mixing)
    : f_(std::move(f)), g_(std::move(g)), delta_(delta), n_(n) {
    if (n_ < 1) throw ModelError("konijn model: sample size must be >= 1");
    if (!std::isfinite(delta_)) throw ModelError("konijn model: delta must be finite");
    if (mixing) {
        mixing_ = std::move(*mixing);
        if (mixing_.rows() != p() || mixing_.cols() != q())
            throw ModelError("konijn model: M must be p x q");
        if (!mixing_.allFinite()) throw ModelError("konijn model: M has non-finite entries");
    } else {
        mixing_ = Eigen::MatrixXd::Zero(p(), q());
        mixing_(0, 0) = 1.0;
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(block_matrix());
    if (!lu.isInvertible()) throw ModelError("konijn model: mixing matrix is singular");
}

Eigen::MatrixXd KonijnModel::block_matrix() const {
    const double d = delta_ / std::sqrt(static_cast<double>(n_));
    const int p = this->p();
    const int q = this->q();
    Eigen::MatrixXd m(p + q, p + q);
    m.topLeftCorner(p, p) = (1.0 - d) * Eigen::MatrixXd::Identity(p, p);
    m.topRightCorner(p, q) = d * mixing_;
    m.bottomLeftCorner(q, p) = d * mixing_.transpose();
    m.bottomRightCorner(q, q) = (1.0 - d) * Eigen::MatrixXd::Identity(q, q);
    return m;
}

PairedSample sample_konijn(const KonijnModel& model, const RandomStream& rng) {
    RandomStream first = rng.substream(1);
    RandomStream second = rng.substream(2);
    Eigen::MatrixXd y1 = sample_spherical(model.f(), model.n(), first);
    Eigen::MatrixXd y2 = sample_spherical(model.g(), model.n(), second);
    if (model.delta() == 0.0) return PairedSample(std::move(y1), std::move(y2));
    const double d = model.delta() / std::sqrt(static_cast<double>(model.n()));
    // Rows are observations, so X₁' = (1-d) Y₁' + d Y₂' M'.
    Eigen::MatrixXd x1 = (1.0 - d) * y1 + d * y2 * model.mixing().transpose();
    Eigen::MatrixXd x2 = d * y1 * model.mixing() + (1.0 - d) * y2;
    return PairedSample(std::move(x1), std::move(x2));
}

}  // namespace mvindep::radial
