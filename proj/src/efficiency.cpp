#include "mvindep/efficiency.hpp"

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "mvindep/errors.hpp"
#include "mvindep/parallel.hpp"
#include "mvindep/quadrature.hpp"
#include "mvindep/specialfn.hpp"

namespace mvindep::efficiency {

namespace {

constexpr sf::QuadratureSpec kSpec{kFunctionalTolerance, kFunctionalTolerance, 4000};

// ∫₀¹ g(u) du as two halves. The upper half is integrated in t = 1 - u so that
// tail probabilities reach the integrand exactly instead of through a rounded 1 - t.
template <class Lower, class Upper>
double split_integral(Lower lower, Upper upper) {
    sf::QuadratureSpec half = kSpec;
    half.abs_tol *= 0.5;
    return sf::integrate({lower, true, false}, 0.0, 0.5, half) +
           sf::integrate({upper, true, false}, 0.0, 0.5, half);
}

// w(u) φ_f(F̃⁻¹(u)), with r the radius at that probability.
double c_term(const radial::RadialModel& model, double w, double r) {
    // Quantiles that round onto an end of the support carry no mass.
    if (!(r > 0.0) || !(r < model.support_upper())) return 0.0;
    return w * model.location_score(r);
}

void check_dims(int p, int q) {
    if (p < 1 || q < 1) throw DomainError("dimensions must be >= 1");
}

}  // namespace

ScoreKind ScoreKind::custom(std::string name, std::function<double(double)> weight) {
    if (!weight) throw ModelError("custom score kind: empty weight function");
    const sf::Integrand squared{[&weight](double u) {
                                    const double w = weight(u);
                                    return w * w;
                                },
                                true, true};
    const double norm2 = sf::integrate(squared, 0.0, 1.0, kSpec);
    if (!(norm2 > 0.0) || !std::isfinite(norm2))
        throw ModelError("custom score kind: weight is not square integrable");
    return ScoreKind(Tag::Custom, std::move(name), std::move(weight));
}

double ScoreKind::weight_upper(int k, double t) const {
    switch (tag_) {
        case Tag::Gauss: return std::sqrt(sf::chi2_quantile_upper(k, t));
        case Tag::Uniform: return 1.0 - t;
        case Tag::Custom: return weight_(1.0 - t);
    }
    return 0.0;
}

double ScoreKind::weight(int k, double u) const {
    switch (tag_) {
        case Tag::Gauss:
            return u > 0.5 ? std::sqrt(sf::chi2_quantile_upper(k, 1.0 - u))
                           : std::sqrt(sf::chi2_quantile(k, u));
        case Tag::Uniform: return u;
        case Tag::Custom: return weight_(u);
    }
    return 0.0;
}

double c_functional(const radial::RadialModel& model, const ScoreKind& kind) {
    const int k = model.dim();
    return split_integral(
        [&](double u) { return c_term(model, kind.weight(k, u), model.quantile(u)); },
        [&](double t) { return c_term(model, kind.weight_upper(k, t), model.quantile_upper(t)); });
}

double d_functional(const radial::RadialModel& model, const ScoreKind& kind) {
    const int k = model.dim();
    return split_integral(
        [&](double u) { return kind.weight(k, u) * model.quantile(u); },
        [&](double t) { return kind.weight_upper(k, t) * model.quantile_upper(t); });
}

Functionals functionals(const radial::RadialModel& model, const ScoreKind& kind) {
    return {c_functional(model, kind), d_functional(model, kind)};
}

AREResult assemble_are(AreMethod method, int p, const Functionals& fp, int q,
                       const Functionals& fq) {
    check_dims(p, q);
    AREResult r;
    r.method = method;
    r.p = p;
    r.q = q;
    r.C_p = fp.C;
    r.D_p = fp.D;
    r.C_q = fq.C;
    r.D_q = fq.D;
    r.A = 4.0 * fp.D * fp.C * fq.D * fq.C;
    const double gap = fp.D * fq.C - fq.D * fp.C;
    r.B = gap * gap;
    const double pq = static_cast<double>(p) * q;
    r.factor = method == AreMethod::VanDerWaerden ? 1.0 / (4.0 * pq * pq) : 9.0 / (4.0 * pq);
    const double sum = fp.D * fq.C + fq.D * fp.C;
    r.value = r.factor * sum * sum;
    return r;
}

AREResult are(AreMethod method, int p, const radial::RadialFamily& f, int q,
              const radial::RadialFamily& g) {
    check_dims(p, q);
    const ScoreKind kind =
        method == AreMethod::VanDerWaerden ? ScoreKind::gauss() : ScoreKind::uniform();
    const radial::RadialModel mf(p, f);
    const radial::RadialModel mg(q, g);
    return assemble_are(method, p, functionals(mf, kind), q, functionals(mg, kind));
}

AREResult are_vdw(int p, const radial::RadialFamily& f, int q, const radial::RadialFamily& g) {
    return are(AreMethod::VanDerWaerden, p, f, q, g);
}

AREResult are_wilcoxon(int p, const radial::RadialFamily& f, int q,
                       const radial::RadialFamily& g) {
    return are(AreMethod::Wilcoxon, p, f, q, g);
}

AreMethod parse_are_method(std::string_view name) {
    if (name == "vdw") return AreMethod::VanDerWaerden;
    if (name == "wilcoxon") return AreMethod::Wilcoxon;
    throw InputError("unknown ARE method '" + std::string(name) + "' (expected vdw or wilcoxon)");
}

std::string_view to_string(AreMethod method) {
    return method == AreMethod::VanDerWaerden ? "vdw" : "wilcoxon";
}

double extremal_omega(int k) {
    const double c = bessel_critical(k);
    return (2.0 * c * c + k - 1.0) / (8.0 * c);
}

BoundResult hl_lower_bound(int p, int q) {
    check_dims(p, q);
    BoundResult r;
    r.p = p;
    r.q = q;
    r.c_p = bessel_critical(p);
    r.c_q = p == q ? r.c_p : bessel_critical(q);
    const double ap = 2.0 * r.c_p * r.c_p + p - 1.0;
    const double aq = 2.0 * r.c_q * r.c_q + q - 1.0;
    r.omega_p = ap / (8.0 * r.c_p);
    r.omega_q = aq / (8.0 * r.c_q);
    // One factor per margin, so the bound is exactly symmetric in (p, q).
    const double gp = (ap / r.c_p) * (ap / r.c_p) / p;
    const double gq = (aq / r.c_q) * (aq / r.c_q) / q;
    r.bound = 9.0 / 1024.0 * (gp * gq);
    return r;
}

Lemma1Record verify_lemma1(int k, const radial::RadialFamily& f) {
    const radial::RadialModel model(k, f);
    const Functionals fn = functionals(model, ScoreKind::gauss());
    Lemma1Record r;
    r.k = k;
    r.C = fn.C;
    r.D = fn.D;
    r.product = fn.C * fn.D;
    r.slack = r.product - static_cast<double>(k) * k;
    return r;
}

Lemma2Record verify_lemma2(int k) {
    const ExtremalLaw law(k);
    Lemma2Record r;
    r.k = k;
    r.c = law.cutoff();
    r.omega = law.omega();
    const radial::RadialModel unit(k, radial::Extremal{1.0});
    const Functionals fn = functionals(unit, ScoreKind::uniform());
    r.C = fn.C;
    r.D = fn.D;
    r.product = fn.C * fn.D;
    const double a = 2.0 * r.c * r.c + k - 1.0;
    r.closed_form = a * a / (32.0 * r.c * r.c);
    r.d_at_omega = d_functional(radial::RadialModel(k, radial::Extremal{r.omega}),
                                ScoreKind::uniform());
    return r;
}

radial::RadialFamily table_family(double nu) {
    if (std::isinf(nu)) return radial::Gaussian{1.0};
    return radial::StudentT{nu, 1.0};
}

AreTable are_table(AreMethod method, const std::vector<int>& dims, const std::vector<double>& nus,
                   unsigned threads) {
    constexpr int p = 2;
    const ScoreKind kind =
        method == AreMethod::VanDerWaerden ? ScoreKind::gauss() : ScoreKind::uniform();

    // Distinct (k, ν) components, p included.
    std::map<int, std::size_t> dim_slot;
    dim_slot.emplace(p, 0);
    for (int q : dims) dim_slot.emplace(q, 0);
    std::vector<int> slot_dims;
    for (auto& [k, slot] : dim_slot) {
        slot = slot_dims.size();
        slot_dims.push_back(k);
    }
    const std::size_t nn = nus.size();
    std::vector<Functionals> parts(slot_dims.size() * nn);
    detail::parallel_for(
        parts.size(),
        [&](std::size_t i) {
            const radial::RadialModel model(slot_dims[i / nn], table_family(nus[i % nn]));
            parts[i] = functionals(model, kind);
        },
        threads);

    AreTable table;
    table.method = method;
    table.p = p;
    table.dims = dims;
    table.nus = nus;
    table.values.resize(dims.size() * nn * nn);
    const std::size_t p_slot = dim_slot.at(p);
    for (std::size_t qi = 0; qi < dims.size(); ++qi) {
        const std::size_t q_slot = dim_slot.at(dims[qi]);
        for (std::size_t nq = 0; nq < nn; ++nq)
            for (std::size_t np = 0; np < nn; ++np)
                table.values[(qi * nn + nq) * nn + np] =
                    assemble_are(method, p, parts[p_slot * nn + np], dims[qi],
                                 parts[q_slot * nn + nq])
                        .value;
    }
    return table;
}

AreTable table1(const std::vector<int>& dims, const std::vector<double>& nus, unsigned threads) {
    return are_table(AreMethod::VanDerWaerden, dims, nus, threads);
}

AreTable table2(const std::vector<int>& dims, const std::vector<double>& nus, unsigned threads) {
    return are_table(AreMethod::Wilcoxon, dims, nus, threads);
}

BoundTable table3(const std::vector<int>& dims, unsigned threads) {
    BoundTable table;
    table.dims = dims;
    const std::size_t m = dims.size();
    table.values.resize(m * m);
    detail::parallel_for(
        m * m, [&](std::size_t i) { table.values[i] = hl_lower_bound(dims[i / m], dims[i % m]).bound; },
        threads);
    return table;
}

std::vector<TrendRow> large_k_trend(int max_k) {
    if (max_k < 1) throw DomainError("large_k_trend: max_k must be >= 1");
    std::vector<TrendRow> rows;
    rows.reserve(static_cast<std::size_t>(max_k));
    for (int k = 1; k <= max_k; ++k) {
        const BoundResult diag = hl_lower_bound(k, k);
        rows.push_back({k, diag.c_p, diag.omega_p, diag.bound, hl_lower_bound(1, k).bound});
    }
    return rows;
}

}  // namespace mvindep::efficiency
