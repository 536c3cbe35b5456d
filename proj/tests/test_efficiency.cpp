#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mvindep/efficiency.hpp"
#include "mvindep/errors.hpp"

using namespace mvindep;
using namespace mvindep::efficiency;
using radial::Extremal;
using radial::Gaussian;
using radial::RadialModel;
using radial::StudentT;
using doctest::Approx;

TEST_CASE("Gaussian closed forms") {
    for (int k = 1; k <= 10; ++k) {
        const RadialModel g(k, Gaussian{});
        CHECK(c_functional(g, ScoreKind::gauss()) == Approx(k).epsilon(1e-9));
        CHECK(d_functional(g, ScoreKind::gauss()) == Approx(k).epsilon(1e-9));
    }
    const double closed = std::sqrt(2.0 * std::numbers::pi) / 2.0 - std::sqrt(std::numbers::pi) / 4.0;
    const RadialModel g2(2, Gaussian{});
    CHECK(std::abs(d_functional(g2, ScoreKind::uniform()) - closed) < 1e-9);
    CHECK(std::abs(c_functional(g2, ScoreKind::uniform()) - closed) < 1e-9);
}

TEST_CASE("scale laws") {
    const double a = 1.7;
    for (const auto& [unit, scaled] :
         {std::pair<radial::RadialFamily, radial::RadialFamily>{Gaussian{1.0}, Gaussian{a}},
          {StudentT{4.0, 1.0}, StudentT{4.0, a}}, {Extremal{1.0}, Extremal{a}}}) {
        for (int k : {1, 3}) {
            const RadialModel m1(k, unit);
            const RadialModel ma(k, scaled);
            for (const ScoreKind& kind : {ScoreKind::gauss(), ScoreKind::uniform()}) {
                CHECK(c_functional(ma, kind) == Approx(a * c_functional(m1, kind)).epsilon(1e-8));
                CHECK(d_functional(ma, kind) == Approx(d_functional(m1, kind) / a).epsilon(1e-8));
            }
        }
        const double base = are_vdw(2, unit, 3, unit).value;
        CHECK(are_vdw(2, scaled, 3, scaled).value == Approx(base).epsilon(1e-9));
    }
    // Mismatched scales move B but not A.
    const AREResult same = are_vdw(2, Gaussian{1.0}, 2, Gaussian{1.0});
    const AREResult mixed = are_vdw(2, Gaussian{1.0}, 2, Gaussian{2.0});
    CHECK(mixed.A == Approx(same.A).epsilon(1e-8));
    CHECK(same.B < 1e-12);
    CHECK(mixed.B > 1.0);
    CHECK(mixed.value > 1.0 + 1e-3);
}

TEST_CASE("spot values") {
    CHECK(are_vdw(2, StudentT{3.0}, 2, StudentT{3.0}).value == Approx(1.400).epsilon(0.0015));
    CHECK(std::abs(are_vdw(2, Gaussian{}, 2, Gaussian{}).value - 1.0) < 1e-8);
    CHECK(std::abs(are_vdw(2, StudentT{3.0}, 1, Gaussian{}).value - 1.343) < 0.002);
    CHECK(std::abs(are_wilcoxon(2, Gaussian{}, 2, Gaussian{}).value - 0.970) < 0.002);
    CHECK(std::abs(are_wilcoxon(2, StudentT{3.0}, 2, StudentT{3.0}).value - 1.305) < 0.002);
    CHECK(std::abs(are_wilcoxon(2, Gaussian{}, 1, Gaussian{}).value - 0.940) < 0.002);
    CHECK(std::abs(hl_lower_bound(1, 1).bound - 0.856) < 0.001);
    CHECK(std::abs(hl_lower_bound(2, 2).bound - 0.913) < 0.001);
    CHECK(std::abs(hl_lower_bound(10, 10).bound - 0.742) < 0.001);
    CHECK(std::abs(hl_lower_bound(1, 2).bound - 0.884) < 0.001);
}

TEST_CASE("ARE assembly") {
    const AREResult r = are_wilcoxon(3, StudentT{6.0}, 2, Gaussian{2.0});
    CHECK(r.value == Approx(r.factor * (r.A + r.B)).epsilon(1e-14));
    CHECK(r.factor == Approx(9.0 / 24.0));
    CHECK(r.B >= 0.0);
    const AREResult v = are_vdw(3, StudentT{6.0}, 2, Gaussian{2.0});
    CHECK(v.factor == Approx(1.0 / 144.0));
    CHECK(v.A >= 4.0 * 36.0 - 1e-6);
    CHECK(are(AreMethod::Wilcoxon, 3, StudentT{6.0}, 2, Gaussian{2.0}).value == r.value);
    CHECK(parse_are_method("vdw") == AreMethod::VanDerWaerden);
    CHECK(to_string(AreMethod::Wilcoxon) == "wilcoxon");
    CHECK_THROWS_AS(parse_are_method("sign"), InputError);
    CHECK_THROWS_AS(are_vdw(0, Gaussian{}, 1, Gaussian{}), DomainError);
}

TEST_CASE("Gauss-score product bound") {
    for (int k : {1, 2, 5}) CHECK(std::abs(verify_lemma1(k, Gaussian{}).slack) < 1e-8);
    CHECK(verify_lemma1(2, StudentT{3.0}).slack > 0.1);
    const Lemma1Record near = verify_lemma1(6, StudentT{12.0});
    CHECK(near.slack > 0.0);
    CHECK(near.slack < 0.05 * 36.0);
    CHECK(verify_lemma1(3, Extremal{1.0}).slack > 0.0);
}

TEST_CASE("extremal law attains the Wilcoxon infimum") {
    const Lemma2Record one = verify_lemma2(1);
    CHECK(one.c == Approx(std::numbers::pi / 2.0).epsilon(1e-12));
    CHECK(one.omega == Approx(std::numbers::pi / 8.0).epsilon(1e-12));
    // ∫u·asin(u) du = π/8 and ∫u·tan(asin u) du = π/4.
    CHECK(one.D == Approx(std::numbers::pi / 8.0).epsilon(1e-9));
    CHECK(one.C == Approx(std::numbers::pi / 4.0).epsilon(1e-9));
    CHECK(one.closed_form == Approx(std::numbers::pi * std::numbers::pi / 32.0).epsilon(1e-12));
    for (int k = 1; k <= 10; ++k) {
        const Lemma2Record r = verify_lemma2(k);
        CHECK(std::abs(r.product - r.closed_form) < 1e-6);
        CHECK(std::abs(r.d_at_omega - 1.0) < 1e-6);
        const RadialModel t5(k, StudentT{5.0});
        const Functionals f = functionals(t5, ScoreKind::uniform());
        CHECK(f.C * f.D > r.closed_form);
    }
}

TEST_CASE("Hodges-Lehmann equality at the extremal law") {
    for (int p : {1, 2, 4})
        for (int q : {1, 3}) {
            const double bound = hl_lower_bound(p, q).bound;
            CHECK(std::abs(are_wilcoxon(p, Extremal{1.0}, q, Extremal{1.0}).value - bound) < 1e-6);
            CHECK(std::abs(are_wilcoxon(p, Extremal{2.5}, q, Extremal{2.5}).value - bound) < 1e-6);
            CHECK(are_wilcoxon(p, Extremal{1.0}, q, Extremal{2.0}).value > bound + 1e-4);
        }
    CHECK(extremal_omega(1) == Approx(std::numbers::pi / 8.0));
    const BoundResult b = hl_lower_bound(2, 3);
    CHECK(b.omega_p == Approx(extremal_omega(2)));
    CHECK(b.omega_q == Approx(extremal_omega(3)));
    CHECK(b.bound == Approx(hl_lower_bound(3, 2).bound).epsilon(1e-15));
}

TEST_CASE("custom score kinds") {
    const ScoreKind lin = ScoreKind::custom("linear", [](double u) { return u; });
    const RadialModel m(3, StudentT{6.0});
    CHECK(c_functional(m, lin) == Approx(c_functional(m, ScoreKind::uniform())).epsilon(1e-10));
    CHECK_THROWS_AS(ScoreKind::custom("zero", [](double) { return 0.0; }), ModelError);
}

TEST_CASE("tables") {
    const AreTable t1 = table1();
    CHECK(t1.values.size() == 150);
    CHECK(std::abs(t1.at(5, 0, 0) - 1.471) < 0.002);
    const AreTable t2 = table2({10}, {12.0});
    CHECK(std::abs(t2.at(0, 0, 0) - 0.892) < 0.002);
    CHECK(t2.at(0, 0, 0) == are_wilcoxon(2, StudentT{12.0}, 10, StudentT{12.0}).value);
    // Single-threaded and parallel evaluation agree bit for bit.
    CHECK(table1(kTableDims, kTableNus, 1).values == table1(kTableDims, kTableNus, 4).values);
    const BoundTable t3 = table3();
    CHECK(std::abs(t3.at(0, 1) - 0.884) < 0.001);
    CHECK(t3.at(1, 0) == t3.at(0, 1));
    const auto trend = large_k_trend(50);
    CHECK(trend.size() == 50);
    for (std::size_t i = 1; i < trend.size(); ++i) CHECK(trend[i].c > trend[i - 1].c);
    CHECK(trend[0].bound_kk == Approx(hl_lower_bound(1, 1).bound));
}
