#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mvindep/errors.hpp"
#include "mvindep/specialfn.hpp"

using namespace mvindep;
using doctest::Approx;

TEST_CASE("ln_gamma") {
    CHECK(sf::ln_gamma(1.0) == Approx(0.0).epsilon(1e-15));
    CHECK(sf::ln_gamma(5.0) == Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(sf::ln_gamma(0.5) == Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
    for (double x : {1e-8, 0.01, 0.3, 1.7, 3.5, 12.25, 57.0, 171.5, 1e4})
        CHECK(sf::ln_gamma(x) == Approx(boost::math::lgamma(x)).epsilon(1e-13));
    CHECK_THROWS_AS(sf::ln_gamma(0.0), DomainError);
    CHECK_THROWS_AS(sf::ln_gamma(-1.5), DomainError);
}

TEST_CASE("incomplete gamma") {
    CHECK(sf::reg_lower_gamma(1.0, 0.0) == 0.0);
    CHECK(sf::reg_lower_gamma(1.0, 1.0) == Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(sf::reg_lower_gamma(2.5, 1e4) == Approx(1.0).epsilon(1e-15));
    for (double a : {0.5, 1.0, 2.5, 7.0, 25.0, 100.0})
        for (double x : {0.01, 0.5, 1.0, 3.0, 10.0, 30.0, 120.0}) {
            CHECK(std::abs(sf::reg_lower_gamma(a, x) - boost::math::gamma_p(a, x)) < 1e-13);
            const double q = boost::math::gamma_q(a, x);
            CHECK(sf::reg_upper_gamma(a, x) == Approx(q).epsilon(1e-11));
        }
    CHECK_THROWS_AS(sf::reg_lower_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(sf::reg_lower_gamma(1.0, -1.0), DomainError);
}

TEST_CASE("chi-square distribution") {
    CHECK(sf::chi2_cdf(2, 2.0 * std::log(2.0)) == Approx(0.5).epsilon(1e-14));
    CHECK(sf::chi2_cdf(4, 0.0) == 0.0);
    CHECK(sf::chi2_cdf(1, 3.841458820694124) == Approx(0.95).epsilon(1e-12));
    CHECK(sf::chi2_quantile(1, 0.95) == Approx(3.841458820694124).epsilon(1e-12));
    CHECK(sf::chi2_quantile(4, 0.95) == Approx(9.487729036781154).epsilon(1e-12));
    CHECK(sf::chi2_quantile(7, 0.0) == 0.0);
    CHECK_THROWS_AS(sf::chi2_quantile(3, 1.0), DomainError);
    CHECK_THROWS_AS(sf::chi2_cdf(0, 1.0), DomainError);

    for (int k = 1; k <= 20; ++k) {
        const boost::math::chi_squared dist(k);
        for (int i = 1; i <= 99; ++i) {
            const double p = i / 100.0;
            const double x = sf::chi2_quantile(k, p);
            CHECK(std::abs(sf::chi2_cdf(k, x) - p) < 1e-10);
            CHECK(x == Approx(boost::math::quantile(dist, p)).epsilon(1e-11));
        }
    }
}

TEST_CASE("chi-square tails keep relative accuracy") {
    for (int k : {1, 2, 4, 10, 50}) {
        const boost::math::chi_squared dist(k);
        for (double t : {1e-3, 1e-9, 1e-30, 1e-200}) {
            const double x = sf::chi2_quantile_upper(k, t);
            CHECK(x == Approx(boost::math::quantile(boost::math::complement(dist, t))).epsilon(1e-10));
            CHECK(sf::chi2_sf(k, x) == Approx(t).epsilon(1e-9));
        }
        for (double p : {1e-300, 1e-100, 1e-20})
            CHECK(sf::chi2_quantile(k, p) == Approx(boost::math::quantile(dist, p)).epsilon(1e-9));
    }
}

TEST_CASE("incomplete beta and F") {
    CHECK(sf::reg_inc_beta(1.0, 1.0, 0.3) == Approx(0.3).epsilon(1e-14));
    CHECK(sf::reg_inc_beta(2.0, 2.0, 0.5) == Approx(0.5).epsilon(1e-14));
    CHECK(sf::reg_inc_beta(1.0, 3.0, 0.2) == Approx(0.488).epsilon(1e-14));
    CHECK(sf::reg_inc_beta(2.0, 5.0, 0.0) == 0.0);
    CHECK(sf::reg_inc_beta(2.0, 5.0, 1.0) == 1.0);
    for (double a : {0.5, 1.0, 3.5, 20.0})
        for (double b : {0.5, 2.0, 6.0, 40.0})
            for (double x : {0.001, 0.1, 0.4, 0.75, 0.99})
                CHECK(std::abs(sf::reg_inc_beta(a, b, x) - boost::math::ibeta(a, b, x)) < 1e-13);
    CHECK_THROWS_AS(sf::reg_inc_beta(1.0, 1.0, 1.5), DomainError);
    CHECK_THROWS_AS(sf::reg_inc_beta(0.0, 1.0, 0.5), DomainError);

    CHECK(sf::f_cdf(1, 1, 1.0) == Approx(0.5).epsilon(1e-14));
    CHECK(sf::f_cdf(3, 7, 0.0) == 0.0);
    CHECK(sf::f_cdf(2, 4, 1.0) == Approx(1.0 - 4.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("normal quantile") {
    const boost::math::normal n01;
    for (double p : {1e-300, 1e-12, 0.001, 0.025, 0.3, 0.5, 0.8, 0.975, 0.999999})
        CHECK(sf::normal_quantile(p) == Approx(boost::math::quantile(n01, p)).epsilon(1e-14));
}

TEST_CASE("bessel_j") {
    CHECK(sf::bessel_j(0.0, 0.0) == 1.0);
    CHECK(sf::bessel_j(1.5, 0.0) == 0.0);
    const double half_pi = std::numbers::pi / 2.0;
    CHECK(sf::bessel_j(0.5, half_pi) == Approx(2.0 / std::numbers::pi).epsilon(1e-14));

    for (double x : {0.1, 1.0, 5.0, 13.0, 31.0, 59.5}) {
        const double s = std::sqrt(2.0 / (std::numbers::pi * x));
        CHECK(std::abs(sf::bessel_j(0.5, x) - s * std::sin(x)) < 1e-13);
        CHECK(std::abs(sf::bessel_j(1.5, x) - s * (std::sin(x) / x - std::cos(x))) < 1e-13);
    }
    for (int k = 1; k <= 50; k += 7) {
        const double nu = std::sqrt(2.0 * k - 1.0) / 2.0;
        for (double x : {0.01, 0.7, 3.3, 9.9, 12.5, 24.0, 44.4, 60.0})
            CHECK(std::abs(sf::bessel_j(nu, x) - boost::math::cyl_bessel_j(nu, x)) < 1e-12);
    }
    for (double nu : {1.0, 2.3, 4.75})
        for (double x : {0.5, 6.0, 20.0, 55.0}) {
            const double lhs = sf::bessel_j(nu - 1.0, x) + sf::bessel_j(nu + 1.0, x);
            CHECK(std::abs(lhs - 2.0 * nu / x * sf::bessel_j(nu, x)) < 1e-10);
        }
    CHECK_THROWS_AS(sf::bessel_j(0.5, 60.5), RangeError);
    CHECK_THROWS_AS(sf::bessel_j(-0.5, 1.0), DomainError);
    CHECK_THROWS_AS(sf::bessel_j(0.5, -1.0), DomainError);
}

TEST_CASE("pure functions are bit-reproducible") {
    CHECK(sf::chi2_quantile(3, 0.37) == sf::chi2_quantile(3, 0.37));
    CHECK(sf::bessel_j(2.12, 33.3) == sf::bessel_j(2.12, 33.3));
}
