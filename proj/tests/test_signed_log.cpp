#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "krank/asymptotics.hpp"
#include "krank/errors.hpp"
#include "krank/signed_log.hpp"

using krank::SignedLogReal;

TEST_CASE("round trip through double") {
    for (double x : {1.0, -2.5, 1e-300, -7e250, 3.0}) {
        CHECK(SignedLogReal::from_double(x).to_double() == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(SignedLogReal::from_double(0.0).is_zero());
    CHECK(SignedLogReal::zero().to_double() == 0.0);
}

TEST_CASE("arithmetic") {
    const auto a = SignedLogReal::from_double(6.0);
    const auto b = SignedLogReal::from_double(-4.0);
    CHECK((a * b).to_double() == doctest::Approx(-24.0));
    CHECK((a / b).to_double() == doctest::Approx(-1.5));
    CHECK((a + b).to_double() == doctest::Approx(2.0));
    CHECK((a - b).to_double() == doctest::Approx(10.0));
    CHECK((b + b).to_double() == doctest::Approx(-8.0));
    CHECK((a - a).is_zero());
    CHECK((a + SignedLogReal::zero()) == a);
    CHECK((a * SignedLogReal::zero()).is_zero());
    CHECK_THROWS((a / SignedLogReal::zero()));
}

TEST_CASE("values far outside double range") {
    const auto huge = SignedLogReal::from_log(1, 5000.0);
    const auto sum = huge + huge;
    CHECK(sum.log_mag() == doctest::Approx(5000.0 + std::log(2.0)).epsilon(1e-15));
    CHECK(std::isinf(huge.to_double()));
    const auto tiny = SignedLogReal::from_log(1, -5000.0);
    CHECK((huge * tiny).to_double() == doctest::Approx(1.0));
    // adding something negligible leaves the value unchanged
    CHECK((huge + tiny) == huge);
}

TEST_CASE("from_mpz and from_ratio") {
    mpz_class big = 1;
    big <<= 5000;
    const auto s = SignedLogReal::from_mpz(big);
    CHECK(s.sign() == 1);
    CHECK(s.log_mag() == doctest::Approx(5000.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(SignedLogReal::from_mpz(-big).sign() == -1);
    CHECK(SignedLogReal::from_mpz(0).is_zero());
    CHECK(krank::log_abs(mpz_class(-1000)) == doctest::Approx(std::log(1000.0)));

    CHECK(SignedLogReal::from_ratio(big + 1, big).to_double() == doctest::Approx(1.0));
    CHECK(SignedLogReal::from_ratio(mpz_class(-3), mpz_class(4)).to_double() == doctest::Approx(-0.75));
}

TEST_CASE("ordering") {
    const auto m2 = SignedLogReal::from_double(-2.0);
    const auto m1 = SignedLogReal::from_double(-1.0);
    const auto z = SignedLogReal::zero();
    const auto p1 = SignedLogReal::from_double(1.0);
    const auto p2 = SignedLogReal::from_double(2.0);
    CHECK(m2 < m1);
    CHECK(m1 < z);
    CHECK(z < p1);
    CHECK(p1 < p2);
    CHECK(p2 > m2);
    CHECK(z == SignedLogReal::from_double(0.0));
    CHECK(m2.abs() == p2);
    CHECK(-p1 == m1);
}

TEST_CASE("to_string") {
    CHECK(SignedLogReal::zero().to_string() == "0");
    CHECK(SignedLogReal::from_log(-1, 2.5).to_string() == "-1*exp(2.5)");
    CHECK(SignedLogReal::from_log(1, 0.0).to_string() == "1*exp(0)");
}

TEST_CASE("compensated_sum") {
    std::vector<SignedLogReal> terms;
    CHECK(krank::compensated_sum(terms).is_zero());
    // 1 + 1e-16 added ten thousand times: naive double summation loses it
    terms.push_back(SignedLogReal::from_double(1.0));
    for (int i = 0; i < 10000; ++i) terms.push_back(SignedLogReal::from_double(1e-16));
    CHECK(krank::compensated_sum(terms).to_double() == doctest::Approx(1.0 + 1e-12).epsilon(1e-15));

    // 1e16 + 3 - 1e16 in plain doubles gives 4
    std::vector<SignedLogReal> cancel{SignedLogReal::from_double(1e16), SignedLogReal::from_double(3.0),
                                      SignedLogReal::from_double(-1e16)};
    CHECK(krank::compensated_sum(cancel).to_double() == doctest::Approx(3.0).epsilon(1e-12));
    // a term below double resolution of the largest one is lost
    std::vector<SignedLogReal> lost{SignedLogReal::from_log(1, 800.0), SignedLogReal::from_double(3.0),
                                    SignedLogReal::from_log(-1, 800.0)};
    CHECK(krank::compensated_sum(lost).is_zero());
}

TEST_CASE("random sums agree with long double") {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SignedLogReal> terms;
        long double ref = 0;
        for (int i = 0; i < 20; ++i) {
            const double x = d(rng);
            terms.push_back(SignedLogReal::from_double(x));
            ref += x;
        }
        const double got = krank::compensated_sum(terms).to_double();
        CHECK(std::abs(got - static_cast<double>(ref)) <= 1e-8 * 2e7);
    }
}

TEST_CASE("relative_error") {
    const auto e = SignedLogReal::from_double(100.0);
    CHECK(krank::relative_error(e, SignedLogReal::from_double(99.0)) == doctest::Approx(0.01));
    CHECK(krank::relative_error(e, SignedLogReal::from_double(-100.0)) == doctest::Approx(2.0));
    CHECK(krank::relative_error(e, e) == 0.0);
    CHECK_THROWS_AS(krank::relative_error(SignedLogReal::zero(), e), krank::DomainError);

    mpz_class big = 1;
    big <<= 4000;
    CHECK(krank::relative_error(big, big + 1) == doctest::Approx(std::ldexp(1.0, -4000)));
    CHECK(krank::relative_error(mpz_class(8), mpz_class(6)) == doctest::Approx(0.25));
}
