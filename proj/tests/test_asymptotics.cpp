#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "krank/asymptotics.hpp"
#include "krank/errors.hpp"
#include "krank/exact_engine.hpp"

using namespace krank;

namespace {

const PartitionTable& table() {
    static const PartitionTable t = PartitionTable::build(20000);
    return t;
}

SignedLogReal p_real(std::int64_t n) { return SignedLogReal::from_mpz(table().at(n)); }

// p-hat in long double, straight from the closed form
long double hat_p_ld(std::int64_t n) {
    const long double pi = std::numbers::pi_v<long double>;
    const long double b = 2 * pi / std::sqrt(6.0L);
    const long double lam = std::sqrt(static_cast<long double>(n) - 1.0L / 24);
    return std::exp(b * lam) / (4 * std::sqrt(3.0L) * lam * lam) * (1 - 1 / (b * lam));
}

}  // namespace

TEST_CASE("constants") {
    CHECK(kB == doctest::Approx(2.565099660323728).epsilon(1e-15));
    CHECK(kB > 2.56);
    CHECK(kB < 2.57);
}

TEST_CASE("hat_p") {
    CHECK(hat_p(1).sign() == 1);
    CHECK_THROWS_AS(hat_p(0), DomainError);
    for (std::int64_t n : {1, 2, 10, 50, 100}) {
        CHECK(hat_p(n).to_double() == doctest::Approx(static_cast<double>(hat_p_ld(n))).epsilon(1e-13));
    }
    auto prev = hat_p(1);
    for (std::int64_t n = 2; n <= 100000; ++n) {
        const auto cur = hat_p(n);
        if (!(prev < cur)) FAIL("hat_p not increasing at n=" << n);
        prev = cur;
    }
    // p-hat/p tends to 1
    double last = 1.0;
    for (std::int64_t n : {25, 100, 400}) {
        const double gap = std::abs((hat_p(n) / p_real(n)).to_double() - 1.0);
        CHECK(gap < last);
        last = gap;
    }
    CHECK(last < 1e-11);
}

TEST_CASE("scaled error against a long double evaluation") {
    for (std::int64_t n = 1; n <= 60; ++n) {
        const long double p = table().at(n).get_d();
        const long double ref = std::abs(p - hat_p_ld(n)) * n *
                                std::exp(-static_cast<long double>(kB) * std::sqrt(static_cast<long double>(n)) / 2);
        CAPTURE(n);
        CHECK(lemma1_scaled_error(table(), n) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-9));
    }
    CHECK(lemma1_scaled_error(table(), 100) == doctest::Approx(0.0798).epsilon(0.05));
    CHECK_THROWS(lemma1_scaled_error(table(), 0));
    CHECK_THROWS_AS(lemma1_scaled_error(table(), 20001), RangeError);
}

TEST_CASE("hat_p_shift") {
    CHECK(hat_p_shift(1000, 0) == hat_p(1000));
    CHECK(hat_p_shift(1000, 5) > hat_p(1000));
    CHECK(hat_p_shift(1000, -5) < hat_p(1000));
    CHECK_THROWS_AS(hat_p_shift(10, -10), DomainError);
    CHECK_THROWS_AS(hat_p_shift(100, 101, 10.0), DomainError);
    // close to p-hat(n + x) for small shifts
    const double q = (hat_p_shift(10000, 1) / hat_p(10001)).to_double();
    CHECK(q == doctest::Approx(1.0).epsilon(1e-4));
    // the second-order term is (B x / (2 sqrt n))^2 / 2
    const double q10 = (hat_p_shift(10000, 10) / hat_p(10010)).to_double();
    CHECK(1.0 - q10 == doctest::Approx(std::pow(kB * 10 / 200, 2) / 2).epsilon(0.1));
}

TEST_CASE("truncated main-term series") {
    CHECK(in_truncation_range(1, 1, 4, 10));
    CHECK(!in_truncation_range(1, 1, 5, 10));
    CHECK(hat_f_k(1, 1, 49, 100).sign() == 1);
    CHECK_THROWS_AS(hat_f_k(1, 1, 50, 100), RangeError);

    CHECK_THROWS_AS(i_k_truncated(1, 34, 100), RangeError);
    CHECK_THROWS_AS(i_k_truncated(1, -1, 100), RangeError);
    CHECK(i_k_truncated(1, 33, 100).sign() == 1);
    // a single surviving term
    CHECK(i_k_truncated(1, 33, 100) == hat_f_k(1, 1, 33, 100));
    CHECK(!in_truncation_range(1, 2, 33, 100));

}

TEST_CASE("truncated series tracks the exact count") {
    // |N_k - I_k| <= C e^{B sqrt(3n/5)}. I_k lives in the log domain, so its own
    // rounding is about 1e-16 * |log I_k| relative per term; at n = 10^4 that
    // floor already exceeds e^{B sqrt(3n/5)} for small m, and is allowed for.
    constexpr double kRoundingFloor = 1e-10;
    for (std::int64_t n : {1000, 10000}) {
        double fitted = 0.0;
        for (std::int64_t k = 1; k <= 2; ++k) {
            for (std::int64_t m = 0; 3 * m <= n; m += 1 + n / 300) {
                const auto exact = SignedLogReal::from_mpz(n_k_exact(table(), {k, m, n}));
                const auto diff = (exact - i_k_truncated(k, m, n)).abs();
                const double scale = kB * std::sqrt(3.0 * n / 5.0);
                fitted = std::max(fitted, std::exp(diff.log_mag() - scale));
                const double allowed = std::max(scale, std::log(kRoundingFloor) + exact.log_mag());
                CAPTURE(k);
                CAPTURE(m);
                CHECK(diff.log_mag() <= allowed);
            }
        }
        MESSAGE("n=" << n << " fitted C=" << fitted);
        if (n == 1000) CHECK(fitted < 1e-3);
    }
}

TEST_CASE("sech2 estimate") {
    const std::int64_t n = 10000;
    const auto pn = p_real(n);
    const auto at0 = dyson_sech_estimate(0, n, pn);
    CHECK((at0 / pn).to_double() ==
          doctest::Approx(std::numbers::pi / (4 * std::sqrt(6.0 * n))).epsilon(1e-13));
    CHECK(dyson_sech_estimate(-37, n, pn) == dyson_sech_estimate(37, n, pn));
    CHECK(dyson_sech_estimate(1, n, pn) < at0);
    for (std::int64_t m : {0, 10, 100, 500}) {
        CHECK((dyson_sech_estimate(m, n, pn) / (dprz_rhs(m, n) * pn)).to_double() ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    // very large argument stays finite in the log domain
    CHECK(std::isfinite(dyson_sech_estimate(n, n, pn).log_mag()));
}

TEST_CASE("Parry-Rhoades estimate is the sech2 estimate shifted by k") {
    const std::int64_t n = 40000;
    const auto pn = SignedLogReal::from_double(1.0);
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t m : {0, 3, 200, 2000}) {
            const double q = (parry_rhoades_estimate(k, m, n, pn) / dyson_sech_estimate(m + k, n, pn)).to_double();
            CHECK(q == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("main term") {
    CHECK(main_term_exact(table(), 1, 0, 10) == table().at(10) - table().at(9));
    CHECK(main_term_exact(table(), 2, 3, 4) == 1);
    CHECK(main_term_exact(table(), 2, -3, 4) == 1);
    CHECK_THROWS_AS(main_term_asymptotic(1, 10, 10), DomainError);
    double last = 1.0;
    for (std::int64_t n : {100, 1000, 10000}) {
        const auto ex = SignedLogReal::from_mpz(main_term_exact(table(), 1, 0, n));
        const double gap = std::abs((ex / main_term_asymptotic(1, 0, n)).to_double() - 1.0);
        CHECK(gap < last);
        last = gap;
    }
}

TEST_CASE("error bounds") {
    const std::int64_t n = 10000;
    std::int64_t best = 0;
    for (std::int64_t m = 1; m <= n; ++m) {
        if (error_bound_zn1(m, n) < error_bound_zn1(best, n)) best = m;
    }
    CHECK(best >= 335);
    CHECK(best <= 355);
    for (std::int64_t nn : {100, 10000, 1000000}) {
        const auto lim = static_cast<std::int64_t>(std::pow(static_cast<double>(nn), 0.75));
        for (std::int64_t m = 0; m <= lim; m += 1 + lim / 50) CHECK(error_bound_zn1(m, nn) <= 2.0);
    }
    CHECK(error_bound_zn1(-20, n) == error_bound_zn1(20, n));
    CHECK(error_bound_main(1, 0, n) > 1.0);
    CHECK(error_bound_main(1, 2000, n) < error_bound_main(1, 1000, n));
    CHECK(breakdown_limit(0.0) == 1.0);
    CHECK(breakdown_limit(1.0) == doctest::Approx(std::exp(-kB / 8)));
}

TEST_CASE("dprz pieces") {
    CHECK(dprz_lhs(table(), 1000, 1000).to_double() == doctest::Approx(0.0));
    CHECK(dprz_lhs(table(), 0, 1000).to_double() ==
          doctest::Approx(mpz_class(table().at(1001) - table().at(1000)).get_d() / table().at(1000).get_d()));
    CHECK_THROWS(dprz_lhs(table(), 1001, 1000));
    for (std::int64_t m : {100, 300, 600, 1000}) {
        CAPTURE(m);
        CHECK(relative_error(dprz_lhs(table(), m, 10000), dprz_rhs(m, 10000)) <= error_bound_dprz(m, 10000));
    }
    CHECK(error_bound_dprz(0, 100) == doctest::Approx(1.0));
}

TEST_CASE("finite-difference prediction") {
    const auto pnm = p_real(500);
    CHECK((corollary_prediction(0, 0, 500, pnm) / pnm).to_double() ==
          doctest::Approx(std::numbers::pi / std::sqrt(3000.0)));
    CHECK_THROWS_AS(corollary_prediction(0, 10, 10, pnm), DomainError);

    // Delta^r p(N) ~ (pi / sqrt(6N))^r p(N): the ratio drifts toward 1
    for (std::int64_t r = 1; r <= 2; ++r) {
        double last = 1.0;
        for (std::int64_t n : {1000, 5000, 19000}) {
            const std::vector<mpz_class> window(table().values().begin() + n - r,
                                                table().values().begin() + n + 1);
            const mpz_class d = backward_difference(r, window).front();
            // the r-th backward difference of p at n - r, up to sign
            const double predicted =
                (corollary_prediction(r - 1, 0, n, p_real(n))).to_double() / p_real(n).to_double();
            const double observed = (SignedLogReal::from_mpz(abs(d)) / p_real(n)).to_double();
            const double gap = std::abs(observed / predicted - 1.0);
            CHECK(gap < last);
            last = gap;
        }
    }
    CHECK(error_bound_corollary(0, 0, 100) == doctest::Approx(10.1));
}

TEST_CASE("relative_error on exact integers") {
    CHECK(relative_error(mpz_class(10), mpz_class(11)) == doctest::Approx(0.1));
    CHECK_THROWS_AS(relative_error(mpz_class(0), mpz_class(1)), DomainError);
}
