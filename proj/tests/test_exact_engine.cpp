#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "krank/asymptotics.hpp"
#include "krank/errors.hpp"
#include "krank/exact_engine.hpp"

using namespace krank;

namespace {

const PartitionTable& table() {
    static const PartitionTable t = PartitionTable::build(400);
    return t;
}

mpz_class nk(std::int64_t k, std::int64_t m, std::int64_t n) { return n_k_exact(table(), {k, m, n}); }

}  // namespace

TEST_CASE("f_k_term by direct substitution") {
    CHECK(f_k_term(table(), 1, 1, 0, 1) == 0);  // p(1) - p(0)
    CHECK(f_k_term(table(), 1, 2, 0, 1) == 1);  // p(0) - p(-2)
    CHECK(f_k_term(table(), 2, 1, 3, 4) == 1);  // p(0) - p(-1)
    CHECK_THROWS_AS(f_k_term(table(), 1, 1, 0, 401), RangeError);
    CHECK_THROWS_AS(f_k_term(table(), 0, 1, 0, 4), std::invalid_argument);
}

TEST_CASE("term offsets are integral") {
    for (std::int64_t k = 1; k <= 12; ++k) {
        for (std::int64_t ell = 1; ell <= 200; ++ell) {
            const std::int64_t quad = (2 * k - 1) * ell * ell;
            CHECK((quad - ell) % 2 == 0);
            CHECK((quad + ell) % 2 == 0);
            const auto off = term_offsets(k, ell);
            CHECK(2 * off.lower == quad - ell);
            CHECK(off.upper - off.lower == ell);
        }
    }
}

TEST_CASE("n_k_exact small values") {
    CHECK(nk(1, 0, 1) == -1);
    CHECK(nk(1, 1, 1) == 1);
    CHECK(nk(1, -1, 1) == 1);
    CHECK(nk(2, 3, 4) == 1);
    CHECK(nk(2, 2, 4) == 0);
    CHECK(nk(1, 10, 10) == 1);
    CHECK_THROWS_AS(nk(1, 0, 401), RangeError);
}

TEST_CASE("q-series oracle small coefficients") {
    CHECK(n_k_oracle_series(1, 0, 1).coeffs[1] == -1);
    CHECK(n_k_oracle_series(2, 0, 4).coeffs[4] == 1);
    CHECK_THROWS_AS(n_k_oracle_series(1, 0, 100'000'000), BudgetError);
}

TEST_CASE("constant term of the series") {
    // zero except k = 1, m = 0, where l = 1 contributes q^0 (1 - q)
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t m = 0; m <= 5; ++m) {
            CAPTURE(k);
            CAPTURE(m);
            CHECK(n_k_oracle_series(k, m, 10).coeffs[0] == ((k == 1 && m == 0) ? 1 : 0));
        }
    }
}

TEST_CASE("finite p-sum equals the series coefficient") {
    const auto products = partition_series_by_products(200);
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t m = 0; m <= 200; ++m) {
            const auto s = n_k_oracle_series(k, m, products);
            for (std::int64_t n = 0; n <= 200; ++n) {
                if (s.coeffs[static_cast<std::size_t>(n)] != nk(k, m, n)) {
                    FAIL("mismatch at k=" << k << " m=" << m << " n=" << n);
                }
            }
        }
    }
}

TEST_CASE("enumerate_statistic") {
    using Hist = std::map<std::int64_t, std::uint64_t>;
    CHECK(enumerate_statistic(4, Statistic::rank) == Hist{{3, 1}, {1, 1}, {0, 1}, {-1, 1}, {-3, 1}});
    CHECK(enumerate_statistic(0, Statistic::rank) == Hist{{0, 1}});
    // 4, 31, 22, 211, 1111 have cranks 4, 0, 2, -2, -4
    CHECK(enumerate_statistic(4, Statistic::crank) == Hist{{4, 1}, {2, 1}, {0, 1}, {-2, 1}, {-4, 1}});
    for (const auto& [m, c] : enumerate_statistic(4, Statistic::crank)) CHECK(nk(1, m, 4) == c);
    CHECK_THROWS_AS(enumerate_statistic(46, Statistic::rank), BudgetError);
}

TEST_CASE("enumeration matches the engine") {
    for (std::int64_t n = 1; n <= 30; ++n) {
        const auto rank = enumerate_statistic(n, Statistic::rank);
        const auto crank = enumerate_statistic(n, Statistic::crank);
        for (std::int64_t m = -n - 1; m <= n + 1; ++m) {
            const auto r = rank.count(m) ? rank.at(m) : 0;
            CHECK(nk(2, m, n) == r);
            if (n >= 2) {
                const auto c = crank.count(m) ? crank.at(m) : 0;
                CHECK(nk(1, m, n) == c);
            }
        }
    }
    // The k = 2 series has no q^0 term, so the empty partition is not counted.
    CHECK(nk(2, 0, 0) == 0);
    CHECK(nk(1, 0, 0) == 1);
}

TEST_CASE("symmetry, support and signs") {
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t n = 0; n <= 200; ++n) {
            for (std::int64_t m = 0; m <= n + 3; ++m) {
                const mpz_class v = nk(k, m, n);
                CHECK(v == nk(k, -m, n));
                if (m > n) CHECK(v == 0);
                if (n >= 2 || k == 3) CHECK(v >= 0);
            }
        }
    }
}

TEST_CASE("mass") {
    for (std::int64_t n = 0; n <= 200; ++n) {
        mpz_class crank = 0, rank = 0;
        for (std::int64_t m = -n; m <= n; ++m) {
            crank += nk(1, m, n);
            rank += nk(2, m, n);
        }
        CHECK(crank == table().at(n));
        CHECK(rank == (n == 0 ? mpz_class(0) : table().at(n)));
    }
}

TEST_CASE("backward_difference") {
    const std::vector<mpz_class> v{3, 9, 4, 4, 20};
    CHECK(backward_difference(0, v) == v);

    const std::vector<mpz_class> pp{table().at(4), table().at(5)};
    CHECK(backward_difference(1, pp) == std::vector<mpz_class>{-2});

    const std::vector<mpz_class> flat(6, 11);
    for (const auto& x : backward_difference(2, flat)) CHECK(x == 0);

    CHECK_THROWS_AS(backward_difference(2, std::vector<mpz_class>{1, 2}), LengthError);

    // (-1)^r times r iterated first differences
    const auto vals = std::vector<mpz_class>(table().values().begin() + 50, table().values().begin() + 70);
    for (std::int64_t r = 0; r <= 5; ++r) {
        std::vector<mpz_class> it = vals;
        for (std::int64_t s = 0; s < r; ++s) {
            for (std::size_t i = 0; i + 1 < it.size(); ++i) it[i] = it[i] - it[i + 1];
            it.pop_back();
        }
        CHECK(backward_difference(r, vals) == it);
    }
}

TEST_CASE("exact_regime_threshold") {
    CHECK(exact_regime_threshold(1, 10) == 5);
    CHECK(exact_regime_threshold(2, 1) == 0);
    CHECK(exact_regime_threshold(1, 0) == 0);
    CHECK(exact_regime_threshold(1, 11) == 5);
    CHECK(exact_regime_threshold(3, 40) == 16);
    for (std::int64_t m = 5; m <= 12; ++m) CHECK(nk(1, m, 10) == f_k_term(table(), 1, 1, m, 10));
}

TEST_CASE("exact regime holds strictly beyond the boundary") {
    for (std::int64_t k = 1; k <= 3; ++k) {
        for (std::int64_t n = 0; n <= 200; ++n) {
            for (std::int64_t m = std::max<std::int64_t>(0, exact_regime_threshold(k, n)); m <= n + 2 * k; ++m) {
                const bool boundary = 2 * m == n + 3 - 4 * k;
                const mpz_class f1 = main_term_exact(table(), k, m, n);
                CHECK(nk(k, m, n) == (boundary ? f1 - 1 : f1));
            }
        }
    }
    // the boundary itself: N_2(0,5) = 1 while F_2(1;0,5) = p(4) - p(3) = 2
    CHECK(nk(2, 0, 5) == 1);
    CHECK(main_term_exact(table(), 2, 0, 5) == 2);
}

TEST_CASE("concurrent evaluation matches serial") {
    std::vector<mpz_class> serial;
    for (std::int64_t m = 0; m < 400; ++m) serial.push_back(nk(1 + m % 3, m / 2, 400 - m % 7));
    std::vector<mpz_class> par(serial.size());
    std::vector<std::thread> pool;
    for (int w = 0; w < 4; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = static_cast<std::size_t>(w); i < par.size(); i += 4) {
                const auto m = static_cast<std::int64_t>(i);
                par[i] = nk(1 + m % 3, m / 2, 400 - m % 7);
            }
        });
    }
    for (auto& t : pool) t.join();
    CHECK(par == serial);
}
