#include "krank/exact_engine.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>

#include "krank/errors.hpp"

namespace krank {

namespace {

void require_k_ell(std::int64_t k, std::int64_t ell) {
    if (k < 1) throw std::invalid_argument("k must be >= 1, got " + std::to_string(k));
    if (ell < 1) throw std::invalid_argument("ell must be >= 1, got " + std::to_string(ell));
}

std::int64_t abs64(std::int64_t x) { return x < 0 ? -x : x; }

}  // namespace

TermOffsets term_offsets(std::int64_t k, std::int64_t ell) {
    require_k_ell(k, ell);
    const std::int64_t quad = (2 * k - 1) * ell * ell;
    // quad has the parity of ell^2, which is the parity of ell.
    assert((quad - ell) % 2 == 0 && (quad + ell) % 2 == 0);
    return {(quad - ell) / 2, (quad + ell) / 2};
}

mpz_class f_k_term(const PartitionTable& table, std::int64_t k, std::int64_t ell,
                   std::int64_t m, std::int64_t n) {
    if (m < 0) throw std::invalid_argument("f_k_term: m must be >= 0");
    if (n < 0) throw std::invalid_argument("f_k_term: n must be >= 0");
    const TermOffsets off = term_offsets(k, ell);
    const std::int64_t base = n - m * ell;
    return table.at(base - off.lower) - table.at(base - off.upper);
}

mpz_class n_k_exact(const PartitionTable& table, const KRankQuery& q) {
    if (q.k < 1) throw std::invalid_argument("n_k_exact: k must be >= 1");
    if (q.n < 0) throw std::invalid_argument("n_k_exact: n must be >= 0");
    if (q.n > table.max_n()) {
        throw RangeError("n_k_exact: n = " + std::to_string(q.n) + " exceeds table max_n = " +
                         std::to_string(table.max_n()));
    }
    const std::int64_t m = abs64(q.m);
    mpz_class total = 0;
    for (std::int64_t ell = 1;; ++ell) {
        const TermOffsets off = term_offsets(q.k, ell);
        const std::int64_t lead = q.n - m * ell - off.lower;
        if (lead < 0) break;
        const mpz_class& a = table.at(lead);
        const mpz_class& b = table.at(q.n - m * ell - off.upper);
        if (ell % 2 == 1) {
            total += a;
            total -= b;
        } else {
            total -= a;
            total += b;
        }
    }
    return total;
}

std::vector<mpz_class> partition_series_by_products(std::int64_t max_n) {
    if (max_n < 0) throw std::invalid_argument("partition_series_by_products: max_n < 0");
    const auto len = static_cast<std::size_t>(max_n) + 1;
    std::vector<mpz_class> c(len, 0);
    c[0] = 1;
    // Multiply by 1/(1 - q^r) = 1 + q^r + q^{2r} + ... in place.
    for (std::size_t r = 1; r < len; ++r) {
        for (std::size_t i = r; i < len; ++i) c[i] += c[i - r];
    }
    return c;
}

CoefficientSeries n_k_oracle_series(std::int64_t k, std::int64_t m, std::int64_t max_n) {
    if (max_n < 0) throw std::invalid_argument("n_k_oracle_series: max_n < 0");
    if (estimated_table_bytes(max_n) > kDefaultTableByteBudget) {
        throw BudgetError("n_k_oracle_series: max_n = " + std::to_string(max_n) +
                          " exceeds the memory budget");
    }
    const auto series = partition_series_by_products(max_n);
    return n_k_oracle_series(k, m, series);
}

CoefficientSeries n_k_oracle_series(std::int64_t k, std::int64_t m,
                                    std::span<const mpz_class> partition_series) {
    if (k < 1) throw std::invalid_argument("n_k_oracle_series: k must be >= 1");
    if (m < 0) throw std::invalid_argument("n_k_oracle_series: m must be >= 0");
    if (partition_series.empty()) throw std::invalid_argument("n_k_oracle_series: empty series");
    const std::size_t len = partition_series.size();
    const auto limit = static_cast<std::int64_t>(len) - 1;

    // Dense truncation of sum_{l>=1} (-1)^{l-1} q^{l((2k-1)l-1)/2 + m l} (1 - q^l).
    std::vector<mpz_class> theta(len, 0);
    for (std::int64_t ell = 1;; ++ell) {
        const std::int64_t e = ell * ((2 * k - 1) * ell - 1) / 2 + m * ell;
        if (e > limit) break;
        const int s = (ell % 2 == 1) ? 1 : -1;
        theta[static_cast<std::size_t>(e)] += s;
        if (e + ell <= limit) theta[static_cast<std::size_t>(e + ell)] -= s;
    }

    CoefficientSeries out{k, m, std::vector<mpz_class>(len, 0)};
    for (std::size_t j = 0; j < len; ++j) {
        if (theta[j] == 0) continue;
        for (std::size_t i = j; i < len; ++i) {
            out.coeffs[i] += theta[j] * partition_series[i - j];
        }
    }
    return out;
}

namespace {

// Visits every partition of n as a non-increasing list of parts.
template <typename Visit>
void for_each_partition(std::int64_t n, Visit&& visit) {
    std::vector<std::int64_t> parts;
    auto rec = [&](auto&& self, std::int64_t remaining, std::int64_t max_part) -> void {
        if (remaining == 0) {
            visit(parts);
            return;
        }
        for (std::int64_t p = std::min(remaining, max_part); p >= 1; --p) {
            parts.push_back(p);
            self(self, remaining - p, p);
            parts.pop_back();
        }
    };
    rec(rec, n, n);
}

std::int64_t rank_of(const std::vector<std::int64_t>& parts) {
    if (parts.empty()) return 0;
    return parts.front() - static_cast<std::int64_t>(parts.size());
}

std::int64_t crank_of(const std::vector<std::int64_t>& parts) {
    std::int64_t ones = 0;
    for (auto p : parts) ones += (p == 1);
    if (ones == 0) return parts.empty() ? 0 : parts.front();
    std::int64_t larger = 0;
    for (auto p : parts) larger += (p > ones);
    return larger - ones;
}

}  // namespace

std::map<std::int64_t, std::uint64_t> enumerate_statistic(std::int64_t n, Statistic statistic) {
    if (n < 0) throw std::invalid_argument("enumerate_statistic: n must be >= 0");
    if (n > kEnumerationLimit) {
        throw BudgetError("enumerate_statistic: n = " + std::to_string(n) +
                          " exceeds the enumeration budget of " +
                          std::to_string(kEnumerationLimit));
    }
    std::map<std::int64_t, std::uint64_t> hist;
    for_each_partition(n, [&](const std::vector<std::int64_t>& parts) {
        ++hist[statistic == Statistic::rank ? rank_of(parts) : crank_of(parts)];
    });
    return hist;
}

std::vector<mpz_class> backward_difference(std::int64_t r, std::span<const mpz_class> values) {
    if (r < 0) throw std::invalid_argument("backward_difference: r must be >= 0");
    if (static_cast<std::int64_t>(values.size()) <= r) {
        throw LengthError("backward_difference: need more than " + std::to_string(r) +
                          " values, got " + std::to_string(values.size()));
    }
    std::vector<mpz_class> binom(static_cast<std::size_t>(r) + 1);
    binom[0] = 1;
    for (std::int64_t j = 1; j <= r; ++j) {
        binom[static_cast<std::size_t>(j)] = binom[static_cast<std::size_t>(j - 1)] * (r - j + 1) / j;
    }
    const std::size_t out_len = values.size() - static_cast<std::size_t>(r);
    std::vector<mpz_class> out(out_len, 0);
    for (std::size_t i = 0; i < out_len; ++i) {
        for (std::int64_t j = 0; j <= r; ++j) {
            const mpz_class term = binom[static_cast<std::size_t>(j)] * values[i + static_cast<std::size_t>(j)];
            if (j % 2 == 0) {
                out[i] += term;
            } else {
                out[i] -= term;
            }
        }
    }
    return out;
}

std::int64_t exact_regime_threshold(std::int64_t k, std::int64_t n) {
    if (k < 1) throw std::invalid_argument("exact_regime_threshold: k must be >= 1");
    // ceil((n + 3 - 4k) / 2) with floor-division semantics for negatives.
    const std::int64_t num = n + 3 - 4 * k;
    const std::int64_t ceil_half = (num >= 0) ? (num + 1) / 2 : -((-num) / 2);
    return ceil_half < 0 ? 0 : ceil_half;
}

}  // namespace krank
