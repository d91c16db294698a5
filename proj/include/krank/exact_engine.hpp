#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "krank/partition_table.hpp"

namespace krank {

/// One N_k(m, n) evaluation: k >= 1 selects the rank family (k = 1 crank,
/// k = 2 Dyson rank), n >= 0 the partition size. Values depend on m only
/// through |m|.
struct KRankQuery {
    std::int64_t k = 1;
    std::int64_t m = 0;
    std::int64_t n = 0;
};

/// Coefficients [q^0 .. q^max_n] of the k-rank generating function for a
/// fixed m >= 0.
struct CoefficientSeries {
    std::int64_t k = 1;
    std::int64_t m = 0;
    std::vector<mpz_class> coeffs;
};

enum class Statistic { crank, rank };

/// Half-offsets ((2k-1)l^2 - l)/2 and ((2k-1)l^2 + l)/2 of the l-th term.
/// Both numerators are even because l^2 and l share parity.
struct TermOffsets {
    std::int64_t lower;
    std::int64_t upper;
};
TermOffsets term_offsets(std::int64_t k, std::int64_t ell);

/// F_k(l; m, n) = p(n - m l - lower) - p(n - m l - upper), p(<0) = 0.
mpz_class f_k_term(const PartitionTable& table, std::int64_t k, std::int64_t ell,
                   std::int64_t m, std::int64_t n);

/// N_k(m, n) as the alternating sum of F_k(l; |m|, n) over l >= 1, stopped
/// at the first l whose leading p-argument is negative.
mpz_class n_k_exact(const PartitionTable& table, const KRankQuery& q);

/// Coefficients of prod (1 - q^r)^{-1} up to q^max_n, by multiplying the
/// geometric series factor by factor. Shares no code with the pentagonal
/// recurrence.
std::vector<mpz_class> partition_series_by_products(std::int64_t max_n);

/// Expands the k-rank generating function for fixed m by dense convolution
/// of the partition series with the truncated theta-type sum.
CoefficientSeries n_k_oracle_series(std::int64_t k, std::int64_t m, std::int64_t max_n);
CoefficientSeries n_k_oracle_series(std::int64_t k, std::int64_t m,
                                    std::span<const mpz_class> partition_series);

// Partitions beyond this size are not enumerated.
inline constexpr std::int64_t kEnumerationLimit = 45;

/// Histogram m -> count of the chosen statistic over all partitions of n.
/// rank = largest part - number of parts. crank = largest part when there are
/// no 1s, otherwise (#parts larger than the number of 1s) - (#1s). The empty
/// partition has rank 0 and crank 0.
std::map<std::int64_t, std::uint64_t> enumerate_statistic(std::int64_t n, Statistic statistic);

/// out[i] = sum_{j=0}^{r} (-1)^j C(r, j) values[i + j], i.e. (-1)^r times the
/// r-th backward difference taken at index i + r. Output has
/// values.size() - r entries; throws LengthError if values.size() <= r.
std::vector<mpz_class> backward_difference(std::int64_t r, std::span<const mpz_class> values);

/// Least integer m0 >= (n + 3)/2 - 2k, clamped below at 0.
std::int64_t exact_regime_threshold(std::int64_t k, std::int64_t n);

}  // namespace krank
