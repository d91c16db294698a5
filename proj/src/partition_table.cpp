#include "krank/partition_table.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "krank/errors.hpp"

namespace krank {

mpz_class pentagonal_recurrence(std::span<const mpz_class> prefix, std::int64_t i) {
    if (i < 1 || i > static_cast<std::int64_t>(prefix.size())) {
        throw RangeError("pentagonal_recurrence: index " + std::to_string(i) +
                         " not covered by prefix of length " + std::to_string(prefix.size()));
    }
    mpz_class plus = 0;
    mpz_class minus = 0;
    for (std::int64_t j = 1;; ++j) {
        const std::int64_t g1 = j * (3 * j - 1) / 2;
        if (g1 > i) break;
        mpz_class& acc = (j % 2 == 1) ? plus : minus;
        acc += prefix[static_cast<std::size_t>(i - g1)];
        const std::int64_t g2 = g1 + j;
        if (g2 <= i) acc += prefix[static_cast<std::size_t>(i - g2)];
    }
    return plus - minus;
}

std::size_t estimated_table_bytes(std::int64_t max_n) {
    if (max_n < 0) return 0;
    // log2 p(i) ~ B sqrt(i) / ln 2; summing gives (2/3) B n^{3/2} / ln 2 bits.
    const double n = static_cast<double>(max_n);
    const double bits = (2.0 / 3.0) * 2.5650996603247282 * n * std::sqrt(n) / std::log(2.0);
    const double per_entry = sizeof(mpz_class) + 16.0;
    return static_cast<std::size_t>(bits / 8.0 + per_entry * (n + 1.0));
}

PartitionTable PartitionTable::build(std::int64_t max_n, std::size_t byte_budget) {
    if (max_n < 0) {
        throw std::invalid_argument("build_partition_table: max_n must be >= 0");
    }
    const std::size_t need = estimated_table_bytes(max_n);
    if (need > byte_budget) {
        throw BudgetError("build_partition_table: max_n = " + std::to_string(max_n) +
                          " needs about " + std::to_string(need) + " bytes, budget is " +
                          std::to_string(byte_budget) + "; lower max_n");
    }
    std::vector<mpz_class> values;
    values.reserve(static_cast<std::size_t>(max_n) + 1);
    values.emplace_back(1);
    for (std::int64_t i = 1; i <= max_n; ++i) {
        values.push_back(pentagonal_recurrence(values, i));
    }
    return PartitionTable(std::move(values));
}

PartitionTable PartitionTable::from_values(std::vector<mpz_class> values) {
    if (values.empty()) {
        throw std::invalid_argument("PartitionTable::from_values: empty value list");
    }
    return PartitionTable(std::move(values));
}

const mpz_class& PartitionTable::at(std::int64_t r) const {
    static const mpz_class kZero = 0;
    if (r < 0) return kZero;
    if (r > max_n()) {
        throw RangeError("p(" + std::to_string(r) + ") requested but table stops at max_n = " +
                         std::to_string(max_n()));
    }
    return values_[static_cast<std::size_t>(r)];
}

}  // namespace krank
