#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

namespace krank {

// Default ceiling on the estimated heap footprint of a table (2 GiB).
inline constexpr std::size_t kDefaultTableByteBudget = std::size_t{2} << 30;

/// Immutable table of exact partition numbers p(0), ..., p(max_n).
///
/// Built once by Euler's pentagonal recurrence, then only read; concurrent
/// readers need no synchronization.
class PartitionTable {
public:
    /// Builds p(0..max_n). Throws BudgetError if the estimated footprint
    /// exceeds `byte_budget`, std::invalid_argument if max_n < 0.
    static PartitionTable build(std::int64_t max_n,
                                std::size_t byte_budget = kDefaultTableByteBudget);

    /// Wraps already-computed values without checking them. Used by the
    /// cache loader, which does its own verification.
    static PartitionTable from_values(std::vector<mpz_class> values);

    std::int64_t max_n() const { return static_cast<std::int64_t>(values_.size()) - 1; }

    /// p(r) with p(r) = 0 for r < 0. Throws RangeError for r > max_n.
    const mpz_class& at(std::int64_t r) const;

    std::span<const mpz_class> values() const { return values_; }

    friend bool operator==(const PartitionTable& a, const PartitionTable& b) {
        return a.values_ == b.values_;
    }

private:
    explicit PartitionTable(std::vector<mpz_class> values) : values_(std::move(values)) {}

    std::vector<mpz_class> values_;
};

inline const mpz_class& p_at(const PartitionTable& table, std::int64_t r) { return table.at(r); }

/// Right-hand side of the pentagonal recurrence at index i, evaluated from
/// prefix[0..i-1]. Requires 1 <= i <= prefix.size().
mpz_class pentagonal_recurrence(std::span<const mpz_class> prefix, std::int64_t i);

/// Rough heap footprint in bytes of a table up to max_n.
std::size_t estimated_table_bytes(std::int64_t max_n);

}  // namespace krank
