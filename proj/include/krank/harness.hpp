#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krank/partition_table.hpp"
#include "krank/signed_log.hpp"

namespace krank {

enum class SweepKind {
    crank_accuracy,
    threshold_breakdown,
    main_theorem,
    finite_difference,
    lemma1_constant,
    dprz_ratio,
    oracle_equivalence,
};

std::string_view to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view name);

/// Short name of the asymptotic statement a sweep kind checks.
std::string_view claim_for(SweepKind kind);

/// How the m values of a grid row are derived from n.
struct MRule {
    enum class Type {
        all,        // 0..n
        list,       // explicit values
        power,      // floor(coef * n^exponent)
        sqrt_log,   // floor(coef * sqrt(n) * ln n)
        geometric,  // `steps` geometric points from ceil(coef sqrt(n) ln n) to floor(hi_fraction n)
    };
    Type type = Type::all;
    std::vector<std::int64_t> values;
    double exponent = 0.0;
    double coef = 1.0;
    double hi_fraction = 0.2;
    int steps = 0;

    /// Parses "all", "list 1 2 3", "power A [C]", "sqrtlog C",
    /// "geometric STEPS [C] [HI_FRACTION]".
    static MRule parse(std::string_view text);
    std::string to_string() const;

    /// Sorted, deduplicated m values for this n. Throws SpecError when a
    /// value falls outside [0, n].
    std::vector<std::int64_t> expand(std::int64_t n) const;
};

enum class Estimator { sech2, sech2_hat, parry_rhoades };
std::string_view to_string(Estimator e);
Estimator parse_estimator(std::string_view name);

struct SweepSpec {
    SweepKind kind = SweepKind::oracle_equivalence;
    std::vector<std::int64_t> n_grid;
    MRule m_rule;
    std::vector<std::int64_t> k_list{1};
    std::int64_t r = 0;
    Estimator estimator = Estimator::sech2;
    // Pass rule per kind: ratio <= threshold, except threshold_breakdown
    // where exact/estimate <= threshold. Absent: every finite row passes.
    std::optional<double> threshold;
    std::filesystem::path output;

    /// Throws SpecError on an empty or unsorted n grid, n < 1, k < 1, r < 0.
    void validate() const;
};

/// Flat "key = value" text, '#' comments. Keys: kind, n_grid, m_rule,
/// k_list, r, estimator, threshold, output. n_grid accepts "a..b" ranges.
SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// Largest table index a sweep will touch.
std::int64_t required_table_size(const SweepSpec& spec);

struct ReportRow {
    SweepKind kind = SweepKind::oracle_equivalence;
    std::int64_t k = 0;
    std::int64_t r = 0;
    std::int64_t n = 0;
    std::int64_t m = 0;
    // Decimal integer for exact quantities, signed-log text otherwise.
    std::string exact_text;
    SignedLogReal exact;
    SignedLogReal estimate;
    // Empty when exact is zero.
    std::optional<double> rel_err;
    std::optional<double> bound;
    std::optional<double> ratio;
    bool pass = false;

    /// exact / estimate, if both are nonzero.
    std::optional<double> quotient() const;
};

inline constexpr std::string_view kCsvHeader =
    "kind,k,r,n,m,exact,estimate_log,rel_err,bound,ratio,pass";

/// One row per grid cell, sorted by (k, n, m). `threads` = 0 uses the
/// hardware concurrency; the result does not depend on it.
std::vector<ReportRow> run_sweep(const SweepSpec& spec, const PartitionTable& table,
                                 unsigned threads = 0);

struct BoundFit {
    double constant = 0.0;
    std::size_t argmax = 0;  // index into the input rows
};

/// Largest finite ratio over the rows. Throws std::invalid_argument when no
/// row carries one.
BoundFit fit_bound_constant(const std::vector<ReportRow>& rows);

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
std::string to_csv(const std::vector<ReportRow>& rows);

/// "%.17g", or the empty string for nullopt.
std::string format_real(std::optional<double> x);

}  // namespace krank
