#pragma once

#include <cstdint>
#include <numbers>

#include <gmpxx.h>

#include "krank/partition_table.hpp"
#include "krank/signed_log.hpp"

namespace krank {

/// Growth constant of the Hardy-Ramanujan formula.
struct AsymptoticConstants {
    static constexpr double pi = std::numbers::pi;
    // 2 pi / sqrt 6
    static constexpr double B = 2.0 * std::numbers::pi / 2.449489742783178098197284;
};
inline constexpr double kB = AsymptoticConstants::B;

/// p-hat(n) = e^{B L}/(4 sqrt3 L^2) (1 - 1/(B L)), L = sqrt(n - 1/24).
/// Throws DomainError for n < 1.
SignedLogReal hat_p(std::int64_t n);

/// |p(n) - p-hat(n)| * n * e^{-B sqrt(n)/2}, with p-hat evaluated in MPFR
/// at enough precision to resolve the difference. Requires 1 <= n <= max_n.
double lemma1_scaled_error(const PartitionTable& table, std::int64_t n);

/// First-order shift (1 + B x / (2 sqrt n)) p-hat(n), an approximation of
/// p-hat(n + x) for |x| = O(sqrt n). Throws DomainError when n + x < 1 or
/// |x| > max_shift * sqrt(n).
SignedLogReal hat_p_shift(std::int64_t n, std::int64_t x, double max_shift = 10.0);

/// Whether m l + (k - 1/2) l^2 <= n/2, the range on which the truncated
/// series keeps the l-th term.
bool in_truncation_range(std::int64_t k, std::int64_t ell, std::int64_t m, std::int64_t n);

/// p-hat analogue of F_k(l; m, n). Throws RangeError outside the truncation
/// range.
SignedLogReal hat_f_k(std::int64_t k, std::int64_t ell, std::int64_t m, std::int64_t n);

/// I_k(m, n): alternating sum of hat_f_k over the truncation range. Requires
/// 0 <= m <= n/3 (RangeError otherwise).
SignedLogReal i_k_truncated(std::int64_t k, std::int64_t m, std::int64_t n);

/// (pi / (4 sqrt(6n))) sech^2(pi m / (2 sqrt(6n))) p_n.
SignedLogReal dyson_sech_estimate(std::int64_t m, std::int64_t n, const SignedLogReal& p_n);

/// (pi / sqrt(6n)) (e^v + e^{-v})^{-2} p_n with v = pi (|m| + k) / (2 sqrt(6n)).
SignedLogReal parry_rhoades_estimate(std::int64_t k, std::int64_t m, std::int64_t n,
                                     const SignedLogReal& p_n);

/// F_k(1; |m|, n) = p(n - (|m| + k) + 1) - p(n - (|m| + k)).
mpz_class main_term_exact(const PartitionTable& table, std::int64_t k, std::int64_t m,
                          std::int64_t n);

/// Leading behaviour B/(8 sqrt3) e^{B sqrt(n-m)} / (n-m)^{3/2} of the main
/// term. Throws DomainError when n - m < 1.
SignedLogReal main_term_asymptotic(std::int64_t k, std::int64_t m, std::int64_t n);

/// e^{-pi |m| / (2 sqrt(6n))} + m^2 / n^{3/2}
double error_bound_zn1(std::int64_t m, std::int64_t n);

/// e^{-pi |m| / sqrt(6n)} + e^{-pi sqrt(n/6) / 5}
double error_bound_main(std::int64_t k, std::int64_t m, std::int64_t n);

/// (p(n - m + 1) - p(n - m)) / p(n). Requires 0 <= m <= n and
/// n - m + 1 <= max_n.
SignedLogReal dprz_lhs(const PartitionTable& table, std::int64_t m, std::int64_t n);

/// (B / (8 sqrt n)) sech^2(B m / (4 sqrt n)).
SignedLogReal dprz_rhs(std::int64_t m, std::int64_t n);

/// e^{-B m / (4 sqrt n)} + m^2 / n^{3/2}
double error_bound_dprz(std::int64_t m, std::int64_t n);

/// Limit of (exact count) / (sech^2 estimate) along m = c n^{3/4}: e^{-B c^2 / 8}.
double breakdown_limit(double c);

/// (pi / sqrt(6(n - m)))^{r+1} p_nm. Throws DomainError when n - m < 1.
SignedLogReal corollary_prediction(std::int64_t r, std::int64_t m, std::int64_t n,
                                   const SignedLogReal& p_nm);

/// 1/sqrt(n - m) + n^{(r+1)/2} e^{-pi m / sqrt(6n)}: the size of the relative
/// error of the finite-difference asymptotic.
double error_bound_corollary(std::int64_t r, std::int64_t m, std::int64_t n);

/// |exact - estimate| / |exact|. Throws DomainError when exact is zero.
double relative_error(const SignedLogReal& exact, const SignedLogReal& estimate);

/// Same for two exact integers; the difference is taken exactly first.
double relative_error(const mpz_class& exact, const mpz_class& estimate);

}  // namespace krank
