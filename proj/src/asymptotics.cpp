#include "krank/asymptotics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <mpfr.h>

#include "krank/errors.hpp"

namespace krank {

namespace {

constexpr double kPi = AsymptoticConstants::pi;

double iabs(std::int64_t x) { return static_cast<double>(x < 0 ? -x : x); }

void require_positive_n(std::int64_t n, const char* who) {
    if (n < 1) throw DomainError(std::string(who) + ": n must be >= 1, got " + std::to_string(n));
}

// log sech^2(u) = log 4 - 2u - 2 log(1 + e^{-2u}), finite for any u >= 0.
double log_sech2(double u) {
    return std::log(4.0) - 2.0 * u - 2.0 * std::log1p(std::exp(-2.0 * u));
}

class MpfrValue {
public:
    explicit MpfrValue(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~MpfrValue() { mpfr_clear(v_); }
    MpfrValue(const MpfrValue&) = delete;
    MpfrValue& operator=(const MpfrValue&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

}  // namespace

SignedLogReal hat_p(std::int64_t n) {
    require_positive_n(n, "hat_p");
    const double lam = std::sqrt(static_cast<double>(n) - 1.0 / 24.0);
    const double bl = kB * lam;
    const double log_val = bl - std::log(4.0 * std::sqrt(3.0)) - 2.0 * std::log(lam) +
                           std::log1p(-1.0 / bl);
    return SignedLogReal::from_log(1, log_val);
}

double lemma1_scaled_error(const PartitionTable& table, std::int64_t n) {
    require_positive_n(n, "lemma1_scaled_error");
    const mpz_class& p = table.at(n);
    const auto prec = static_cast<mpfr_prec_t>(mpz_sizeinbase(p.get_mpz_t(), 2) + 96);

    MpfrValue lam(prec), b(prec), t(prec), phat(prec), den(prec), fac(prec);
    // lam = sqrt((24n - 1) / 24)
    mpfr_set_si(lam.get(), 24 * n - 1, MPFR_RNDN);
    mpfr_div_ui(lam.get(), lam.get(), 24, MPFR_RNDN);
    mpfr_sqrt(lam.get(), lam.get(), MPFR_RNDN);
    // b = 2 pi / sqrt 6
    mpfr_const_pi(b.get(), MPFR_RNDN);
    mpfr_mul_ui(b.get(), b.get(), 2, MPFR_RNDN);
    mpfr_sqrt_ui(t.get(), 6, MPFR_RNDN);
    mpfr_div(b.get(), b.get(), t.get(), MPFR_RNDN);

    mpfr_mul(t.get(), b.get(), lam.get(), MPFR_RNDN);  // B lam
    mpfr_exp(phat.get(), t.get(), MPFR_RNDN);
    mpfr_ui_div(fac.get(), 1, t.get(), MPFR_RNDN);
    mpfr_ui_sub(fac.get(), 1, fac.get(), MPFR_RNDN);  // 1 - 1/(B lam)
    mpfr_mul(phat.get(), phat.get(), fac.get(), MPFR_RNDN);
    mpfr_sqrt_ui(den.get(), 3, MPFR_RNDN);
    mpfr_mul_ui(den.get(), den.get(), 4, MPFR_RNDN);
    mpfr_mul(den.get(), den.get(), lam.get(), MPFR_RNDN);
    mpfr_mul(den.get(), den.get(), lam.get(), MPFR_RNDN);
    mpfr_div(phat.get(), phat.get(), den.get(), MPFR_RNDN);

    // |p - phat| * n * e^{-B sqrt(n) / 2}
    mpfr_z_sub(phat.get(), p.get_mpz_t(), phat.get(), MPFR_RNDN);
    mpfr_abs(phat.get(), phat.get(), MPFR_RNDN);
    mpfr_mul_si(phat.get(), phat.get(), n, MPFR_RNDN);
    mpfr_sqrt_ui(t.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_mul(t.get(), t.get(), b.get(), MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), 2, MPFR_RNDN);
    mpfr_neg(t.get(), t.get(), MPFR_RNDN);
    mpfr_exp(t.get(), t.get(), MPFR_RNDN);
    mpfr_mul(phat.get(), phat.get(), t.get(), MPFR_RNDN);
    return mpfr_get_d(phat.get(), MPFR_RNDN);
}

SignedLogReal hat_p_shift(std::int64_t n, std::int64_t x, double max_shift) {
    require_positive_n(n, "hat_p_shift");
    if (n + x < 1) throw DomainError("hat_p_shift: n + x must be >= 1");
    const double root = std::sqrt(static_cast<double>(n));
    if (iabs(x) > max_shift * root) {
        throw DomainError("hat_p_shift: |x| = " + std::to_string(x) + " exceeds " +
                          std::to_string(max_shift) + " * sqrt(n)");
    }
    const double factor = 1.0 + kB * static_cast<double>(x) / (2.0 * root);
    return SignedLogReal::from_double(factor) * hat_p(n);
}

bool in_truncation_range(std::int64_t k, std::int64_t ell, std::int64_t m, std::int64_t n) {
    // m l + (k - 1/2) l^2 <= n/2, doubled to stay in integers.
    return 2 * m * ell + (2 * k - 1) * ell * ell <= n;
}

SignedLogReal hat_f_k(std::int64_t k, std::int64_t ell, std::int64_t m, std::int64_t n) {
    if (k < 1 || ell < 1 || m < 0) {
        throw std::invalid_argument("hat_f_k: need k >= 1, ell >= 1, m >= 0");
    }
    if (!in_truncation_range(k, ell, m, n)) {
        throw RangeError("hat_f_k: m l + (k - 1/2) l^2 > n/2 for k=" + std::to_string(k) +
                         " l=" + std::to_string(ell) + " m=" + std::to_string(m) +
                         " n=" + std::to_string(n));
    }
    const std::int64_t quad = (2 * k - 1) * ell * ell;
    const std::int64_t base = n - m * ell;
    return hat_p(base - (quad - ell) / 2) - hat_p(base - (quad + ell) / 2);
}

SignedLogReal i_k_truncated(std::int64_t k, std::int64_t m, std::int64_t n) {
    if (k < 1) throw std::invalid_argument("i_k_truncated: k must be >= 1");
    if (m < 0 || 3 * m > n) {
        throw RangeError("i_k_truncated: requires 0 <= m <= n/3, got m=" + std::to_string(m) +
                         " n=" + std::to_string(n));
    }
    std::vector<SignedLogReal> terms;
    for (std::int64_t ell = 1; in_truncation_range(k, ell, m, n); ++ell) {
        const SignedLogReal t = hat_f_k(k, ell, m, n);
        terms.push_back(ell % 2 == 1 ? t : -t);
    }
    return compensated_sum(terms);
}

SignedLogReal dyson_sech_estimate(std::int64_t m, std::int64_t n, const SignedLogReal& p_n) {
    require_positive_n(n, "dyson_sech_estimate");
    if (p_n.sign() <= 0) throw DomainError("dyson_sech_estimate: p_n must be positive");
    const double s = std::sqrt(6.0 * static_cast<double>(n));
    const double u = kPi * iabs(m) / (2.0 * s);
    const double log_val = std::log(kPi / (4.0 * s)) + log_sech2(u);
    return SignedLogReal::from_log(1, log_val) * p_n;
}

SignedLogReal parry_rhoades_estimate(std::int64_t k, std::int64_t m, std::int64_t n,
                                     const SignedLogReal& p_n) {
    require_positive_n(n, "parry_rhoades_estimate");
    if (p_n.sign() <= 0) throw DomainError("parry_rhoades_estimate: p_n must be positive");
    const double s = std::sqrt(6.0 * static_cast<double>(n));
    const double v = kPi * (iabs(m) + static_cast<double>(k)) / (2.0 * s);
    // log(e^v + e^{-v}) = v + log(1 + e^{-2v})
    const double log_cosh_sum = v + std::log1p(std::exp(-2.0 * v));
    return SignedLogReal::from_log(1, std::log(kPi / s) - 2.0 * log_cosh_sum) * p_n;
}

mpz_class main_term_exact(const PartitionTable& table, std::int64_t k, std::int64_t m,
                          std::int64_t n) {
    if (k < 1) throw std::invalid_argument("main_term_exact: k must be >= 1");
    if (n > table.max_n()) {
        throw RangeError("main_term_exact: n = " + std::to_string(n) + " exceeds table max_n");
    }
    const std::int64_t shift = (m < 0 ? -m : m) + k;
    return table.at(n - shift + 1) - table.at(n - shift);
}

SignedLogReal main_term_asymptotic(std::int64_t /*k*/, std::int64_t m, std::int64_t n) {
    const double d = static_cast<double>(n) - iabs(m);
    if (d < 1.0) throw DomainError("main_term_asymptotic: n - |m| must be >= 1");
    const double log_val = std::log(kB / (8.0 * std::sqrt(3.0))) + kB * std::sqrt(d) - 1.5 * std::log(d);
    return SignedLogReal::from_log(1, log_val);
}

double error_bound_zn1(std::int64_t m, std::int64_t n) {
    require_positive_n(n, "error_bound_zn1");
    const double dn = static_cast<double>(n);
    const double am = iabs(m);
    return std::exp(-kPi * am / (2.0 * std::sqrt(6.0 * dn))) + am * am / (dn * std::sqrt(dn));
}

double error_bound_main(std::int64_t /*k*/, std::int64_t m, std::int64_t n) {
    require_positive_n(n, "error_bound_main");
    const double dn = static_cast<double>(n);
    return std::exp(-kPi * iabs(m) / std::sqrt(6.0 * dn)) + std::exp(-kPi * std::sqrt(dn / 6.0) / 5.0);
}

SignedLogReal dprz_lhs(const PartitionTable& table, std::int64_t m, std::int64_t n) {
    if (m < 0 || m > n) {
        throw RangeError("dprz_lhs: requires 0 <= m <= n, got m=" + std::to_string(m) +
                         " n=" + std::to_string(n));
    }
    const mpz_class num = table.at(n - m + 1) - table.at(n - m);
    return SignedLogReal::from_ratio(num, table.at(n));
}

SignedLogReal dprz_rhs(std::int64_t m, std::int64_t n) {
    require_positive_n(n, "dprz_rhs");
    const double root = std::sqrt(static_cast<double>(n));
    const double u = kB * iabs(m) / (4.0 * root);
    return SignedLogReal::from_log(1, std::log(kB / (8.0 * root)) + log_sech2(u));
}

double error_bound_dprz(std::int64_t m, std::int64_t n) {
    require_positive_n(n, "error_bound_dprz");
    const double dn = static_cast<double>(n);
    const double am = iabs(m);
    return std::exp(-kB * am / (4.0 * std::sqrt(dn))) + am * am / (dn * std::sqrt(dn));
}

double breakdown_limit(double c) { return std::exp(-kB * c * c / 8.0); }

SignedLogReal corollary_prediction(std::int64_t r, std::int64_t m, std::int64_t n,
                                   const SignedLogReal& p_nm) {
    if (r < 0) throw std::invalid_argument("corollary_prediction: r must be >= 0");
    const double d = static_cast<double>(n - m);
    if (d < 1.0) throw DomainError("corollary_prediction: n - m must be >= 1");
    if (p_nm.sign() <= 0) throw DomainError("corollary_prediction: p(n-m) must be positive");
    const double log_factor = static_cast<double>(r + 1) * std::log(kPi / std::sqrt(6.0 * d));
    return SignedLogReal::from_log(1, log_factor) * p_nm;
}

double error_bound_corollary(std::int64_t r, std::int64_t m, std::int64_t n) {
    require_positive_n(n, "error_bound_corollary");
    const double d = static_cast<double>(n - m);
    if (d < 1.0) throw DomainError("error_bound_corollary: n - m must be >= 1");
    const double dn = static_cast<double>(n);
    const double tail = std::exp(0.5 * static_cast<double>(r + 1) * std::log(dn) -
                                 kPi * static_cast<double>(m) / std::sqrt(6.0 * dn));
    return 1.0 / std::sqrt(d) + tail;
}

double relative_error(const SignedLogReal& exact, const SignedLogReal& estimate) {
    if (exact.is_zero()) throw DomainError("relative_error: exact value is zero");
    if (estimate.is_zero()) return 1.0;
    const double d = estimate.log_mag() - exact.log_mag();
    if (estimate.sign() == exact.sign()) return std::fabs(std::expm1(d));
    return 1.0 + std::exp(d);
}

double relative_error(const mpz_class& exact, const mpz_class& estimate) {
    if (exact == 0) throw DomainError("relative_error: exact value is zero");
    const mpz_class diff = exact - estimate;
    if (diff == 0) return 0.0;
    return std::exp(log_abs(diff) - log_abs(exact));
}

}  // namespace krank
