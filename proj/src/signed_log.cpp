#include "krank/signed_log.hpp"

#include <algorithm>
#include <cstdio>
#include <numbers>
#include <vector>

#include "krank/errors.hpp"

namespace krank {

SignedLogReal SignedLogReal::from_log(int sign, double log_mag) {
    if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity()) return zero();
    if (std::isnan(log_mag)) throw DomainError("SignedLogReal: NaN log magnitude");
    return SignedLogReal(sign > 0 ? 1 : -1, log_mag);
}

SignedLogReal SignedLogReal::from_double(double x) {
    if (std::isnan(x)) throw DomainError("SignedLogReal::from_double: NaN");
    if (x == 0.0) return zero();
    return SignedLogReal(x > 0 ? 1 : -1, std::log(std::fabs(x)));
}

double log_abs(const mpz_class& x) {
    if (x == 0) throw DomainError("log_abs: zero has no logarithm");
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::numbers::ln2;
}

SignedLogReal SignedLogReal::from_mpz(const mpz_class& x) {
    const int s = sgn(x);
    if (s == 0) return zero();
    return SignedLogReal(s, log_abs(x));
}

SignedLogReal SignedLogReal::from_ratio(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("SignedLogReal::from_ratio: zero denominator");
    const int s = sgn(num) * sgn(den);
    if (s == 0) return zero();
    return SignedLogReal(s, log_abs(num) - log_abs(den));
}

double SignedLogReal::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_mag_);
}

SignedLogReal operator*(const SignedLogReal& a, const SignedLogReal& b) {
    if (a.sign_ == 0 || b.sign_ == 0) return SignedLogReal::zero();
    return SignedLogReal(a.sign_ * b.sign_, a.log_mag_ + b.log_mag_);
}

SignedLogReal operator/(const SignedLogReal& a, const SignedLogReal& b) {
    if (b.sign_ == 0) throw DomainError("SignedLogReal: division by zero");
    if (a.sign_ == 0) return SignedLogReal::zero();
    return SignedLogReal(a.sign_ * b.sign_, a.log_mag_ - b.log_mag_);
}

SignedLogReal operator+(const SignedLogReal& a, const SignedLogReal& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const SignedLogReal& big = (a.log_mag_ >= b.log_mag_) ? a : b;
    const SignedLogReal& small = (a.log_mag_ >= b.log_mag_) ? b : a;
    const double d = small.log_mag_ - big.log_mag_;  // <= 0
    if (big.sign_ == small.sign_) {
        return SignedLogReal(big.sign_, big.log_mag_ + std::log1p(std::exp(d)));
    }
    if (d == 0.0) return SignedLogReal::zero();
    // 1 - e^d = -expm1(d), accurate when d is close to 0.
    return SignedLogReal(big.sign_, big.log_mag_ + std::log(-std::expm1(d)));
}

std::partial_ordering operator<=>(const SignedLogReal& a, const SignedLogReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
    if (a.sign_ == 0) return std::partial_ordering::equivalent;
    return a.sign_ > 0 ? (a.log_mag_ <=> b.log_mag_) : (b.log_mag_ <=> a.log_mag_);
}

std::string SignedLogReal::to_string() const {
    if (sign_ == 0) return "0";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%d*exp(%.17g)", sign_, log_mag_);
    return buf;
}

SignedLogReal compensated_sum(std::span<const SignedLogReal> terms) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        if (!t.is_zero()) top = std::max(top, t.log_mag());
    }
    if (top == -std::numeric_limits<double>::infinity()) return SignedLogReal::zero();

    double sum = 0.0;
    double comp = 0.0;
    for (const auto& t : terms) {
        if (t.is_zero()) continue;
        const double x = t.sign() * std::exp(t.log_mag() - top);
        const double s = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - s) + x;
        } else {
            comp += (x - s) + sum;
        }
        sum = s;
    }
    const double total = sum + comp;
    if (total == 0.0) return SignedLogReal::zero();
    return SignedLogReal::from_log(total > 0 ? 1 : -1, top + std::log(std::fabs(total)));
}

}  // namespace krank
