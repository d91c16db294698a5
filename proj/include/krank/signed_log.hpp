#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <span>
#include <string>

#include <gmpxx.h>

namespace krank {

/// A real number stored as sign and natural log of its magnitude, so that
/// values around e^{B sqrt(n)} with n up to 10^6 stay representable.
///
/// Arithmetic never leaves the log domain: products add logs, sums shift by
/// the larger magnitude before exponentiating. Relative precision is that of
/// a double applied to log_mag, about 1e-16 * |log_mag|.
class SignedLogReal {
public:
    constexpr SignedLogReal() = default;

    static constexpr SignedLogReal zero() { return SignedLogReal{}; }
    static SignedLogReal from_log(int sign, double log_mag);
    static SignedLogReal from_double(double x);
    static SignedLogReal from_mpz(const mpz_class& x);
    /// Quotient of two exact integers, rounded once at the end.
    static SignedLogReal from_ratio(const mpz_class& num, const mpz_class& den);

    int sign() const { return sign_; }
    double log_mag() const { return log_mag_; }
    bool is_zero() const { return sign_ == 0; }

    double to_double() const;

    SignedLogReal operator-() const { return from_log(-sign_, log_mag_); }
    SignedLogReal abs() const { return from_log(sign_ == 0 ? 0 : 1, log_mag_); }

    friend SignedLogReal operator*(const SignedLogReal& a, const SignedLogReal& b);
    friend SignedLogReal operator/(const SignedLogReal& a, const SignedLogReal& b);
    friend SignedLogReal operator+(const SignedLogReal& a, const SignedLogReal& b);
    friend SignedLogReal operator-(const SignedLogReal& a, const SignedLogReal& b) {
        return a + (-b);
    }

    SignedLogReal& operator*=(const SignedLogReal& o) { return *this = *this * o; }
    SignedLogReal& operator+=(const SignedLogReal& o) { return *this = *this + o; }

    friend std::partial_ordering operator<=>(const SignedLogReal& a, const SignedLogReal& b);
    friend bool operator==(const SignedLogReal& a, const SignedLogReal& b) {
        return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_mag_ == b.log_mag_);
    }

    /// "s*exp(L)" with s in {-1, 1} and L printed to 17 significant digits;
    /// "0" for zero.
    std::string to_string() const;

private:
    constexpr SignedLogReal(int sign, double log_mag) : sign_(sign), log_mag_(log_mag) {}

    int sign_ = 0;
    double log_mag_ = -std::numeric_limits<double>::infinity();
};

/// Sum of many terms: shift every term by the largest log magnitude, then
/// accumulate the shifted values with Neumaier compensation.
SignedLogReal compensated_sum(std::span<const SignedLogReal> terms);

/// Natural log of |x| for a nonzero big integer, using a 53-bit mantissa.
double log_abs(const mpz_class& x);

}  // namespace krank
