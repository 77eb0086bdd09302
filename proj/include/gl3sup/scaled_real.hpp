#pragma once

#include <cstdint>

namespace gl3sup {

/// A real number stored as mantissa * 2^exp2 with |mantissa| in [1,2) (or exactly 0).
///
/// Used for Bessel values of size e^{-pi t/2} and gamma factors of size e^{+pi t/2}
/// so that their product can be formed without under/overflow.
class ScaledReal {
public:
    constexpr ScaledReal() = default;
    explicit ScaledReal(double value);

    /// sign * exp(log_abs); never overflows for finite log_abs.
    static ScaledReal from_log(double log_abs, int sign = 1);
    /// m * 2^e, exact.
    static ScaledReal from_parts(double m, std::int64_t e);

    [[nodiscard]] double mantissa() const { return mantissa_; }
    [[nodiscard]] std::int64_t exp2() const { return exp2_; }
    [[nodiscard]] bool is_zero() const { return mantissa_ == 0.0; }
    [[nodiscard]] int sign() const { return mantissa_ > 0 ? 1 : (mantissa_ < 0 ? -1 : 0); }

    /// Natural log of |value|; -inf for zero.
    [[nodiscard]] double log_abs() const;
    /// Conversion to double; saturates to +-inf / flushes to 0 outside the double range.
    [[nodiscard]] double to_double() const;

    ScaledReal& operator*=(const ScaledReal& o);
    ScaledReal& operator/=(const ScaledReal& o);
    friend ScaledReal operator*(ScaledReal a, const ScaledReal& b) { return a *= b; }
    friend ScaledReal operator/(ScaledReal a, const ScaledReal& b) { return a /= b; }
    friend ScaledReal operator-(ScaledReal a) {
        a.mantissa_ = -a.mantissa_;
        return a;
    }

    friend bool operator==(const ScaledReal&, const ScaledReal&) = default;

private:
    void normalize();

    double mantissa_ = 0.0;
    std::int64_t exp2_ = 0;
};

}  // namespace gl3sup
