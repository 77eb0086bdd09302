#include "gl3sup/scaled_real.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gl3sup/error.hpp"

namespace gl3sup {

ScaledReal::ScaledReal(double value) : mantissa_(value) {
    if (!std::isfinite(value)) throw Overflow("ScaledReal: non-finite input");
    normalize();
}

void ScaledReal::normalize() {
    if (mantissa_ == 0.0) {
        exp2_ = 0;
        return;
    }
    int e = 0;
    double m = std::frexp(mantissa_, &e);  // |m| in [0.5, 1)
    mantissa_ = 2.0 * m;
    exp2_ += e - 1;
}

ScaledReal ScaledReal::from_log(double log_abs, int sign) {
    if (std::isnan(log_abs)) throw Overflow("ScaledReal::from_log: NaN");
    ScaledReal r;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
    if (!std::isfinite(log_abs)) throw Overflow("ScaledReal::from_log: infinite log");
    const double l2 = log_abs / std::numbers::ln2;
    const double whole = std::floor(l2);
    r.mantissa_ = (sign > 0 ? 1.0 : -1.0) * std::exp2(l2 - whole);
    r.exp2_ = static_cast<std::int64_t>(whole);
    r.normalize();
    return r;
}

ScaledReal ScaledReal::from_parts(double m, std::int64_t e) {
    ScaledReal r(m);
    if (!r.is_zero()) r.exp2_ += e;
    return r;
}

double ScaledReal::log_abs() const {
    if (mantissa_ == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa_)) + static_cast<double>(exp2_) * std::numbers::ln2;
}

double ScaledReal::to_double() const {
    if (mantissa_ == 0.0) return 0.0;
    if (exp2_ > 2000) return mantissa_ * std::numeric_limits<double>::infinity();
    if (exp2_ < -2000) return 0.0 * mantissa_;
    return std::ldexp(mantissa_, static_cast<int>(exp2_));
}

ScaledReal& ScaledReal::operator*=(const ScaledReal& o) {
    mantissa_ *= o.mantissa_;
    exp2_ += o.exp2_;
    normalize();
    return *this;
}

ScaledReal& ScaledReal::operator/=(const ScaledReal& o) {
    if (o.mantissa_ == 0.0) throw DomainError("ScaledReal: division by zero");
    mantissa_ /= o.mantissa_;
    exp2_ -= o.exp2_;
    normalize();
    return *this;
}

}  // namespace gl3sup
