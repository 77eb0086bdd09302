#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace gl3sup {

/// Neumaier (improved Kahan-Babuska) compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

inline std::complex<double> compensated_sum(std::span<const std::complex<double>> xs) {
    CompensatedSum re, im;
    for (const auto& x : xs) {
        re.add(x.real());
        im.add(x.imag());
    }
    return {re.value(), im.value()};
}

}  // namespace gl3sup
