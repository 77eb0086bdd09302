#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace gl3sup::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
    double l1 = 0.0;     ///< integral of |f|, used as the cancellation scale
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]. Converged means error <= max(abs_tol, rel_tol * l1).
/// Throws NonConvergence (tagged with `what`) otherwise.
Result adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double abs_tol, const char* what, unsigned max_depth = 18);

/// Sum of adaptive() over consecutive panels [pts[k], pts[k+1]].
/// Tolerances are applied to the total, distributed over panels by length.
Result adaptive_panels(const std::function<double(double)>& f, std::span<const double> pts,
                       double rel_tol, double abs_tol, const char* what);

/// Fixed 20-point Gauss-Legendre rule on [a, b].
double gauss_legendre20(const std::function<double(double)>& f, double a, double b);

/// Uniform breakpoints a = p0 < ... < pn = b with spacing at most `width`.
std::vector<double> uniform_breaks(double a, double b, double width);

/// Error-free (Neumaier) accumulation; deterministic for a fixed input order.
template <typename T>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

}  // namespace gl3sup::quad
