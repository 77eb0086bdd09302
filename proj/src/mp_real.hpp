#pragma once

// Minimal RAII holder for an MPFR variable with a fixed precision. Internal to the library.

#include <mpfr.h>

#include <cstdint>
#include <utility>

namespace gl3sup::detail {

class MpReal {
public:
    explicit MpReal(mpfr_prec_t bits, double v = 0.0) {
        mpfr_init2(x_, bits);
        mpfr_set_d(x_, v, MPFR_RNDN);
    }
    MpReal(const MpReal&) = delete;
    MpReal& operator=(const MpReal&) = delete;
    ~MpReal() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

    /// value = mantissa * 2^exp with |mantissa| in [0.5, 1).
    std::pair<double, std::int64_t> split() const {
        long e = 0;
        const double m = mpfr_get_d_2exp(&e, x_, MPFR_RNDN);
        return {m, static_cast<std::int64_t>(e)};
    }
    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

private:
    mpfr_t x_;
};

}  // namespace gl3sup::detail
