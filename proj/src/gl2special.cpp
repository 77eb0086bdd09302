#include "gl3sup/gl2special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "gl3sup/error.hpp"
#include "gl3sup/quadrature.hpp"
#include "mp_real.hpp"

namespace gl3sup {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_args(double t, double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("K_{it}(x): x must be finite and > 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("K_{it}(x): t must be finite and >= 0");
}

// sinh(r) - r without cancellation for small r.
double sinh_minus_id(double r) {
    if (std::abs(r) < 0.1) {
        const double r2 = r * r;
        return r * r2 *
               (1.0 / 6 + r2 * (1.0 / 120 + r2 * (1.0 / 5040 + r2 * (1.0 / 362880 + r2 / 39916800))));
    }
    return std::sinh(r) - r;
}

// cosh(r) - 1 without cancellation.
double cosh_minus_one(double r) {
    const double h = std::sinh(0.5 * r);
    return 2.0 * h * h;
}

// Truncation point of the real-axis integral: the tail is below e^{-46} times the natural scale.
double real_axis_cutoff(double t, double x) {
    return std::acosh(1.0 + (46.0 + 0.5 * kPi * t) / x);
}

std::string describe(const char* what, double t, double x) {
    std::ostringstream os;
    os.precision(17);
    os << what << " did not converge for t = " << t << ", x = " << x;
    return os.str();
}

ScaledReal real_axis_double(double t, double x, const BesselEvalConfig& cfg) {
    const double ustar = real_axis_cutoff(t, x);
    auto n = static_cast<long>(std::ceil(ustar / std::min(0.5 / (t + 1.0), ustar / 64.0)));
    double h = ustar / static_cast<double>(n);
    const double scale = std::exp(-0.5 * kPi * t);

    double sum = 0.5;  // f(0) = e^{-x} is factored out below
    double l1 = 0.5;
    // Integrand relative to e^{-x}: exp(-x (cosh u - 1)) cos(t u).
    auto f = [&](double u) { return std::exp(-x * cosh_minus_one(u)) * std::cos(t * u); };
    auto fabs_ = [&](double u) { return std::exp(-x * cosh_minus_one(u)); };
    for (long k = 1; k <= n; ++k) {
        const double u = h * static_cast<double>(k);
        sum += f(u);
        l1 += fabs_(u);
    }
    double value = h * sum;
    double l1v = h * l1;
    const double ex = std::exp(-x);
    for (int r = 0; r < cfg.max_refinements; ++r) {
        double odd = 0.0;
        double odd_abs = 0.0;
        for (long k = 0; k < n; ++k) {
            const double u = h * (static_cast<double>(k) + 0.5);
            odd += f(u);
            odd_abs += fabs_(u);
        }
        const double next = 0.5 * value + 0.5 * h * odd;
        l1v = 0.5 * l1v + 0.5 * h * odd_abs;
        n *= 2;
        h *= 0.5;
        const double delta = std::abs(next - value);
        value = next;
        // The last term is the rounding floor: node phases t*u carry absolute error ~eps*t*u.
        const double tol = std::max({cfg.rel_tol * std::abs(value),
                                     cfg.abs_tol * std::min(scale, l1v * ex) / std::max(ex, 1e-300),
                                     64.0 * kEps * l1v * (1.0 + t * ustar)});
        if (delta <= tol) return ScaledReal(value) * ScaledReal::from_log(-x);
    }
    throw NonConvergence(describe("real-axis K (double)", t, x));
}

ScaledReal real_axis_mpfr(double t, double x, const BesselEvalConfig& cfg) {
    using detail::MpReal;
    const int digits = 20 + static_cast<int>(std::ceil(0.69 * t));
    const auto bits = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;

    const double ustar = real_axis_cutoff(t, x);
    auto n = static_cast<long>(std::ceil(ustar / std::min(0.5 / (t + 1.0), ustar / 64.0)));

    MpReal h(bits), u(bits), tmp(bits), c(bits), sum(bits), odd(bits), value(bits), next(bits),
        delta(bits), xs(bits, x), ts(bits, t), scale(bits);
    mpfr_set_d(h.get(), ustar, MPFR_RNDN);
    mpfr_div_si(h.get(), h.get(), n, MPFR_RNDN);
    mpfr_set_d(scale.get(), -0.5 * kPi * t, MPFR_RNDN);
    mpfr_exp(scale.get(), scale.get(), MPFR_RNDN);

    // f(u) = exp(-x cosh u) cos(t u), accumulated into acc.
    auto add_node = [&](mpfr_ptr acc, long k2, long den) {
        mpfr_mul_si(u.get(), h.get(), k2, MPFR_RNDN);
        if (den != 1) mpfr_div_si(u.get(), u.get(), den, MPFR_RNDN);
        mpfr_cosh(tmp.get(), u.get(), MPFR_RNDN);
        mpfr_mul(tmp.get(), tmp.get(), xs.get(), MPFR_RNDN);
        mpfr_neg(tmp.get(), tmp.get(), MPFR_RNDN);
        mpfr_exp(tmp.get(), tmp.get(), MPFR_RNDN);
        mpfr_mul(c.get(), u.get(), ts.get(), MPFR_RNDN);
        mpfr_cos(c.get(), c.get(), MPFR_RNDN);
        mpfr_mul(tmp.get(), tmp.get(), c.get(), MPFR_RNDN);
        mpfr_add(acc, acc, tmp.get(), MPFR_RNDN);
    };

    mpfr_neg(tmp.get(), xs.get(), MPFR_RNDN);  // f(0)/2 = e^{-x}/2
    mpfr_exp(sum.get(), tmp.get(), MPFR_RNDN);
    mpfr_div_2ui(sum.get(), sum.get(), 1, MPFR_RNDN);
    for (long k = 1; k <= n; ++k) add_node(sum.get(), k, 1);
    mpfr_mul(value.get(), sum.get(), h.get(), MPFR_RNDN);

    for (int r = 0; r < cfg.max_refinements; ++r) {
        mpfr_set_zero(odd.get(), 1);
        for (long k = 0; k < n; ++k) add_node(odd.get(), 2 * k + 1, 2);
        // next = value/2 + (h/2) * odd
        mpfr_mul(next.get(), odd.get(), h.get(), MPFR_RNDN);
        mpfr_add(next.get(), next.get(), value.get(), MPFR_RNDN);
        mpfr_div_2ui(next.get(), next.get(), 1, MPFR_RNDN);
        mpfr_div_2ui(h.get(), h.get(), 1, MPFR_RNDN);
        n *= 2;
        mpfr_sub(delta.get(), next.get(), value.get(), MPFR_RNDN);
        mpfr_abs(delta.get(), delta.get(), MPFR_RNDN);
        mpfr_swap(value.get(), next.get());

        // tol = max(rel_tol |value|, abs_tol * scale)
        mpfr_abs(tmp.get(), value.get(), MPFR_RNDN);
        mpfr_mul_d(tmp.get(), tmp.get(), cfg.rel_tol, MPFR_RNDN);
        mpfr_mul_d(c.get(), scale.get(), cfg.abs_tol, MPFR_RNDN);
        mpfr_max(tmp.get(), tmp.get(), c.get(), MPFR_RNDN);
        if (mpfr_cmp(delta.get(), tmp.get()) <= 0) {
            const auto [m, e] = value.split();
            return ScaledReal::from_parts(m, e);
        }
    }
    throw NonConvergence(describe("real-axis K (mpfr)", t, x));
}

// Monotone region (t <= x): the path sigma(s) = asin(t s / (x sinh s)) through the saddle i*asin(t/x)
// carries a real, positive integrand exp(-x cosh s cos sigma - t sigma).
ScaledReal contour_monotone(double t, double x, const BesselEvalConfig& cfg) {
    const double cos0 = std::sqrt((x - t) * (x + t)) / x;
    const double r0 = -x * cos0 - t * std::atan2(t / x, cos0);

    // R(s) - R(0) with R = -x cosh(s) cos(sigma) - t sigma, arranged so that nothing of size x cancels.
    const double f0 = t / x;
    auto exponent = [&](double s) {
        if (s == 0.0) return 0.0;
        const double sh = std::sinh(s);
        const double df = f0 * sinh_minus_id(s) / sh;  // f0 - f
        const double f = f0 - df;
        const double om = (x * sinh_minus_id(s) + (x - t) * s) / (x * sh);  // 1 - f
        const double c = std::sqrt(om * (1.0 + f));
        const double dc = df * (f0 + f) / (c + cos0);  // cos(sigma) - cos(sigma0)
        const double dsig = std::atan2(-cos0 * df - f0 * dc, c * cos0 + f * f0);
        return -x * (cosh_minus_one(s) * c + dc) - t * dsig;
    };
    double upper = 1.0;
    while (exponent(upper) > -50.0) {
        upper *= 1.5;
        if (upper > 700.0) throw NonConvergence(describe("contour K truncation", t, x));
    }
    const auto res = quad::adaptive([&](double s) { return std::exp(exponent(s)); }, 0.0, upper,
                                    cfg.rel_tol, 0.0, "contour K (monotone)");
    return ScaledReal(res.value) * ScaledReal::from_log(r0);
}

// Oscillatory region (t > x): from i*pi/2 along Im u = pi/2 to the saddle s0 + i*pi/2, then down the
// steepest-descent path to +inf. Everything is measured in units of e^{-pi t/2}.
ScaledReal contour_oscillatory(double t, double x, const BesselEvalConfig& cfg) {
    const double s0 = std::acosh(t / x);
    const double xs0 = std::sqrt((t - x) * (t + x));  // x sinh(s0)
    const double c0 = t * s0 - xs0;                    // Im of the exponent along the descent path

    // Horizontal leg: integral over [0, s0] of cos(t s - x sinh s), panels of at most pi phase change.
    const double wmax = std::min({0.5, std::sqrt(2.0 * kPi / xs0), std::cbrt(6.0 * kPi / t)});
    auto leg = [&](double s) { return std::cos(t * s - x * std::sinh(s)); };
    quad::CompensatedSum<double> horizontal;
    for (double s = 0.0; s < s0;) {
        const double slope = t - x * std::cosh(s);
        double w = std::min(wmax, slope > 0.0 ? kPi / slope : wmax);
        const double e = (s + w >= s0 - 1e-3 * w) ? s0 : s + w;
        horizontal.add(quad::gauss_legendre20(leg, s, e));
        s = e;
    }

    const double cc = std::cos(c0);
    const double sc = std::sin(c0);
    // On the path sin(sigma) = f(s) = 1 - N(r)/(x sinh s), r = s - s0.
    auto descent = [&](double r, double* dsigma) {
        const double s = s0 + r;
        const double xsh = x * std::sinh(s);
        const double n = xs0 * cosh_minus_one(r) + t * sinh_minus_id(r);
        const double np = xs0 * std::sinh(r) + t * cosh_minus_one(r);
        const double q = n / xsh;  // 1 - f
        const double f = 1.0 - q;
        const double c = std::sqrt(std::max(0.0, q * (1.0 + f)));  // cos(sigma)
        if (dsigma != nullptr) {
            const double fp = -np / xsh + q / std::tanh(s);
            *dsigma = (c > 0.0) ? fp / c : -1.0;
        }
        // R + pi t/2 with pi/2 - sigma = atan2(cos sigma, sin sigma)
        return -x * std::cosh(s) * c + t * std::atan2(c, f);
    };
    double upper = 1.0;
    while (descent(upper, nullptr) > -50.0) {
        upper *= 1.5;
        if (upper > 700.0) throw NonConvergence(describe("contour K truncation", t, x));
    }
    const auto res = quad::adaptive(
        [&](double r) {
            double ds = 0.0;
            const double e = descent(r, &ds);
            return std::exp(e) * (cc - ds * sc);
        },
        0.0, upper, cfg.rel_tol, cfg.abs_tol, "contour K (oscillatory)");

    return ScaledReal(horizontal.value() + res.value) * ScaledReal::from_log(-0.5 * kPi * t);
}

}  // namespace

void BesselEvalConfig::validate() const {
    if (!(abs_tol > 0.0 && abs_tol <= 1e-3) || !(rel_tol > 0.0 && rel_tol <= 1e-3))
        throw DomainError("BesselEvalConfig: tolerances must lie in (0, 1e-3]");
    if (max_refinements < 4) throw DomainError("BesselEvalConfig: max_refinements must be >= 4");
    if (!(t_switch >= 0.0)) throw DomainError("BesselEvalConfig: t_switch must be >= 0");
}

ScaledReal k_bessel_real_axis(double t, double x, const BesselEvalConfig& cfg) {
    check_args(t, x);
    cfg.validate();
    return t <= cfg.t_switch ? real_axis_double(t, x, cfg) : real_axis_mpfr(t, x, cfg);
}

ScaledReal k_bessel_contour(double t, double x, const BesselEvalConfig& cfg) {
    check_args(t, x);
    cfg.validate();
    return t <= x ? contour_monotone(t, x, cfg) : contour_oscillatory(t, x, cfg);
}

ScaledReal k_bessel_imag_scaled(double t, double x, const BesselEvalConfig& cfg) {
    switch (cfg.kernel) {
        case BesselKernel::RealAxis:
            return k_bessel_real_axis(t, x, cfg);
        case BesselKernel::Contour:
        case BesselKernel::Auto:
            break;
    }
    return k_bessel_contour(t, x, cfg);
}

ScaledReal gamma_half_modulus(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("gamma_half_modulus: t must be >= 0");
    const double y = kPi * t;
    const double log_cosh = y + std::log1p(std::exp(-2.0 * y)) - std::numbers::ln2;
    return ScaledReal::from_log(0.5 * (std::log(kPi) - log_cosh));
}

double gl2_whittaker(double t, double x, const BesselEvalConfig& cfg) {
    if (!(x > 0.0)) throw DomainError("gl2_whittaker: x must be > 0");
    const ScaledReal k = k_bessel_imag_scaled(t, 2.0 * kPi * x, cfg);
    return (ScaledReal(std::sqrt(x)) * k / gamma_half_modulus(t)).to_double();
}

double whittaker_tail_cutoff(double t, double cut) {
    return std::max(cut, std::max(0.5, t)) + 20.0;
}

double whittaker_sq_log_integral(double t, const BesselEvalConfig& cfg) {
    // In w = log x the integrand is W(e^w)^2; below x = 1e-14 it is O(x log^2 x) and dropped.
    const double lo = std::log(1e-14);
    const double hi = std::log(whittaker_tail_cutoff(t, 0.0));
    const auto pts = quad::uniform_breaks(lo, hi, std::min(1.0, kPi / (2.0 * t + 2.0)));
    const auto res = quad::adaptive_panels(
        [&](double w) {
            const double v = gl2_whittaker(t, std::exp(w), cfg);
            return v * v;
        },
        pts, 1e-9, 1e-10, "whittaker_sq_log_integral");
    return res.value;
}

double whittaker_sq_tail_integral(double t, double cut, const BesselEvalConfig& cfg) {
    if (!(cut >= 0.0) || !std::isfinite(cut))
        throw DomainError("whittaker_sq_tail_integral: cut must be finite and >= 0");
    if (cut == 0.0) return whittaker_sq_log_integral(t, cfg);
    // x = cut cosh(s) removes the inverse square-root singularity: the integrand becomes W(x)^2 ds.
    const double hi = whittaker_tail_cutoff(t, cut);
    const double smax = std::acosh(std::max(hi / cut, 1.0 + 1e-12));
    const auto pts = quad::uniform_breaks(0.0, smax, std::min(0.5, kPi / (2.0 * t + 2.0)));
    const auto res = quad::adaptive_panels(
        [&](double s) {
            const double v = gl2_whittaker(t, cut * std::cosh(s), cfg);
            return v * v;
        },
        pts, 1e-9, 1e-10, "whittaker_sq_tail_integral");
    return res.value;
}

}  // namespace gl3sup
