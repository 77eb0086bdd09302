#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "gl3sup/error.hpp"
#include "gl3sup/gl2special.hpp"

using namespace gl3sup;

namespace {

// K_{it}(x) = int_0^inf exp(-x cosh u) cos(t u) du by a plain long-double trapezoid; fine for small t.
double k_trapezoid(double t, double x) {
    const long double h = 1.0L / 512;
    long double s = 0.5L * std::exp(-static_cast<long double>(x));
    for (int k = 1;; ++k) {
        const long double u = k * h;
        const long double term = std::exp(-x * std::cosh(u)) * std::cos(t * u);
        s += term;
        if (std::exp(-x * std::cosh(u)) < 1e-30L) break;
    }
    return static_cast<double>(s * h);
}

}  // namespace

TEST_SUITE("gl2special") {
    TEST_CASE("order zero matches the Boost K0") {
        for (double x : {0.01, 0.3, 1.0, 4.0, 25.0}) {
            const double ref = boost::math::cyl_bessel_k(0, x);
            for (auto kernel : {BesselKernel::Auto, BesselKernel::RealAxis, BesselKernel::Contour}) {
                BesselEvalConfig cfg;
                cfg.kernel = kernel;
                CHECK(k_bessel_imag_scaled(0.0, x, cfg).to_double() == doctest::Approx(ref).epsilon(1e-11));
            }
        }
    }

    TEST_CASE("small orders match a direct trapezoid") {
        for (double t : {0.5, 2.0, 6.0})
            for (double x : {0.5, 3.0, 8.0}) {
                const double ref = k_trapezoid(t, x);
                const double scale = std::exp(-std::numbers::pi * t / 2);
                CHECK(std::abs(k_bessel_imag_scaled(t, x).to_double() - ref) <= 1e-11 * std::max(scale, std::abs(ref)));
            }
    }

    TEST_CASE("contour kernel agrees with the MPFR real-axis kernel at large order") {
        for (double t : {30.0, 80.0})
            for (double x : {0.3 * t, t, 1.5 * t}) {
                const auto a = k_bessel_contour(t, x);
                const auto b = k_bessel_real_axis(t, x);
                const double scale = std::exp(-std::numbers::pi * t / 2);
                const double diff = (a / ScaledReal(scale)).to_double() - (b / ScaledReal(scale)).to_double();
                CHECK(std::abs(diff) < 1e-9);
            }
    }

    TEST_CASE("gamma modulus against the infinite product") {
        for (double t : {0.5, 2.0}) {
            // |Gamma(1/2+it)|^2 / pi = prod_{n>=0} (1 + t^2/(n+1/2)^2)^{-1}; tail beyond N is about exp(-t^2/N).
            long double logp = 0;
            const int N = 2'000'000;
            for (int n = 0; n < N; ++n) logp -= std::log1p(static_cast<long double>(t * t) / ((n + 0.5L) * (n + 0.5L)));
            logp -= static_cast<long double>(t * t) / N;
            const double ref = std::sqrt(std::numbers::pi * std::exp(static_cast<double>(logp)));
            CHECK(gamma_half_modulus(t).to_double() == doctest::Approx(ref).epsilon(1e-8));
        }
        CHECK(gamma_half_modulus(300.0).log_abs() ==
              doctest::Approx(0.5 * std::log(2 * std::numbers::pi) - std::numbers::pi * 150).epsilon(1e-12));
    }

    TEST_CASE("eighth identity at a non-grid order") {
        CHECK(whittaker_sq_log_integral(3.0) == doctest::Approx(0.125).epsilon(1e-9));
    }

    TEST_CASE("tail integral at cut zero is bounded by the full integral scale") {
        const double full = whittaker_sq_tail_integral(4.0, 0.0);
        CHECK(full > 0.0);
        CHECK(whittaker_sq_tail_integral(4.0, 40.0) < 1e-20);
    }

    TEST_CASE("domain errors") {
        CHECK_THROWS_AS(k_bessel_imag_scaled(1.0, 0.0), DomainError);
        CHECK_THROWS_AS(k_bessel_imag_scaled(-1.0, 1.0), DomainError);
        BesselEvalConfig bad;
        bad.rel_tol = 0.1;
        CHECK_THROWS_AS(bad.validate(), DomainError);
    }

    TEST_CASE("K0 at 1 against its power series") {
        // K0(x) = -(log(x/2) + gamma) I0(x) + sum_k (x^2/4)^k / (k!)^2 H_k
        const double x = 1.0;
        double i0 = 0, tail = 0, term = 1, H = 0;
        for (int k = 0; k < 30; ++k) {
            if (k > 0) {
                term *= (x * x / 4) / (static_cast<double>(k) * k);
                H += 1.0 / k;
            }
            i0 += term;
            tail += term * H;
        }
        const double ref = -(std::log(x / 2) + std::numbers::egamma) * i0 + tail;
        CHECK(k_bessel_imag_scaled(0.0, x).to_double() == doctest::Approx(ref).epsilon(1e-10));
    }

    TEST_CASE("large argument asymptotic") {
        const double x = 50;
        CHECK(k_bessel_imag_scaled(0.0, x).to_double() ==
              doctest::Approx(std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x)).epsilon(0.01));
    }

    TEST_CASE("small argument against the multiprecision kernel") {
        const double scale = std::exp(-std::numbers::pi * 2.5);
        const double a = k_bessel_contour(5.0, 0.01).to_double(), b = k_bessel_real_axis(5.0, 0.01).to_double();
        CHECK(std::abs(a - b) < 1e-10 * scale);
    }

    TEST_CASE("gamma modulus closed values") {
        CHECK(gamma_half_modulus(0.0).to_double() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
        CHECK(gamma_half_modulus(1.0).to_double() ==
              doctest::Approx(std::sqrt(std::numbers::pi / std::cosh(std::numbers::pi))).epsilon(1e-14));
    }

    TEST_CASE("eighth identity at the listed orders") {
        CHECK(std::abs(whittaker_sq_log_integral(0.0) - 0.125) < 1e-6);
        CHECK(std::abs(whittaker_sq_log_integral(5.0) - 0.125) < 1e-6);
        CHECK(std::abs(whittaker_sq_log_integral(20.0) - 0.125) < 1e-5);
    }
}
