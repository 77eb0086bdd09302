#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

#include "gl3sup/error.hpp"
#include "gl3sup/whittaker3.hpp"

using namespace gl3sup;

namespace {

// nu = 0: W~ = 4 pi^{3/2} / |Gamma(1/2)|^3 * y1 y2 * int K0(2 pi y1 sqrt(1+e^v)) K0(2 pi y2 sqrt(1+e^{-v})) dv.
double jw_zero_oracle(double y1, double y2) {
    using boost::math::cyl_bessel_k;
    const double pi = std::numbers::pi;
    const double h = 1.0 / 64;
    double s = 0.0;
    for (double v = -50; v <= 50; v += h)
        s += cyl_bessel_k(0, 2 * pi * y1 * std::sqrt(1 + std::exp(v))) *
             cyl_bessel_k(0, 2 * pi * y2 * std::sqrt(1 + std::exp(-v)));
    return 4 * std::pow(pi, 1.5) / std::pow(pi, 1.5) * y1 * y2 * s * h;
}

}  // namespace

TEST_SUITE("whittaker3") {
    TEST_CASE("spherical parameter against a Boost-K0 trapezoid") {
        for (auto [y1, y2] : {std::pair{0.3, 0.3}, {1.0, 0.5}, {0.7, 1.6}}) {
            const auto w = jw_diagonal(SpectralTriple(0, 0), y1, y2);
            CHECK(w.real() == doctest::Approx(jw_zero_oracle(y1, y2)).epsilon(1e-9));
            CHECK(std::abs(w.imag()) < 1e-12 * std::abs(w.real()));
        }
    }

    TEST_CASE("swapping heights matches swapping parameters") {
        const SpectralTriple nu(1.5, 4.0);
        for (auto [y1, y2] : {std::pair{0.4, 0.9}, {1.2, 0.3}}) {
            const auto a = jw_diagonal(nu, y1, y2);
            const auto b = jw_diagonal(nu.swapped(), y2, y1);
            CHECK(std::abs(a - b) < 1e-9 * std::max(1e-300, std::abs(a)));
        }
    }

    TEST_CASE("phase factor") {
        CHECK(std::abs(unit_phase(0.25) - std::complex<double>(0, 1)) < 1e-15);
        CHECK(unit_phase(3.0) == std::complex<double>(1, 0));
        const SpectralTriple nu(1, 1);
        const H3Point z{0.1, 0.2, 0.0, 0.8, 0.9};
        const auto w0 = jw_diagonal(nu, 0.8, 0.9);
        CHECK(std::abs(jw_full(nu, z, 1) - unit_phase(0.3) * w0) < 1e-15);
        CHECK(std::abs(jw_full(nu, z, -1) - unit_phase(-0.1) * w0) < 1e-15);
    }

    TEST_CASE("envelope ratio is finite and small on a coarse grid") {
        const std::vector<SpectralTriple> nus{SpectralTriple(1, 1)};
        const std::vector<double> ys{0.5, 2.0};
        const auto rep = verify_lemma42(nus, ys, 3.0, 100.0);
        CHECK(rep.pass);
        CHECK(rep.stats.at("max_ratio") > 0.0);
    }

    TEST_CASE("envelope formula") {
        const SpectralTriple nu(3, 4);
        const double T0 = 7;
        CHECK(lemma42_envelope(nu, T0, T0, 1.0, 1.0) == doctest::Approx(std::log(T0) * T0 / 4));
        CHECK(lemma42_envelope(nu, 2, 3, 3.0, 2.0) == doctest::Approx(2 * lemma42_envelope(nu, 2, 3, 3.0, 1.0)));
        CHECK(lemma42_envelope(nu, 2 * T0, 2 * T0, 3.0, 1.0) < lemma42_envelope(nu, 2 * T0, 2 * T0, 2.0, 1.0));
    }

    TEST_CASE("empty grid passes vacuously") {
        const std::vector<SpectralTriple> nus;
        const std::vector<double> ys;
        const auto rep = verify_lemma42(nus, ys, 3.0, 100.0);
        CHECK(rep.pass);
        CHECK(rep.rows.empty());
    }

    TEST_CASE("heights must be positive") {
        CHECK_THROWS_AS(jw_diagonal(SpectralTriple(1, 1), 0.0, 1.0), DomainError);
    }
}
