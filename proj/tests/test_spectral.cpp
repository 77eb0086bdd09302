#include <doctest.h>

#include "gl3sup/error.hpp"
#include "gl3sup/scaled_real.hpp"
#include "gl3sup/spectral.hpp"

using namespace gl3sup;

TEST_SUITE("spectral") {
    TEST_CASE("eigenvalue from spectral and Langlands parameters agree") {
        for (auto [a, b] : {std::pair{0.0, 0.0}, {1.0, 2.0}, {3.5, 0.25}, {40.0, 17.0}}) {
            const SpectralTriple nu(a, b);
            const double direct = 1 + 3 * a * a + 3 * a * b + 3 * b * b;
            CHECK(laplace_eigenvalue(nu) == doctest::Approx(direct).epsilon(1e-14));
            CHECK(laplace_eigenvalue(langlands_from_spectral(nu)) == doctest::Approx(direct).epsilon(1e-12));
            const auto mu = langlands_from_spectral(nu);
            CHECK(std::abs(mu.m1 + mu.m2 + mu.m3) < 1e-12);
        }
    }

    TEST_CASE("Weyl orbit preserves the eigenvalue and T0") {
        const SpectralTriple nu(2.0, 5.0);
        const double lam = laplace_eigenvalue(nu);
        for (const auto& w : weyl_orbit(nu)) {
            CHECK(laplace_eigenvalue(langlands_from_signed(w)) == doctest::Approx(lam).epsilon(1e-12));
            CHECK(t_zero(w) == doctest::Approx(7.0));
        }
        CHECK(weyl_orbit(nu)[0] == SignedTriple{7, 2, 5});
    }

    TEST_CASE("T0 floor and validation") {
        CHECK(t_zero(SpectralTriple(0.1, 0.2)) == 2.0);
        CHECK(SpectralTriple(1, 3).swapped().t1() == 3.0);
        CHECK_THROWS_AS(SpectralTriple(-1, 0), DomainError);
        CHECK_THROWS_AS(SpectralTriple(0, std::nan("")), DomainError);
    }
}

TEST_SUITE("scaled_real") {
    TEST_CASE("products far outside the double range") {
        const ScaledReal big = ScaledReal::from_log(2000.0);
        const ScaledReal small = ScaledReal::from_log(-1999.0);
        CHECK((big * small).to_double() == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
        CHECK((small / big).log_abs() == doctest::Approx(-3999.0).epsilon(1e-14));
        CHECK(big.to_double() == HUGE_VAL);
        CHECK(small.to_double() == 0.0);
    }

    TEST_CASE("round trip and sign") {
        const ScaledReal v(-3.75);
        CHECK(v.to_double() == -3.75);
        CHECK(v.sign() == -1);
        CHECK(ScaledReal(0.0).is_zero());
        CHECK(ScaledReal::from_parts(1.5, 4).to_double() == 24.0);
    }

    TEST_CASE("worked values") {
        const auto mu = langlands_from_spectral(SpectralTriple(2, 5));
        CHECK(std::abs(mu.m1 - std::complex<double>(0, 12)) < 1e-12);
        CHECK(std::abs(mu.m2 - std::complex<double>(0, -3)) < 1e-12);
        CHECK(std::abs(mu.m3 - std::complex<double>(0, -9)) < 1e-12);
        CHECK(laplace_eigenvalue(SpectralTriple(2, 2)) == 37.0);
        CHECK(laplace_eigenvalue(SpectralTriple(1, 0)) == 4.0);
        CHECK(t_zero(SpectralTriple(3, 4)) == 7.0);
        for (const auto& w : weyl_orbit(SpectralTriple(0, 0))) CHECK(w == SignedTriple{});
    }
}
