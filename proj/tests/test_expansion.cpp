#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

#include "gl3sup/error.hpp"
#include "gl3sup/expansion.hpp"
#include "gl3sup/gl2special.hpp"

using namespace gl3sup;

TEST_SUITE("expansion") {
    TEST_CASE("Schur polynomials at the identity give dimensions") {
        const std::array<std::complex<double>, 3> one{1.0, 1.0, 1.0};
        for (int l1 = 0; l1 <= 5; ++l1)
            for (int l2 = 0; l2 <= l1; ++l2) {
                const int a = l1 - l2, b = l2;
                const double dim = (a + 1) * (b + 1) * (a + b + 2) / 2.0;
                CHECK(schur3(l1, l2, one).real() == doctest::Approx(dim));
            }
    }

    TEST_CASE("Schur polynomials against explicit expansions") {
        const std::array<std::complex<double>, 3> x{2.0, -1.0, 0.5};
        CHECK(schur3(1, 0, x).real() == doctest::Approx(1.5));
        CHECK(schur3(1, 1, x).real() == doctest::Approx(-2.0 - 0.5 + 1.0));
        // s_{(2,1)} = h1 e2 - e3
        CHECK(schur3(2, 1, x).real() == doctest::Approx(1.5 * -1.5 - (-1.0)));
    }

    TEST_CASE("synthetic coefficients satisfy the Hecke relations") {
        const auto t = synthetic_coefficients(7, 50, 2000);
        CHECK(t.at(1, 1) == std::complex<double>(1, 0));
        // lambda(p,1) lambda(1,p) = lambda(p,p) + 1
        for (int p : {2, 3, 5, 7})
            CHECK(std::abs(t.at(p, 1) * t.at(1, p) - t.at(p, p) - 1.0) < 1e-12);
        // conjugate symmetry of the tempered model
        CHECK(std::abs(t.at(3, 1) - std::conj(t.at(1, 3))) < 1e-12);
        // multiplicativity
        CHECK(std::abs(t.at(6, 5) - t.at(2, 1) * t.at(3, 5)) < 1e-12);
        CHECK(std::abs(t.at(2, 1)) <= 3.0 + 1e-12);
        CHECK(t.at(53, 1) == std::complex<double>(0, 0));
        CHECK(t.provenance == Provenance::Synthetic);
        CHECK(synthetic_coefficients(7, 50, 2000).entries == t.entries);
        CHECK_THROWS_AS(synthetic_coefficients(7, 50, 100'000'000), FeasibilityError);
    }

    TEST_CASE("coefficient text round trip and errors") {
        const auto t = synthetic_coefficients(3, 20, 200);
        const auto back = parse_coefficients(format_coefficients(t));
        CHECK(back.entries == t.entries);
        CHECK(back.cutoff <= t.cutoff);
        CHECK_THROWS_AS(parse_coefficients("m1,m2,re,im\n1,1,1,0\n1,1,1,0\n"), ParseError);
        CHECK_THROWS_AS(parse_coefficients("m1,m2,re,im\n1,1,x,0\n"), ParseError);
        CHECK_THROWS_AS(parse_coefficients("m1,m2,re,im\n1,1,2,0\n"), NormalizationError);
        CHECK_THROWS_AS(parse_coefficients("m1,m2,re,im\n2,1,1,0\n"), NormalizationError);
        CHECK_THROWS_AS(load_coefficients("/nonexistent/coeffs.csv"), ParseError);

        const auto path = (std::filesystem::temp_directory_path() / "gl3sup_coeffs_test.csv").string();
        save_coefficients(t, path);
        CHECK(load_coefficients(path).entries == t.entries);
        std::filesystem::remove(path);
    }

    TEST_CASE("coprime pairs match a brute-force loop in order") {
        const std::complex<double> z2(0.3, 1.1);
        const double R = 6.0;
        const auto got = coprime_pairs(z2, R);
        std::size_t n = 0;
        for (int c = -10; c <= 10; ++c)
            for (int d = -10; d <= 10; ++d)
                if (std::gcd(c, d) == 1 && std::abs(static_cast<double>(c) * z2 + static_cast<double>(d)) <= R) ++n;
        CHECK(got.size() == n);
        for (std::size_t k = 1; k < got.size(); ++k)
            CHECK(std::abs(double(got[k - 1].first) * z2 + double(got[k - 1].second)) <=
                  std::abs(double(got[k].first) * z2 + double(got[k].second)) + 1e-12);
    }

    TEST_CASE("the Whittaker bound dominates the function") {
        const SpectralTriple nu(1.0, 2.5);
        for (auto [y1, y2] : {std::pair{0.5, 0.5}, {1.0, 2.0}, {3.0, 0.7}})
            CHECK(std::log(std::abs(jw_diagonal(nu, y1, y2))) <= jw_log_bound(nu, y1, y2));
    }

    TEST_CASE("delta table sum is dominated by the identity coset") {
        const SpectralTriple nu(1, 1);
        const H3Point z{0.1, 0.2, 0.3, 3, 3};
        const auto s = fourier_whittaker_sum(z, nu, delta_coefficients());
        CHECK(s.evaluated > 0);
        CHECK(s.evaluated <= s.terms);
        CHECK(std::abs(s.value) <= s.abs_sum * (1 + 1e-12));
        CHECK_THROWS_AS(fourier_whittaker_sum({0.7, 0, 0, 1, 1}, nu, delta_coefficients()), DomainError);
    }

    TEST_CASE("duality on one point") {
        const SpectralTriple nu(1, 2);
        const H3Point z{-0.3, 0.45, 0.1, 4, 3.5};
        const auto a = fourier_whittaker_sum(z, nu, delta_coefficients());
        const auto b = fourier_whittaker_sum(dual_point(z), nu.swapped(), delta_coefficients());
        CHECK(std::abs(a.value) == doctest::Approx(std::abs(b.value)).epsilon(1e-6));
    }

    TEST_CASE("Rankin-Selberg partial sum") {
        CHECK(rankin_selberg_partial(delta_coefficients(), 0.5, 100) == doctest::Approx(1.0));
        const auto t = synthetic_coefficients(7, 200, 2000);
        const double a = rankin_selberg_partial(t, 0.5, 1000), b = rankin_selberg_partial(t, 0.5, 2000);
        CHECK(b >= a);
        CHECK(b / a < 2.0);
    }

    TEST_CASE("envelopes") {
        const EnvelopeParams p;
        const double lam = 1e4;
        CHECK(theorem2_envelope(lam, 1, 1, p) > theorem2_envelope(lam, 4, 4, p));
        CHECK(theorem3_envelope(lam, 4, 4, p) > theorem3_envelope(lam, 1, 1, p));
        CHECK_THROWS_AS(theorem2_envelope(lam, 0.5, 1, p), DomainError);
        const auto g = global_envelope(lam, p);
        const double y = std::sqrt(g.argmax);
        CHECK(g.value == doctest::Approx(theorem2_envelope(lam, y, y, p)).epsilon(1e-6));
        CHECK(g.argmax == doctest::Approx(std::pow(lam, 0.35)).epsilon(0.5));
    }

    TEST_CASE("worked values") {
        const auto t = parse_coefficients("m1,m2,re,im\n1,1,1,0\n");
        CHECK(t.entries == delta_coefficients().entries);
        CHECK_THROWS_AS(parse_coefficients("m1,m2,re,im\n1,1,1,0\n2,1,0.5,0\n2,1,0.5,0\n"), ParseError);
        const EnvelopeParams p{1e-12, 1.0, 3.0};
        CHECK(theorem2_envelope(1, 1, 1, p) == doctest::Approx(2.0));
        CHECK(theorem2_envelope(100, 1, 3, p) == doctest::Approx(theorem2_envelope(100, 3, 1, p)));
        CHECK(theorem3_envelope(16, 1, 1, p) == doctest::Approx(8 + std::pow(16.0, 0.625)));
        CHECK(theorem3_envelope(16, 1e-9, 1e-9, p) == doctest::Approx(8.0));
    }
}
