#include <doctest.h>

#include <cmath>

#include "gl3sup/cartan.hpp"
#include "gl3sup/error.hpp"

using namespace gl3sup;

TEST_SUITE("cartan") {
    TEST_CASE("diagonal and orthogonal matrices") {
        RealMatrix3 d;
        d(0, 0) = 0.5, d(1, 1) = 4.0, d(2, 2) = -2.0;
        const auto s = singular_values(d);
        CHECK(s[0] == doctest::Approx(4.0));
        CHECK(s[1] == doctest::Approx(2.0));
        CHECK(s[2] == doctest::Approx(0.5));
        const auto c = cartan_project(d);
        CHECK(c.a1 + c.a2 + c.a3 == doctest::Approx(0.0).epsilon(1e-14).scale(1));
        CHECK(c.a1 == doctest::Approx(std::log(4.0) - std::log(4.0) / 3));

        const double t = 0.9;
        RealMatrix3 r = RealMatrix3::identity();
        r(1, 1) = r(2, 2) = std::cos(t);
        r(1, 2) = -std::sin(t), r(2, 1) = std::sin(t);
        CHECK(cartan_norm(cartan_project(7.0 * r)) < 1e-13);
    }

    TEST_CASE("singular values of a general matrix square to the Gram eigenvalues") {
        RealMatrix3 m;
        m.m = {1, 2, 0, -1, 3, 1, 0.5, 0, 2};
        const auto s = singular_values(m);
        const RealMatrix3 g = m.transpose() * m;
        const double trace = g(0, 0) + g(1, 1) + g(2, 2);
        CHECK(s[0] * s[0] + s[1] * s[1] + s[2] * s[2] == doctest::Approx(trace).epsilon(1e-13));
        CHECK(s[0] * s[1] * s[2] == doctest::Approx(std::abs(m.det())).epsilon(1e-13));
    }

    TEST_CASE("Cartan norm is invariant under both-sided rotation") {
        RealMatrix3 m;
        m.m = {2, 0.3, 0, 0.1, 1, 0.4, 0, 0.2, 0.7};
        RealMatrix3 r = RealMatrix3::identity();
        r(0, 0) = r(1, 1) = std::cos(1.1);
        r(0, 1) = -std::sin(1.1), r(1, 0) = std::sin(1.1);
        CHECK(cartan_norm(cartan_project(r * m * r.transpose())) ==
              doctest::Approx(cartan_norm(cartan_project(m))).epsilon(1e-12));
    }

    TEST_CASE("singular input") {
        RealMatrix3 z;
        z(0, 0) = 1;
        CHECK_THROWS_AS(cartan_project(z), SingularMatrix);
    }

    TEST_CASE("samples are reproducible and inside the ball") {
        const RealMatrix3 a = sample_near_identity(4, 10, 0.5);
        const RealMatrix3 b = sample_near_identity(4, 10, 0.5);
        CHECK(a.m == b.m);
        CHECK((a - RealMatrix3::identity()).frobenius() <= 0.5);
        CHECK(sample_near_identity(4, 11, 0.5).m != a.m);
    }

    TEST_CASE("comparison lemma on a small sample") {
        const auto rep = verify_cartan_lemma(500, 1.0, 2);
        CHECK(rep.pass);
        CHECK(rep.stats.at("cartan_ratio_min") > 0.02);
    }

    TEST_CASE("worked projections") {
        RealMatrix3 d;
        d(0, 0) = std::exp(1.0), d(1, 1) = 1, d(2, 2) = std::exp(-1.0);
        const auto c = cartan_project(d);
        CHECK(c.a1 == doctest::Approx(1.0));
        CHECK(std::abs(c.a2) < 1e-14);
        CHECK(c.a3 == doctest::Approx(-1.0));
        CHECK(cartan_norm(c) == doctest::Approx(std::sqrt(2.0)));

        RealMatrix3 u = RealMatrix3::identity();
        u(0, 1) = 1;
        const double phi = std::log((1 + std::sqrt(5.0)) / 2);
        const auto s = cartan_project(u);
        CHECK(s.a1 == doctest::Approx(phi));
        CHECK(std::abs(s.a2) < 1e-14);
        CHECK(s.a3 == doctest::Approx(-phi));

        const double eps = 1e-3;
        d(0, 0) = std::exp(eps), d(2, 2) = std::exp(-eps);
        const double ratio = cartan_norm(cartan_project(d)) / (d - RealMatrix3::identity()).frobenius();
        CHECK(std::abs(ratio - 1) < 1e-3);
    }
}
