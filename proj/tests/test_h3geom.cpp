#include <doctest.h>

#include <cmath>
#include <random>

#include "gl3sup/error.hpp"
#include "gl3sup/h3geom.hpp"
#include "gl3sup/verify.hpp"

using namespace gl3sup;

namespace {

double point_dist(const H3Point& a, const H3Point& b) {
    return std::max({std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3), std::abs(a.y1 / b.y1 - 1),
                     std::abs(a.y2 / b.y2 - 1)});
}

H3Point random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> x(-2, 2), ly(-1.5, 1.5);
    return {x(rng), x(rng), x(rng), std::exp(ly(rng)), std::exp(ly(rng))};
}

}  // namespace

TEST_SUITE("h3geom") {
    TEST_CASE("point text round trip and rejects") {
        const H3Point z{0.1, -0.25, 1.0 / 3, 2.5, 1e-3};
        CHECK(parse_point(format_point(z)) == z);
        CHECK_THROWS_AS(parse_point("1,2,3"), ParseError);
        CHECK_THROWS_AS(parse_point("0,0,0,1,x"), ParseError);
        CHECK_THROWS_AS(parse_point("0,0,0,-1,1"), DomainError);
    }

    TEST_CASE("Iwasawa recovers the coordinates of z and of scaled rotations") {
        std::mt19937_64 rng(5);
        for (int k = 0; k < 50; ++k) {
            const H3Point z = random_point(rng);
            CHECK(point_dist(iwasawa(to_matrix(z)).point, z) < 1e-12);
            // Right multiplication by a rotation and scaling changes only the scale.
            const double c = std::cos(0.7), s = std::sin(0.7);
            RealMatrix3 rot = RealMatrix3::identity();
            rot(0, 0) = c, rot(0, 1) = -s, rot(1, 0) = s, rot(1, 1) = c;
            const auto r = iwasawa(3.0 * (to_matrix(z) * rot));
            CHECK(point_dist(r.point, z) < 1e-12);
            CHECK(r.scale == doctest::Approx(3.0));
        }
    }

    TEST_CASE("integer matrices") {
        const auto g = IntMatrix3::from_entries(2, 1, 0, 1, 1, 0, 3, 4, 1);
        CHECK(g.det() == 1);
        CHECK(g.is_unimodular());
        CHECK(g * g.inverse() == IntMatrix3::identity());
        CHECK(IntMatrix3::from_entries(-1, 0, 0, 0, 1, 0, 0, 0, 1).canonical_sign() ==
              IntMatrix3::from_entries(1, 0, 0, 0, -1, 0, 0, 0, -1));
        CHECK_THROWS_AS((void)IntMatrix3::from_entries(1, 0, 0, 0, 0, 0, 0, 0, 1).inverse(), SingularMatrix);
        CHECK(format_matrix(g) == "2 1 0 1 1 0 3 4 1");
    }

    TEST_CASE("sandwich equals the matrix product") {
        std::mt19937_64 rng(9);
        for (std::uint64_t k = 0; k < 40; ++k) {
            const H3Point z = random_point(rng);
            const IntMatrix3 gam = random_unimodular(11, k);
            const RealMatrix3 m = to_matrix(z);
            const RealMatrix3 direct = m.inverse() * gam.to_real() * m;
            const RealMatrix3 s = sandwich(z, gam);
            CHECK((s - direct).frobenius() <= 1e-11 * std::max(1.0, direct.frobenius()));
        }
    }

    TEST_CASE("dual point is the Iwasawa point of w (z^-1)^t w and an involution") {
        std::mt19937_64 rng(3);
        RealMatrix3 w;
        w(0, 2) = w(1, 1) = w(2, 0) = 1;
        for (int k = 0; k < 20; ++k) {
            const H3Point z = random_point(rng);
            const H3Point ref = iwasawa(w * to_matrix(z).inverse().transpose() * w).point;
            CHECK(point_dist(dual_point(z), ref) < 1e-11);
            CHECK(point_dist(dual_point(dual_point(z)), z) < 1e-12);
        }
    }

    TEST_CASE("GL2 block heights") {
        const H3Point z{0.1, 0.3, 0.0, 2.0, 0.5};
        const auto [h1, h2] = gl2_block_heights(1, 1, z);
        const double n = std::hypot(1.3, 0.5);
        CHECK(h1 == doctest::Approx(2.0 * n));
        CHECK(h2 == doctest::Approx(0.5 / (n * n)));
        CHECK_THROWS_AS(gl2_block_heights(0, 0, z), InvalidPair);
    }

    TEST_CASE("Siegel reduction lands in the Siegel set on the same orbit") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> x(-3, 3), ly(-3, 1);
        for (int k = 0; k < 200; ++k) {
            const H3Point z{x(rng), x(rng), x(rng), std::exp(ly(rng)), std::exp(ly(rng))};
            const auto r = siegel_reduce(z);
            CHECK(in_siegel_set(r.point));
            CHECK(r.gamma.is_unimodular());
            CHECK(point_dist(iwasawa(r.gamma.to_real() * to_matrix(z)).point, r.point) < 1e-9);
        }
    }

    TEST_CASE("Siegel reduction picks the same representative across an orbit") {
        std::mt19937_64 rng(23);
        for (std::uint64_t k = 0; k < 30; ++k) {
            const H3Point z = random_point(rng);
            const H3Point moved = iwasawa(random_unimodular(29, k).to_real() * to_matrix(z)).point;
            CHECK(point_dist(siegel_reduce(z).point, siegel_reduce(moved).point) < 1e-8);
        }
    }

    TEST_CASE("reduction is idempotent") {
        const H3Point z{0.1, -0.2, 0.3, 1.5, 2.0};
        const auto r = siegel_reduce(z);
        const auto again = siegel_reduce(r.point);
        CHECK(point_dist(again.point, r.point) < 1e-14);
        // Only sign changes separate z from its representative here.
        CHECK(std::abs(r.point.y1 - z.y1) < 1e-12);
        CHECK(std::abs(std::abs(r.point.x3) - std::abs(z.x3)) < 1e-12);
    }

    TEST_CASE("worked coordinates") {
        CHECK(to_matrix({0, 0, 0, 1, 1}).m == RealMatrix3::identity().m);
        const RealMatrix3 m = to_matrix({0.3, 0, 0, 1, 1});
        CHECK(m(1, 2) == 0.3);
        RealMatrix3 d;
        d(0, 0) = 4, d(1, 1) = 2, d(2, 2) = 1;
        const auto r = iwasawa(d);
        CHECK(point_dist(r.point, {0, 0, 0, 2, 2}) < 1e-15);
        CHECK(r.scale == doctest::Approx(1.0));
        CHECK(dual_point({0, 0, 0, 2, 5}) == H3Point{0, 0, 0, 5, 2});
        const auto [h1, h2] = gl2_block_heights(0, 1, {0, 0, 0, 2, 3});
        CHECK(h1 == 2.0);
        CHECK(h2 == 3.0);
        CHECK(sandwich({0.2, 0.1, -0.3, 1.5, 2}, IntMatrix3::identity()).m == RealMatrix3::identity().m);
    }

    TEST_CASE("reduction of a low point") {
        const auto r = siegel_reduce({0, 0, 0, 0.1, 0.1});
        CHECK(r.point.y1 >= kSiegelHeight);
        CHECK(r.point.y2 >= kSiegelHeight);
    }
}
