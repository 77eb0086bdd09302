#include "gl3sup/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "gl3sup/error.hpp"
#include "gl3sup/parallel.hpp"

namespace gl3sup {

std::array<double, 3> singular_values(const RealMatrix3& m) {
    // Columns of a are rotated until mutually orthogonal; their norms are the singular values.
    double a[3][3];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a[c][r] = m(r, c);
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < 2; ++p)
            for (int q = p + 1; q < 3; ++q) {
                double alpha = 0, beta = 0, gamma = 0;
                for (int k = 0; k < 3; ++k) {
                    alpha += a[p][k] * a[p][k];
                    beta += a[q][k] * a[q][k];
                    gamma += a[p][k] * a[q][k];
                }
                if (gamma == 0.0 || std::abs(gamma) <= 1e-14 * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (int k = 0; k < 3; ++k) {
                    const double x = a[p][k], y = a[q][k];
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
            }
        if (!rotated) break;
    }
    std::array<double, 3> sv{};
    for (int c = 0; c < 3; ++c) sv[c] = std::sqrt(a[c][0] * a[c][0] + a[c][1] * a[c][1] + a[c][2] * a[c][2]);
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

CartanVector cartan_project(const RealMatrix3& m) {
    for (double v : m.m)
        if (!std::isfinite(v)) throw DomainError("cartan_project: non-finite entry");
    const double d = m.det();
    if (d == 0.0) throw SingularMatrix("cartan_project: singular matrix");
    const auto sv = singular_values(m);
    if (!(sv[2] > 0.0)) throw SingularMatrix("cartan_project: singular matrix");
    double l[3] = {std::log(sv[0]), std::log(sv[1]), std::log(sv[2])};
    // Subtracting the mean of the logs is the normalization by |det|^{1/3}.
    const double mean = (l[0] + l[1] + l[2]) / 3.0;
    return {l[0] - mean, l[1] - mean, l[2] - mean};
}

double cartan_norm(const CartanVector& c) { return std::sqrt(c.a1 * c.a1 + c.a2 * c.a2 + c.a3 * c.a3); }

RealMatrix3 sample_near_identity(std::uint64_t seed, std::uint64_t k, double radius) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(-radius, radius);
    for (;;) {
        const double l1 = u(rng), l2 = u(rng);
        const double l3 = -l1 - l2;
        RealMatrix3 g{{std::exp(l1), u(rng), u(rng), 0.0, std::exp(l2), u(rng), 0.0, 0.0, std::exp(l3)}};
        const double n = (g - RealMatrix3::identity()).frobenius();
        if (n > 0.0 && n <= radius) return g;
    }
}

VerificationReport verify_cartan_lemma(std::int64_t samples, double radius, std::uint64_t seed, unsigned threads) {
    if (samples < 1) throw DomainError("verify_cartan_lemma: samples must be >= 1");
    if (!(radius > 0.0) || radius > 1.0) throw DomainError("verify_cartan_lemma: radius must lie in (0, 1]");
    VerificationReport rep;
    rep.name = "cartan";
    rep.columns = {"dist", "cartan_norm", "gram_dist", "ratio_cartan", "ratio_gram"};
    rep.rows.assign(static_cast<std::size_t>(samples), {});
    parallel_for(rep.rows.size(), threads, [&](std::size_t k) {
        const RealMatrix3 g = sample_near_identity(seed, k, radius);
        const RealMatrix3 id = RealMatrix3::identity();
        const double dist = (g - id).frobenius();
        const double cn = cartan_norm(cartan_project(g));
        const double gd = (g.transpose() * g - id).frobenius();
        rep.rows[k] = {dist, cn, gd, cn / dist, gd / dist};
    });
    double lo_c = std::numeric_limits<double>::infinity(), hi_c = 0.0;
    double lo_g = lo_c, hi_g = 0.0;
    for (const auto& r : rep.rows) {
        lo_c = std::min(lo_c, r[3]);
        hi_c = std::max(hi_c, r[3]);
        lo_g = std::min(lo_g, r[4]);
        hi_g = std::max(hi_g, r[4]);
    }
    rep.stats = {{"samples", static_cast<double>(samples)}, {"radius", radius},
                 {"cartan_ratio_min", lo_c}, {"cartan_ratio_max", hi_c},
                 {"gram_ratio_min", lo_g}, {"gram_ratio_max", hi_g}};
    rep.pass = lo_c >= 1.0 / 50 && hi_c <= 50 && lo_g >= 1.0 / 50 && hi_g <= 50;
    std::ostringstream os;
    os << "||C(g)||/||g-1|| in [" << lo_c << ", " << hi_c << "], ||g^t g-1||/||g-1|| in [" << lo_g << ", " << hi_g << "]";
    rep.message = os.str();
    return rep;
}

}  // namespace gl3sup
