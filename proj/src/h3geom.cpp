#include "gl3sup/h3geom.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "gl3sup/error.hpp"

namespace gl3sup {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw Overflow("IntMatrix3: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

// x - round(x) into [-1/2, 1/2); returns the integer removed.
std::int64_t reduce_unit(double x) {
    const double n = std::floor(x + 0.5);
    if (!(std::abs(n) < 9e15)) throw Overflow("siegel_reduce: translation out of range");
    return static_cast<std::int64_t>(n);
}

// Extended gcd: returns g = gcd(a, b) >= 0 with p a + q b = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& p, std::int64_t& q) {
    std::int64_t r0 = a, r1 = b, p0 = 1, p1 = 0, q0 = 0, q1 = 1;
    while (r1 != 0) {
        const std::int64_t k = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - k * r1};
        std::tie(p0, p1) = std::pair{p1, p0 - k * p1};
        std::tie(q0, q1) = std::pair{q1, q0 - k * q1};
    }
    if (r0 < 0) {
        r0 = -r0;
        p0 = -p0;
        q0 = -q0;
    }
    p = p0;
    q = q0;
    return r0;
}

double dot(const double* a, const double* b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

// ---------------------------------------------------------------------------------------------
// Points and matrices

void H3Point::validate() const {
    for (double v : {x1, x2, x3, y1, y2})
        if (!std::isfinite(v)) throw DomainError("H3Point: coordinates must be finite");
    if (!(y1 > 0.0) || !(y2 > 0.0)) throw DomainError("H3Point: y1 and y2 must be > 0");
}

std::string format_point(const H3Point& z) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g", z.x1, z.x2, z.x3, z.y1, z.y2);
    return buf;
}

H3Point parse_point(std::string_view text) {
    double v[5];
    std::size_t pos = 0;
    for (int k = 0; k < 5; ++k) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, v[k]);
        if (ec != std::errc{}) throw ParseError("point: expected 5 comma-separated numbers, got '" + std::string(text) + "'");
        pos = static_cast<std::size_t>(ptr - text.data());
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (k < 4) {
            if (pos >= text.size() || text[pos] != ',')
                throw ParseError("point: expected 5 comma-separated numbers, got '" + std::string(text) + "'");
            ++pos;
        }
    }
    if (pos != text.size()) throw ParseError("point: trailing characters in '" + std::string(text) + "'");
    H3Point z{v[0], v[1], v[2], v[3], v[4]};
    z.validate();
    return z;
}

RealMatrix3 RealMatrix3::identity() { return RealMatrix3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

double RealMatrix3::det() const {
    const auto& a = m;
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
}

RealMatrix3 RealMatrix3::transpose() const {
    RealMatrix3 t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
    return t;
}

RealMatrix3 RealMatrix3::inverse() const {
    const double d = det();
    if (d == 0.0 || !std::isfinite(d)) throw SingularMatrix("RealMatrix3::inverse: singular matrix");
    const auto& a = m;
    RealMatrix3 r{{a[4] * a[8] - a[5] * a[7], a[2] * a[7] - a[1] * a[8], a[1] * a[5] - a[2] * a[4],
                   a[5] * a[6] - a[3] * a[8], a[0] * a[8] - a[2] * a[6], a[2] * a[3] - a[0] * a[5],
                   a[3] * a[7] - a[4] * a[6], a[1] * a[6] - a[0] * a[7], a[0] * a[4] - a[1] * a[3]}};
    for (double& v : r.m) v /= d;
    return r;
}

double RealMatrix3::frobenius() const {
    double s = 0.0;
    for (double v : m) s += v * v;
    return std::sqrt(s);
}

RealMatrix3 operator*(const RealMatrix3& a, const RealMatrix3& b) {
    RealMatrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}

RealMatrix3 operator-(const RealMatrix3& a, const RealMatrix3& b) {
    RealMatrix3 r;
    for (std::size_t k = 0; k < 9; ++k) r.m[k] = a.m[k] - b.m[k];
    return r;
}

RealMatrix3 operator*(double s, const RealMatrix3& a) {
    RealMatrix3 r = a;
    for (double& v : r.m) v *= s;
    return r;
}

IntMatrix3 IntMatrix3::identity() { return from_entries(1, 0, 0, 0, 1, 0, 0, 0, 1); }

IntMatrix3 IntMatrix3::from_entries(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                                    std::int64_t e, std::int64_t f, std::int64_t g, std::int64_t h,
                                    std::int64_t i) {
    return IntMatrix3{{a, b, c, d, e, f, g, h, i}};
}

std::int64_t IntMatrix3::det() const {
    const auto& x = m;
    const i128 v = i128(x[0]) * (i128(x[4]) * x[8] - i128(x[5]) * x[7]) -
                   i128(x[1]) * (i128(x[3]) * x[8] - i128(x[5]) * x[6]) +
                   i128(x[2]) * (i128(x[3]) * x[7] - i128(x[4]) * x[6]);
    return narrow(v);
}

bool IntMatrix3::is_unimodular() const {
    const std::int64_t d = det();
    return d == 1 || d == -1;
}

IntMatrix3 IntMatrix3::canonical_sign() const {
    for (std::int64_t v : m) {
        if (v > 0) return *this;
        if (v < 0) {
            IntMatrix3 r = *this;
            for (auto& w : r.m) w = narrow(-i128(w));
            return r;
        }
    }
    return *this;
}

RealMatrix3 IntMatrix3::to_real() const {
    RealMatrix3 r;
    for (std::size_t k = 0; k < 9; ++k) r.m[k] = static_cast<double>(m[k]);
    return r;
}

IntMatrix3 IntMatrix3::inverse() const {
    const std::int64_t d = det();
    if (d != 1 && d != -1) throw SingularMatrix("IntMatrix3::inverse: matrix is not unimodular");
    const auto& a = m;
    auto cof = [&](int p, int q, int r, int s) { return narrow(i128(a[p]) * a[q] - i128(a[r]) * a[s]); };
    IntMatrix3 r{{cof(4, 8, 5, 7), cof(2, 7, 1, 8), cof(1, 5, 2, 4), cof(5, 6, 3, 8), cof(0, 8, 2, 6),
                  cof(2, 3, 0, 5), cof(3, 7, 4, 6), cof(1, 6, 0, 7), cof(0, 4, 1, 3)}};
    for (auto& v : r.m) v *= d;
    return r;
}

IntMatrix3 operator*(const IntMatrix3& x, const IntMatrix3& y) {
    IntMatrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = narrow(i128(x(i, 0)) * y(0, j) + i128(x(i, 1)) * y(1, j) + i128(x(i, 2)) * y(2, j));
    return r;
}

std::string format_matrix(const IntMatrix3& g) {
    std::ostringstream os;
    for (std::size_t k = 0; k < 9; ++k) os << (k ? " " : "") << g.m[k];
    return os.str();
}

RealMatrix3 to_matrix(const H3Point& z) {
    return RealMatrix3{{z.y1 * z.y2, z.x2 * z.y1, z.x3, 0.0, z.y1, z.x1, 0.0, 0.0, 1.0}};
}

IwasawaResult iwasawa(const RealMatrix3& m) {
    const double* r1 = &m.m[0];
    const double* r2 = &m.m[3];
    const double* r3 = &m.m[6];
    const double scale_ref = m.frobenius();
    if (!(scale_ref > 0.0) || !std::isfinite(scale_ref)) throw SingularMatrix("iwasawa: zero or non-finite matrix");

    const double s = std::sqrt(dot(r3, r3));
    if (!(s > 0.0)) throw SingularMatrix("iwasawa: bottom row vanishes");
    double k3[3] = {r3[0] / s, r3[1] / s, r3[2] / s};

    // Second row: remove the k3 component (twice, for orthogonality to working precision).
    double u2[3] = {r2[0], r2[1], r2[2]};
    const double c23 = dot(u2, k3);
    for (int j = 0; j < 3; ++j) u2[j] -= c23 * k3[j];
    const double c23b = dot(u2, k3);
    for (int j = 0; j < 3; ++j) u2[j] -= c23b * k3[j];
    const double n2 = std::sqrt(dot(u2, u2));
    if (!(n2 > 1e-300) || n2 <= 1e-15 * scale_ref) throw SingularMatrix("iwasawa: rows 2 and 3 are dependent");
    double k2[3] = {u2[0] / n2, u2[1] / n2, u2[2] / n2};

    double u1[3] = {r1[0], r1[1], r1[2]};
    const double c13 = dot(u1, k3);
    const double c12 = dot(u1, k2);
    for (int j = 0; j < 3; ++j) u1[j] -= c13 * k3[j] + c12 * k2[j];
    const double c13b = dot(u1, k3);
    const double c12b = dot(u1, k2);
    for (int j = 0; j < 3; ++j) u1[j] -= c13b * k3[j] + c12b * k2[j];
    const double n1 = std::sqrt(dot(u1, u1));
    if (!(n1 > 1e-300) || n1 <= 1e-15 * scale_ref) throw SingularMatrix("iwasawa: rows are dependent");

    IwasawaResult r;
    r.scale = s;
    r.point.x1 = (c23 + c23b) / s;
    r.point.y1 = n2 / s;
    r.point.x3 = (c13 + c13b) / s;
    r.point.x2 = (c12 + c12b) / (s * r.point.y1);
    r.point.y2 = n1 / (s * r.point.y1);
    return r;
}

std::pair<double, double> gl2_block_heights(std::int64_t c, std::int64_t d, const H3Point& z) {
    if (c == 0 && d == 0) throw InvalidPair("gl2_block_heights: (c, d) = (0, 0)");
    std::int64_t p = 0, q = 0;
    if (ext_gcd(c, d, p, q) != 1) throw InvalidPair("gl2_block_heights: c and d must be coprime");
    const double r = std::hypot(static_cast<double>(c) * z.x2 + static_cast<double>(d), static_cast<double>(c) * z.y2);
    return {z.y1 * r, z.y2 / (r * r)};
}

H3Point dual_point(const H3Point& z) { return H3Point{-z.x2, -z.x1, z.x1 * z.x2 - z.x3, z.y2, z.y1}; }

RealMatrix3 sandwich(const H3Point& z, const IntMatrix3& gamma) {
    const double a = static_cast<double>(gamma.a()), b = static_cast<double>(gamma.b()),
                 c = static_cast<double>(gamma.c()), d = static_cast<double>(gamma.d()),
                 e = static_cast<double>(gamma.e()), f = static_cast<double>(gamma.f()),
                 g = static_cast<double>(gamma.g()), h = static_cast<double>(gamma.h()),
                 i = static_cast<double>(gamma.i());
    const double x1 = z.x1, x2 = z.x2, x3 = z.x3, y1 = z.y1, y2 = z.y2;
    RealMatrix3 r;
    r(0, 0) = a - d * x2 + g * x1 * x2 - g * x3;
    r(0, 1) = (b + (a - e + h * x1 - d * x2 + g * x1 * x2) * x2 - (h + g * x2) * x3) / y2;
    r(0, 2) = (c + b * x1 - f * x2 + (-e + i + h * x1) * x1 * x2 + a * x3 -
               (i + h * x1 + d * x2 - g * x1 * x2) * x3 - g * x3 * x3) /
              (y1 * y2);
    r(1, 0) = (d - g * x1) * y2;
    r(1, 1) = e + d * x2 - (h + g * x2) * x1;
    r(1, 2) = (f + e * x1 + d * x3 - (i + h * x1 + g * x3) * x1) / y1;
    r(2, 0) = g * y1 * y2;
    r(2, 1) = (h + g * x2) * y1;
    r(2, 2) = i + h * x1 + g * x3;
    return r;
}

bool in_siegel_set(const H3Point& z, double tol) {
    return std::abs(z.x1) <= 0.5 + tol && std::abs(z.x2) <= 0.5 + tol && std::abs(z.x3) <= 0.5 + tol &&
           z.y1 >= kSiegelHeight - tol && z.y2 >= kSiegelHeight - tol;
}

// ---------------------------------------------------------------------------------------------
// Siegel reduction

namespace {

constexpr int kMaxSteps = 10000;
constexpr double kTie = 1e-12;

struct Reducer {
    RealMatrix3 m0;
    IntMatrix3 gamma = IntMatrix3::identity();
    H3Point z;

    void refresh() { z = iwasawa(gamma.to_real() * m0).point; }
    void apply(const IntMatrix3& u) {
        gamma = u * gamma;
        refresh();
    }

    // Unipotent moves. n1 shifts x1; n2 shifts x2 (and x3 by n2 x1); n3 shifts x3.
    void shift_x1(bool strict) {
        if (strict && std::abs(z.x1) <= 0.5 + kTie) return;
        const std::int64_t n = reduce_unit(z.x1);
        if (n != 0) apply(IntMatrix3::from_entries(1, 0, 0, 0, 1, -n, 0, 0, 1));
    }
    void shift_x2(bool strict) {
        if (strict && std::abs(z.x2) <= 0.5 + kTie) return;
        const std::int64_t n = reduce_unit(z.x2);
        if (n != 0) apply(IntMatrix3::from_entries(1, -n, 0, 0, 1, 0, 0, 0, 1));
    }
    void shift_x3(bool strict) {
        if (strict && std::abs(z.x3) <= 0.5 + kTie) return;
        const std::int64_t n = reduce_unit(z.x3);
        if (n != 0) apply(IntMatrix3::from_entries(1, 0, -n, 0, 1, 0, 0, 0, 1));
    }
    void translate(bool strict) {
        shift_x1(strict);
        shift_x2(strict);
        shift_x3(strict);
    }
    void invert12() { apply(IntMatrix3::from_entries(0, -1, 0, 1, 0, 0, 0, 0, 1)); }
    void invert23() { apply(IntMatrix3::from_entries(1, 0, 0, 0, 0, -1, 0, 1, 0)); }
};

// Squared length of the lattice vector c * (N A) relative to the bottom row (which has length 1).
double coeff_norm2(const H3Point& z, std::int64_t c1, std::int64_t c2, std::int64_t c3) {
    const double a = static_cast<double>(c1) * z.y1 * z.y2;
    const double b = z.y1 * (static_cast<double>(c1) * z.x2 + static_cast<double>(c2));
    const double c = static_cast<double>(c1) * z.x3 + static_cast<double>(c2) * z.x1 + static_cast<double>(c3);
    return a * a + b * b + c * c;
}

// Unimodular matrix with bottom row (c1, c2, c3); the row must be primitive.
IntMatrix3 complete_basis(std::int64_t c1, std::int64_t c2, std::int64_t c3) {
    std::int64_t p = 0, q = 0;
    const std::int64_t g = ext_gcd(c1, c2, p, q);
    if (g == 0) return IntMatrix3::from_entries(1, 0, 0, 0, 1, 0, 0, 0, c3);
    std::int64_t r = 0, w = 0;
    ext_gcd(g, c3, r, w);  // r g + w c3 = 1
    // det = c3 w + r g = 1 for rows (-q, p, 0), (-w c1/g, -w c2/g, r), (c1, c2, c3).
    return IntMatrix3::from_entries(-q, p, 0, -w * (c1 / g), -w * (c2 / g), r, c1, c2, c3);
}

// Shortest nonzero lattice vector by exhaustive enumeration in the ellipsoid of the current bottom row.
// Returns (0, 0, 1) when the bottom row is already shortest up to the tie tolerance.
std::array<std::int64_t, 3> shortest_vector(const H3Point& z) {
    std::array<std::int64_t, 3> best{0, 0, 1};
    double best_n = 1.0;
    const double bound = 1.0 + kTie;
    const auto m1 = static_cast<std::int64_t>(std::floor(std::sqrt(bound) / (z.y1 * z.y2)));
    for (std::int64_t c1 = -m1; c1 <= m1; ++c1) {
        const double a = static_cast<double>(c1) * z.y1 * z.y2;
        const double rest1 = bound - a * a;
        if (rest1 < 0) continue;
        const double ctr2 = -static_cast<double>(c1) * z.x2;
        const double rad2 = std::sqrt(rest1) / z.y1;
        for (auto c2 = static_cast<std::int64_t>(std::ceil(ctr2 - rad2)); c2 <= static_cast<std::int64_t>(std::floor(ctr2 + rad2)); ++c2) {
            const double b = z.y1 * (static_cast<double>(c1) * z.x2 + static_cast<double>(c2));
            const double rest2 = rest1 - b * b;
            if (rest2 < 0) continue;
            const double ctr3 = -(static_cast<double>(c1) * z.x3 + static_cast<double>(c2) * z.x1);
            const double rad3 = std::sqrt(rest2);
            for (auto c3 = static_cast<std::int64_t>(std::ceil(ctr3 - rad3)); c3 <= static_cast<std::int64_t>(std::floor(ctr3 + rad3)); ++c3) {
                if (c1 == 0 && c2 == 0 && c3 == 0) continue;
                const double n = coeff_norm2(z, c1, c2, c3);
                if (n < best_n * (1.0 - kTie)) {
                    best_n = n;
                    best = {c1, c2, c3};
                }
            }
        }
    }
    return best;
}

}  // namespace

SiegelResult siegel_reduce(const H3Point& z) {
    z.validate();
    Reducer red;
    red.m0 = to_matrix(z);
    red.z = z;
    SiegelResult out;

    // Greedy phase.
    const double threshold = kSiegelHeight * (1.0 - 1e-12);
    for (;;) {
        if (++out.steps > kMaxSteps) throw IterationLimit("siegel_reduce: more than 10000 steps");
        red.translate(true);
        if (red.z.y2 < threshold)
            red.invert12();
        else if (red.z.y1 < threshold)
            red.invert23();
        else
            break;
    }

    // Canonical phase: bottom row = shortest lattice vector.
    const auto sv = shortest_vector(red.z);
    if (sv != std::array<std::int64_t, 3>{0, 0, 1}) red.apply(complete_basis(sv[0], sv[1], sv[2]));

    // Reduce z2 = x2 + i y2 into the SL2(Z) fundamental domain through the upper-left block.
    for (int k = 0;; ++k) {
        if (k > kMaxSteps) throw IterationLimit("siegel_reduce: SL2 block reduction did not terminate");
        red.shift_x2(true);
        if (red.z.x2 * red.z.x2 + red.z.y2 * red.z.y2 < 1.0 - kTie)
            red.invert12();
        else
            break;
    }
    red.shift_x1(true);
    red.shift_x3(true);

    // Sign patterns of the rows: choose the lexicographically smallest (x1, x2, x3).
    const IntMatrix3 flips[4] = {IntMatrix3::identity(), IntMatrix3::from_entries(1, 0, 0, 0, -1, 0, 0, 0, 1),
                                 IntMatrix3::from_entries(1, 0, 0, 0, 1, 0, 0, 0, -1),
                                 IntMatrix3::from_entries(-1, 0, 0, 0, 1, 0, 0, 0, 1)};
    const H3Point base = red.z;
    int best = 0;
    auto key = [&](int k) {
        const double s1 = (k == 1 || k == 2) ? -1.0 : 1.0;
        const double s2 = (k == 1 || k == 3) ? -1.0 : 1.0;
        const double s3 = (k == 2 || k == 3) ? -1.0 : 1.0;
        return std::array<double, 3>{s1 * base.x1, s2 * base.x2, s3 * base.x3};
    };
    for (int k = 1; k < 4; ++k) {
        const auto a = key(k);
        const auto b = key(best);
        // Ties within kTie keep the earlier pattern.
        bool less = false;
        for (int j = 0; j < 3; ++j) {
            if (a[j] < b[j] - kTie) {
                less = true;
                break;
            }
            if (a[j] > b[j] + kTie) break;
        }
        if (less) best = k;
    }
    if (best != 0) red.apply(flips[best]);

    out.gamma = red.gamma;
    out.point = red.z;
    return out;
}

}  // namespace gl3sup
