#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace gl3sup {

/// A point of the generalized upper half-plane H3, i.e. the matrix
///   [[1, x2, x3], [0, 1, x1], [0, 0, 1]] * diag(y1 y2, y1, 1).
struct H3Point {
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;
    double y1 = 1.0;
    double y2 = 1.0;

    /// Throws DomainError unless all coordinates are finite and y1, y2 > 0.
    void validate() const;
    friend bool operator==(const H3Point&, const H3Point&) = default;
};

/// "x1,x2,x3,y1,y2" with 17 significant digits.
std::string format_point(const H3Point& z);
/// Inverse of format_point; throws ParseError on malformed text, DomainError on invalid coordinates.
H3Point parse_point(std::string_view text);

/// 3x3 real matrix, row-major.
struct RealMatrix3 {
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
    double operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

    static RealMatrix3 identity();
    [[nodiscard]] double det() const;
    [[nodiscard]] RealMatrix3 transpose() const;
    /// Throws SingularMatrix when det == 0.
    [[nodiscard]] RealMatrix3 inverse() const;
    [[nodiscard]] double frobenius() const;

    friend RealMatrix3 operator*(const RealMatrix3& a, const RealMatrix3& b);
    friend RealMatrix3 operator-(const RealMatrix3& a, const RealMatrix3& b);
    friend RealMatrix3 operator*(double s, const RealMatrix3& a);
};

/// Integer 3x3 matrix with entries labelled
///   [[a, b, c], [d, e, f], [g, h, i]].
/// Arithmetic is overflow-checked and throws Overflow.
struct IntMatrix3 {
    std::array<std::int64_t, 9> m{};

    static IntMatrix3 identity();
    static IntMatrix3 from_entries(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                                   std::int64_t e, std::int64_t f, std::int64_t g, std::int64_t h,
                                   std::int64_t i);

    std::int64_t& operator()(int r, int c) { return m[static_cast<std::size_t>(3 * r + c)]; }
    std::int64_t operator()(int r, int c) const { return m[static_cast<std::size_t>(3 * r + c)]; }

    [[nodiscard]] std::int64_t a() const { return m[0]; }
    [[nodiscard]] std::int64_t b() const { return m[1]; }
    [[nodiscard]] std::int64_t c() const { return m[2]; }
    [[nodiscard]] std::int64_t d() const { return m[3]; }
    [[nodiscard]] std::int64_t e() const { return m[4]; }
    [[nodiscard]] std::int64_t f() const { return m[5]; }
    [[nodiscard]] std::int64_t g() const { return m[6]; }
    [[nodiscard]] std::int64_t h() const { return m[7]; }
    [[nodiscard]] std::int64_t i() const { return m[8]; }

    [[nodiscard]] std::int64_t det() const;
    [[nodiscard]] bool is_unimodular() const;
    /// The representative of {M, -M} whose first nonzero entry in reading order is positive.
    [[nodiscard]] IntMatrix3 canonical_sign() const;
    [[nodiscard]] RealMatrix3 to_real() const;
    /// Inverse of a unimodular matrix (adjugate times det). Throws SingularMatrix otherwise.
    [[nodiscard]] IntMatrix3 inverse() const;

    friend IntMatrix3 operator*(const IntMatrix3& x, const IntMatrix3& y);
    friend bool operator==(const IntMatrix3&, const IntMatrix3&) = default;
    friend auto operator<=>(const IntMatrix3&, const IntMatrix3&) = default;
};

/// "a b c d e f g h i".
std::string format_matrix(const IntMatrix3& g);

/// The matrix of a point (unipotent times diagonal).
RealMatrix3 to_matrix(const H3Point& z);

struct IwasawaResult {
    H3Point point;
    double scale = 1.0;  ///< m = scale * to_matrix(point) * k with k orthogonal
};

/// Decomposes m = s * to_matrix(z) * k by Gram-Schmidt on the rows, bottom row first.
/// Throws SingularMatrix for (numerically) singular m.
IwasawaResult iwasawa(const RealMatrix3& m);

/// (y1 |c z2 + d|, y2 / |c z2 + d|^2) with z2 = x2 + i y2. Throws InvalidPair for (0, 0).
std::pair<double, double> gl2_block_heights(std::int64_t c, std::int64_t d, const H3Point& z);

/// Iwasawa coordinates of h w (z^{-1})^t w, where w is the antidiagonal involution:
/// (-x2, -x1, x1 x2 - x3, y2, y1).
H3Point dual_point(const H3Point& z);

/// z^{-1} gamma z from the closed-form entries.
RealMatrix3 sandwich(const H3Point& z, const IntMatrix3& gamma);

/// sqrt(3)/2, the height bound of the Siegel set.
inline constexpr double kSiegelHeight = 0.86602540378443864676;

/// True when |x_j| <= 1/2 + tol and y1, y2 >= sqrt(3)/2 - tol.
bool in_siegel_set(const H3Point& z, double tol = 1e-9);

struct SiegelResult {
    H3Point point;     ///< iwasawa(gamma * to_matrix(z)).point
    IntMatrix3 gamma;  ///< unimodular, not sign-normalized
    int steps = 0;     ///< iterations of the greedy phase
};

/// Moves z into the Siegel set by GL3(Z). A greedy phase (unipotent translations plus the two
/// GL(2)-block inversions) is followed by a canonicalization phase so that points in the same
/// GL3(Z)-orbit reduce to the same representative (away from fundamental-domain boundaries).
/// Throws IterationLimit after 10000 greedy steps.
SiegelResult siegel_reduce(const H3Point& z);

}  // namespace gl3sup
