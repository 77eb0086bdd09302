#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gl3sup/h3geom.hpp"
#include "gl3sup/report.hpp"

namespace gl3sup {

/// Pairs (c, d) != (0, 0) with |c z2 + d| <= R, optionally only gcd(c, d) = 1.
/// Throws DomainError unless Im z2 > 0 and R > 0; FeasibilityError if R >= 1e6 max(1, |z2|).
std::int64_t lattice_disk_count(std::complex<double> z2, double R, bool coprime_only);

/// Same as above on the half-open annulus r_lo <= |c z2 + d| < r_hi.
std::int64_t lattice_annulus_count(std::complex<double> z2, double r_lo, double r_hi, bool coprime_only);

/// Counts in the dyadic shells 2^m <= |c z2 + d| < 2^{m+1}, m = 0..max_m, against 2^m + 2^{2m}/y2.
/// stats: fitted_C (max count/envelope), points. Passes when fitted_C <= ceiling.
VerificationReport verify_lattice_shells(std::span<const std::complex<double>> z2s, int max_m, bool coprime_only,
                                         double ceiling);

/// Bound on every entry of a matrix whose Cartan norm is <= R: exp(sqrt(2/3) R).
double cartan_ball_entry_bound(double R);

/// Bound on the squared Frobenius norm of a determinant-one matrix whose Cartan norm is <= R.
double cartan_ball_frobenius_sq(double R);

/// All gamma in PGL3(Z), canonical sign, with ||C(z^{-1} gamma z)|| <= R, sorted ascending.
/// The entries are solved in the order g, h, d, a, e, i, f, b, c from the explicit z^{-1} gamma z entries,
/// each restricted to the entry and Frobenius bounds of the Cartan ball, with det = +-1 imposed as soon
/// as it is determined. Deterministic for any thread count.
/// Throws DomainError unless z is in the Siegel set and 0 < R <= 3; FeasibilityError when the
/// estimated box exceeds 1e9 candidates.
std::vector<IntMatrix3> enumerate_gammas(const H3Point& z, double R, unsigned threads = 1);

enum class MClass { M1 = 1, M2 = 2, M3 = 3, M4 = 4 };

/// M1: g = h = d = 0; M2: g = d = 0, h != 0; M3: g = h = 0, d != 0; M4: g != 0 or h d != 0.
MClass classify_m(const IntMatrix3& gamma);

/// The entry chain |g| <= C e^R/(y1 y2), |h| <= C e^R/y1, |d| <= C e^R/y2, |a|,|e|,|i| <= C e^R,
/// |f| <= C e^R y1, |b| <= C e^R y2, |c| <= C e^R y1 y2.
bool satisfies_entry_bounds(const IntMatrix3& gamma, const H3Point& z, double R, double C = 10.0);

struct ShellCount {
    std::int64_t count = 0;
    double envelope = 0.0;  ///< (1 + y1 K)(1 + y2 K)(1 + y1 y2 K)
};

/// M1 matrices with K <= ||C(z^{-1} gamma z)|| < 2K, enumerated with g = h = d = 0 fixed.
/// Throws DomainError unless z is in the Siegel set and 0 < K <= 2.
ShellCount m1_shell_count(const H3Point& z, double K, unsigned threads = 1);

struct WeightModel {
    double lambda = 1.0;  ///< Laplace eigenvalue, >= 1
    void validate() const;
    /// lambda^{3/2} (1 + lambda^{1/2} norm)^{-1/2}
    [[nodiscard]] double weight(double cartan_norm) const;
};

struct PretraceResult {
    double total = 0.0;
    std::array<double, 4> by_class{};        ///< subtotals for M1..M4
    std::array<std::int64_t, 4> counts{};  ///< matrices per class
};

/// Sum of the model weight over enumerate_gammas(z, R), compensated and in sorted order.
PretraceResult pretrace_weight_sum(const H3Point& z, const WeightModel& model, double R, unsigned threads = 1);

/// One matrix per line, nine integers separated by spaces.
void write_matrix_list(std::ostream& os, std::span<const IntMatrix3> gammas);

}  // namespace gl3sup
