#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gl3sup/h3geom.hpp"
#include "gl3sup/report.hpp"
#include "gl3sup/spectral.hpp"
#include "gl3sup/whittaker3.hpp"

namespace gl3sup {

enum class Provenance { File, Synthetic, Delta };

std::string to_string(Provenance p);

/// Coefficients lambda(m1, m2) for m1, m2 >= 1 with m1^2 m2 <= cutoff. Missing keys read as zero.
/// Negative m2 is handled by callers through lambda(m1, -m2) = lambda(m1, m2).
struct CoefficientTable {
    std::map<std::pair<std::int64_t, std::int64_t>, std::complex<double>> entries;
    std::int64_t cutoff = 1;
    Provenance provenance = Provenance::Delta;

    [[nodiscard]] std::complex<double> at(std::int64_t m1, std::int64_t m2) const;
    [[nodiscard]] bool is_real(double tol = 0.0) const;
};

/// The table with the single entry lambda(1, 1) = 1.
CoefficientTable delta_coefficients();

/// Model coefficients: for every prime p <= min(primes_up_to, cutoff), Satake angles theta1 + theta2 + theta3 = 0
/// drawn uniformly (theta1, theta2 in [0, 2 pi)) in increasing p order, lambda(p^a, p^b) = s_{(a+b, b, 0)}(e^{i theta}),
/// extended multiplicatively to all (m1, m2) with m1^2 m2 <= cutoff whose prime factors all received angles.
/// A model with Hecke multiplicativity and temperedness, not the data of an actual cusp form.
CoefficientTable synthetic_coefficients(std::uint64_t seed, std::int64_t primes_up_to, std::int64_t cutoff);

/// Schur polynomial s_{(l1, l2, 0)}(x1, x2, x3) with l1 >= l2 >= 0, via the Jacobi-Trudi determinant.
std::complex<double> schur3(int l1, int l2, const std::array<std::complex<double>, 3>& x);

/// CSV with header "m1,m2,re,im". Throws ParseError on malformed rows, duplicate keys or a missing file,
/// NormalizationError unless |lambda(1, 1) - 1| <= 1e-9. The cutoff is the largest m1^2 m2 present.
CoefficientTable load_coefficients(const std::string& path);
CoefficientTable parse_coefficients(const std::string& text);
void save_coefficients(const CoefficientTable& table, const std::string& path);
std::string format_coefficients(const CoefficientTable& table);

/// Coprime (c, d) with |c z2 + d| <= R, in increasing |c z2 + d| (ties by c, then d).
std::vector<std::pair<std::int64_t, std::int64_t>> coprime_pairs(std::complex<double> z2, double R);

/// Rigorous upper bound for |W~(y1, y2)| from |K_{it}| <= K_0 and K_0(x) <= sqrt(pi/2x) e^{-x}; natural log.
double jw_log_bound(const SpectralTriple& nu, double y1, double y2);

struct FourierConfig {
    JwConfig jw{};
    /// Coefficient truncation m1^2 m2 <= M; default (8 T0)^3 / (y1^2 y2).
    std::optional<double> coeff_cutoff;
    /// Pair truncation |c z2 + d| <= R_cd; default 8 T0 / min(1, y1).
    std::optional<double> pair_radius;
    /// Terms are evaluated in decreasing order of their bound; evaluation stops once
    /// (remaining terms) * (next bound) < prune * (largest term so far).
    double prune = 1e-14;
    unsigned threads = 1;
};

struct FourierSum {
    std::complex<double> value;
    double abs_sum = 0.0;  ///< sum of |lambda| / (m1 |m2|) * |W~| over the evaluated terms
    std::size_t pairs = 0;
    std::size_t terms = 0;      ///< (pair, m1, m2 > 0) triples within the truncation
    std::size_t evaluated = 0;  ///< triples actually evaluated
};

/// Truncated Fourier-Whittaker expansion: sum over coprime (c, d), (m1, m2 != 0) of
/// lambda(m1, |m2|) / (m1 |m2|) * jw_full(nu, (m1 x1', |m2| x2', *, m1 y1', |m2| y2'), sign m2),
/// where z' is the Iwasawa point of (gamma + 1) z and gamma in SL2(Z) has bottom row (c, d).
/// Throws DomainError unless z is in the Siegel set.
FourierSum fourier_whittaker_sum(const H3Point& z, const SpectralTriple& nu, const CoefficientTable& coeffs,
                                 const FourierConfig& cfg = {});

/// F(s1, s2) = sum over coprime (c, d) with |c z2 + d| <= R_cd of |W~(s1 |c z2 + d|, s2 |c z2 + d|^{-2})|,
/// pruned as in FourierConfig.
double analytic_part_F(double s1, double s2, std::complex<double> z2, const SpectralTriple& nu, double R_cd,
                       const JwConfig& cfg = {}, double prune = 1e-14, unsigned threads = 1);

/// Sum over the table with m1^2 m2 <= cutoff of |lambda|^2 / (m1^{2+2 eps} m2^{1+eps}).
double rankin_selberg_partial(const CoefficientTable& coeffs, double epsilon, double cutoff);

struct EnvelopeParams {
    double epsilon = 1e-6;
    double C = 1.0;
    double A = 3.0;
    void validate() const;
};

/// C min(y1, y2) (lambda^{1+eps}/(y1 y2) + lambda^{3/2+eps}/(y1 y2)^2). Requires y1, y2 >= sqrt(3)/2.
double theorem2_envelope(double lambda, double y1, double y2, const EnvelopeParams& p);

/// C (lambda^{3/4} + lambda^{5/8} y1 y2).
double theorem3_envelope(double lambda, double y1, double y2, const EnvelopeParams& p);

struct GlobalEnvelope {
    double value = 0.0;
    double argmax = 0.0;  ///< maximizing y1 y2
};

/// max over y1 y2 = Y in [3/4, lambda] of min(theorem2(y1 = y2 = sqrt Y), lambda^eps theorem3). Requires lambda >= 1.
GlobalEnvelope global_envelope(double lambda, const EnvelopeParams& p);

/// Least-squares slopes of log value and log argmax against log lambda over lambdas.
/// Passes when they are within tol of 39/40 and 7/20.
VerificationReport verify_envelope_3940(const std::vector<double>& lambdas, const EnvelopeParams& p,
                                        double tol = 0.01);

}  // namespace gl3sup
