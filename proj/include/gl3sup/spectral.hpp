#pragma once

#include <array>
#include <complex>

namespace gl3sup {

/// Tempered spectral parameters (nu0, nu1, nu2) = i*(t0, t1, t2) with t0 = t1 + t2 and t1, t2 >= 0.
class SpectralTriple {
public:
    /// Throws DomainError unless t1, t2 are finite and nonnegative.
    SpectralTriple(double t1, double t2);

    [[nodiscard]] double t0() const { return t1_ + t2_; }
    [[nodiscard]] double t1() const { return t1_; }
    [[nodiscard]] double t2() const { return t2_; }

    /// The contragredient parameters (nu0, nu2, nu1).
    [[nodiscard]] SpectralTriple swapped() const { return {t2_, t1_}; }

private:
    double t1_;
    double t2_;
};

/// Imaginary parts of an arbitrary (possibly negative) spectral triple; used for Weyl orbit elements.
struct SignedTriple {
    double t0 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    friend bool operator==(const SignedTriple&, const SignedTriple&) = default;
};

/// Langlands parameters (mu1, mu2, mu3), summing to zero.
struct LanglandsTriple {
    std::complex<double> m1;
    std::complex<double> m2;
    std::complex<double> m3;
};

LanglandsTriple langlands_from_spectral(const SpectralTriple& nu);
LanglandsTriple langlands_from_signed(const SignedTriple& nu);

/// 1 + 3 t1^2 + 3 t1 t2 + 3 t2^2.
double laplace_eigenvalue(const SpectralTriple& nu);

/// 1 - (mu1^2 + mu2^2 + mu3^2)/2, the Langlands-parameter form of the eigenvalue.
double laplace_eigenvalue(const LanglandsTriple& mu);

/// The six elements of the S3-orbit in the order
/// (nu0,nu1,nu2), (nu2,-nu1,nu0), (-nu1,nu2,-nu0), (-nu0,-nu2,-nu1), (-nu2,-nu0,nu1), (nu1,nu0,-nu2).
std::array<SignedTriple, 6> weyl_orbit(const SignedTriple& nu);
std::array<SignedTriple, 6> weyl_orbit(const SpectralTriple& nu);

/// T0 = max(2, |nu0|, |nu1|, |nu2|).
double t_zero(const SpectralTriple& nu);
double t_zero(const SignedTriple& nu);

}  // namespace gl3sup
