#include "gl3sup/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "gl3sup/error.hpp"

namespace gl3sup {

SpectralTriple::SpectralTriple(double t1, double t2) : t1_(t1), t2_(t2) {
    if (!(std::isfinite(t1) && std::isfinite(t2)) || t1 < 0.0 || t2 < 0.0)
        throw DomainError("SpectralTriple: t1, t2 must be finite and >= 0");
}

LanglandsTriple langlands_from_signed(const SignedTriple& nu) {
    using namespace std::complex_literals;
    const std::complex<double> n1 = 1i * nu.t1;
    const std::complex<double> n2 = 1i * nu.t2;
    return {n1 + 2.0 * n2, n1 - n2, -2.0 * n1 - n2};
}

LanglandsTriple langlands_from_spectral(const SpectralTriple& nu) {
    return langlands_from_signed({nu.t0(), nu.t1(), nu.t2()});
}

double laplace_eigenvalue(const SpectralTriple& nu) {
    const double a = nu.t1();
    const double b = nu.t2();
    return 1.0 + 3.0 * a * a + 3.0 * a * b + 3.0 * b * b;
}

double laplace_eigenvalue(const LanglandsTriple& mu) {
    const std::complex<double> s = mu.m1 * mu.m1 + mu.m2 * mu.m2 + mu.m3 * mu.m3;
    return 1.0 - 0.5 * s.real();
}

std::array<SignedTriple, 6> weyl_orbit(const SignedTriple& n) {
    return {{
        {n.t0, n.t1, n.t2},
        {n.t2, -n.t1, n.t0},
        {-n.t1, n.t2, -n.t0},
        {-n.t0, -n.t2, -n.t1},
        {-n.t2, -n.t0, n.t1},
        {n.t1, n.t0, -n.t2},
    }};
}

std::array<SignedTriple, 6> weyl_orbit(const SpectralTriple& nu) {
    return weyl_orbit(SignedTriple{nu.t0(), nu.t1(), nu.t2()});
}

double t_zero(const SpectralTriple& nu) { return std::max(2.0, nu.t0()); }

double t_zero(const SignedTriple& nu) {
    return std::max({2.0, std::abs(nu.t0), std::abs(nu.t1), std::abs(nu.t2)});
}

}  // namespace gl3sup
