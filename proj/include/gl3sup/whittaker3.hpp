#pragma once

#include <complex>
#include <span>

#include "gl3sup/gl2special.hpp"
#include "gl3sup/h3geom.hpp"
#include "gl3sup/report.hpp"
#include "gl3sup/spectral.hpp"

namespace gl3sup {

struct JwConfig {
    BesselEvalConfig bessel{};
    /// Trapezoid halving stops when successive estimates differ by rel_tol * (integral of |integrand|).
    double rel_tol = 1e-10;
    /// The v-range keeps every point whose log-envelope is within `margin` of the maximum.
    double margin = 55.0;
    /// Multiplies the initial trapezoid step.
    double step_scale = 1.0;
    int max_halvings = 10;

    void validate() const;
};

/// Diagonal-normalized GL(3) Whittaker function
///   W~(y1, y2) = 4 pi^{3/2} prod_j |Gamma(1/2 + 3/2 nu_j)|^{-1} y1 y2 (y1/y2)^{(nu1-nu2)/2}
///               * int_R K_{3 nu0/2}(2 pi y1 sqrt(1+e^v)) K_{3 nu0/2}(2 pi y2 sqrt(1+e^{-v})) e^{3/4 (nu1-nu2) v} dv.
/// The e^{+-3 pi t0/2} scales of the gamma factors and the Bessel product cancel internally.
std::complex<double> jw_diagonal(const SpectralTriple& nu, double y1, double y2, const JwConfig& cfg = {});

/// e(x1 + sign x2) * W~(y1, y2). The unimodular phase of the gamma factors is dropped,
/// so this is the Jacquet-Whittaker function up to a constant phase.
std::complex<double> jw_full(const SpectralTriple& nu, const H3Point& z, int sign, const JwConfig& cfg = {});

/// e(theta) = exp(2 pi i theta), with theta reduced mod 1 first.
std::complex<double> unit_phase(double theta);

/// C log(T0) sqrt(y1 y2) (1 + y1/T0)^{-A} (1 + y2/T0)^{-A}.
double lemma42_envelope(const SpectralTriple& nu, double y1, double y2, double A, double C);

/// |W~| / lemma42_envelope(C = 1) over nus x y_grid x y_grid. stats: max_ratio, points.
/// Passes when max_ratio <= ceiling.
VerificationReport verify_lemma42(std::span<const SpectralTriple> nus, std::span<const double> y_grid, double A,
                                  double ceiling, const JwConfig& cfg = {}, unsigned threads = 1);

}  // namespace gl3sup
