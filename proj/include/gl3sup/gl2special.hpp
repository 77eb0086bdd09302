#pragma once

#include "gl3sup/scaled_real.hpp"

namespace gl3sup {

/// Which integral representation evaluates K_{it}(x).
enum class BesselKernel {
    /// Library default; currently the contour kernel, which holds rel_tol of the natural scale for all t.
    Auto,
    /// Real-axis trapezoid; double precision up to t_switch, MPFR with 20 + ceil(0.69 t) digits above.
    RealAxis,
    /// Double-precision integral along the steepest-descent path through the saddle point(s).
    Contour,
};

struct BesselEvalConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    double t_switch = 10.0;
    int max_refinements = 12;
    BesselKernel kernel = BesselKernel::Auto;

    /// Throws DomainError unless tolerances lie in (0, 1e-3] and max_refinements >= 4.
    void validate() const;
};

/// K_{it}(x) for t >= 0, x > 0. Accuracy is rel_tol relative to the natural scale
/// min(e^{-pi t/2}, integral of |integrand|), so values near zeros of K are accurate in absolute terms.
/// Throws DomainError for x <= 0 or t < 0, NonConvergence when refinement stalls.
ScaledReal k_bessel_imag_scaled(double t, double x, const BesselEvalConfig& cfg = {});

/// The two representations individually, bypassing the kernel switch.
ScaledReal k_bessel_real_axis(double t, double x, const BesselEvalConfig& cfg = {});
ScaledReal k_bessel_contour(double t, double x, const BesselEvalConfig& cfg = {});

/// |Gamma(1/2 + it)| = sqrt(pi / cosh(pi t)).
ScaledReal gamma_half_modulus(double t);

/// Normalized GL(2) Whittaker function W_{it}(x) = sqrt(x) K_{it}(2 pi x) / |Gamma(1/2 + it)|.
double gl2_whittaker(double t, double x, const BesselEvalConfig& cfg = {});

/// Integral of W_{it}(x)^2 / x over (0, inf). Equals 1/8 for every real t.
double whittaker_sq_log_integral(double t, const BesselEvalConfig& cfg = {});

/// Integral of W_{it}(x)^2 / sqrt(x^2 - cut^2) over (cut, inf), cut >= 0.
double whittaker_sq_tail_integral(double t, double cut, const BesselEvalConfig& cfg = {});

/// Upper integration limit used by the two integrals above: max(cut, T) + 20 with T = max(1/2, t).
double whittaker_tail_cutoff(double t, double cut);

}  // namespace gl3sup
