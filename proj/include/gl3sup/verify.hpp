#pragma once

#include <cstdint>
#include <vector>

#include "gl3sup/expansion.hpp"
#include "gl3sup/gl2special.hpp"
#include "gl3sup/h3geom.hpp"
#include "gl3sup/report.hpp"
#include "gl3sup/whittaker3.hpp"

namespace gl3sup {

/// Integral of W_{it}^2/x against 1/8 for each t; passes when every deviation is <= tol.
VerificationReport verify_eighth(const std::vector<double>& ts, double tol = 1e-5, const BesselEvalConfig& cfg = {},
                                 unsigned threads = 1);

/// Ratio tail_integral(t, cut) / (log(3T) (1 + cut/T)^{-A}), T = max(1/2, t), over ts x cut_factors * T.
/// Passes when the maximum is finite and <= ceiling, and the per-T maxima do not increase monotonically
/// along ts by more than growth overall.
VerificationReport verify_lemma41(const std::vector<double>& ts, const std::vector<double>& cut_factors, double A,
                                  double ceiling = 50.0, double growth = 3.0, const BesselEvalConfig& cfg = {},
                                  unsigned threads = 1);

/// Lemma 4.2 ratios for nu = (T0/2, T0/2) on y in base_grid * max(1, T0/4), per T0. Passes when every
/// ratio is <= ceiling and the per-T0 maxima agree within a factor `stability`.
VerificationReport verify_lemma42_grid(const std::vector<double>& t0s, const std::vector<double>& base_grid, double A,
                                       double ceiling = 100.0, double stability = 3.0, const JwConfig& cfg = {},
                                       unsigned threads = 1);

/// W_{it}(t/2pi) t^{-1/6} in [lo, hi] for each t.
VerificationReport verify_bump(const std::vector<double>& ts, double lo = 0.05, double hi = 20.0,
                               const BesselEvalConfig& cfg = {});

/// Random unimodular integer matrix: a product of `steps` elementary moves with entries bounded by `spread`.
IntMatrix3 random_unimodular(std::uint64_t seed, std::uint64_t k, int steps = 6, int spread = 2);

/// Closed-form z^{-1} gamma z against the matrix product on `samples` random (z, gamma); (3,1) entry compared bitwise.
VerificationReport verify_sandwich(int samples, std::uint64_t seed, double tol = 1e-12);

/// Every gamma of enumerate_gammas(z, R) satisfies the entry chain with constant C. When oracle_box > 0, also
/// compares the enumeration at the origin point against exhaustive search over entries in [-oracle_box, oracle_box].
VerificationReport verify_entry_bounds(const std::vector<H3Point>& points, double R, double C = 10.0,
                                       int oracle_box = 3, unsigned threads = 1);

/// M1 shell counts against factor * (1 + y1 K)(1 + y2 K)(1 + y1 y2 K), and M4 counts at m4_points
/// (which should have y1 y2 > 10 e^R) against zero.
VerificationReport verify_m1_count(const std::vector<H3Point>& points, const std::vector<double>& Ks,
                                   double factor = 64.0, const std::vector<H3Point>& m4_points = {},
                                   double m4_radius = 1.0, unsigned threads = 1);

/// Pre-trace weight sums with ratios to lambda^{3/2} + lambda^{5/4} y^4-type shapes (total, M2 with y2^2, M3 with y1^2).
/// Reports the fitted constants; passes when, for every point and shape, the ratio at the largest lambda is at
/// most `growth` times the ratio at the smallest.
VerificationReport verify_pretrace(const std::vector<H3Point>& points, const std::vector<double>& lambdas, double R,
                                   double growth = 3.0, unsigned threads = 1);

/// |phi(z)| against |phi~(dual_point(z))| with swapped nu for the delta table.
VerificationReport verify_duality(const std::vector<H3Point>& points, const SpectralTriple& nu, double tol = 1e-6,
                                  const FourierConfig& cfg = {});

}  // namespace gl3sup
