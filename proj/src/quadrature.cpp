#include "gl3sup/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <sstream>

#include "gl3sup/error.hpp"

namespace gl3sup::quad {

Result adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                double abs_tol, const char* what, unsigned max_depth) {
    Result r;
    if (a == b) return r;
    // Boost stops on a criterion relative to the L1 norm only. Translate abs_tol into that form using a
    // fixed-rule estimate of the L1 norm, so that panels carrying a negligible share are not over-refined.
    double tol = rel_tol;
    if (abs_tol > 0.0) {
        const double l1_est = boost::math::quadrature::gauss<double, 20>::integrate(
            [&](double s) { return std::abs(f(s)); }, a, b);
        if (l1_est > 0.0 && std::isfinite(l1_est)) tol = std::max(tol, std::min(1e-3, abs_tol / l1_est));
    }
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, tol, &r.error, &r.l1);
    if (!std::isfinite(r.value)) {
        std::ostringstream os;
        os << what << ": non-finite quadrature value on [" << a << ", " << b << "]";
        throw NonConvergence(os.str());
    }
    if (r.error > std::max(abs_tol, 10.0 * rel_tol * r.l1)) {
        std::ostringstream os;
        os << what << ": quadrature error estimate " << r.error << " exceeds tolerance on [" << a
           << ", " << b << "] (l1 = " << r.l1 << ")";
        throw NonConvergence(os.str());
    }
    return r;
}

Result adaptive_panels(const std::function<double(double)>& f, std::span<const double> pts,
                       double rel_tol, double abs_tol, const char* what) {
    Result total;
    if (pts.size() < 2) return total;
    const double length = pts.back() - pts.front();
    CompensatedSum<double> sum;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double share = length > 0 ? (pts[k + 1] - pts[k]) / length : 1.0;
        Result p = adaptive(f, pts[k], pts[k + 1], rel_tol, abs_tol * share, what);
        sum.add(p.value);
        total.error += p.error;
        total.l1 += p.l1;
    }
    total.value = sum.value();
    return total;
}

double gauss_legendre20(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss<double, 20>::integrate(f, a, b);
}

std::vector<double> uniform_breaks(double a, double b, double width) {
    std::vector<double> pts;
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / width)));
    pts.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        pts.push_back(k == n ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(n));
    return pts;
}

}  // namespace gl3sup::quad
