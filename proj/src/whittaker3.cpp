#include "gl3sup/whittaker3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "gl3sup/error.hpp"
#include "gl3sup/parallel.hpp"
#include "gl3sup/quadrature.hpp"

namespace gl3sup {

namespace {

constexpr double kPi = std::numbers::pi;

// sqrt(1 + e^v) without overflow.
double sqrt_one_plus_exp(double v) {
    return v > 0.0 ? std::exp(0.5 * v) * std::sqrt(1.0 + std::exp(-v)) : std::sqrt(1.0 + std::exp(v));
}

// Leading exponent of e^{pi tau/2} K_{i tau}(x): zero in the oscillatory range, -x (sin a - a cos a)
// with cos a = tau/x beyond the turning point.
double log_envelope(double tau, double x) {
    if (x <= tau) return 0.0;
    const double a = std::acos(tau / x);
    return -x * (std::sin(a) - a * std::cos(a));
}

struct Node {
    double mantissa;
    std::int64_t exp2;
    double v;
};

}  // namespace

void JwConfig::validate() const {
    bessel.validate();
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw DomainError("JwConfig: rel_tol must lie in (0, 1e-3]");
    if (!(margin >= 10.0)) throw DomainError("JwConfig: margin must be >= 10");
    if (!(step_scale > 0.0 && step_scale <= 1.0)) throw DomainError("JwConfig: step_scale must lie in (0, 1]");
    if (max_halvings < 1) throw DomainError("JwConfig: max_halvings must be >= 1");
}

std::complex<double> jw_diagonal(const SpectralTriple& nu, double y1, double y2, const JwConfig& cfg) {
    if (!(y1 > 0.0) || !(y2 > 0.0) || !std::isfinite(y1) || !std::isfinite(y2))
        throw DomainError("jw_diagonal: y1, y2 must be finite and > 0");
    cfg.validate();
    const double tau = 1.5 * nu.t0();
    const double omega = 0.75 * (nu.t1() - nu.t2());
    const double a1 = 2.0 * kPi * y1;
    const double a2 = 2.0 * kPi * y2;

    auto env1 = [&](double v) { return log_envelope(tau, a1 * sqrt_one_plus_exp(v)); };
    auto env2 = [&](double v) { return log_envelope(tau, a2 * sqrt_one_plus_exp(-v)); };

    // env1 is nonincreasing and env2 nondecreasing in v, both <= 0, so once env1 (resp. env2) drops
    // below max - margin the whole half-line beyond is negligible.
    constexpr double kScan = 0.25;
    double emax = env1(0.0) + env2(0.0);
    double hi = 0.0;
    double lo = 0.0;
    for (;;) {
        hi += kScan;
        const double e1 = env1(hi);
        emax = std::max(emax, e1 + env2(hi));
        if (e1 < emax - cfg.margin) break;
        if (hi > 1400.0) throw NonConvergence("jw_diagonal: v-range does not close (right)");
    }
    for (;;) {
        lo -= kScan;
        const double e2 = env2(lo);
        emax = std::max(emax, env1(lo) + e2);
        if (e2 < emax - cfg.margin) break;
        if (lo < -1400.0) throw NonConvergence("jw_diagonal: v-range does not close (left)");
    }

    auto node = [&](double v) {
        const ScaledReal k1 = k_bessel_imag_scaled(tau, a1 * sqrt_one_plus_exp(v), cfg.bessel);
        const ScaledReal k2 = k_bessel_imag_scaled(tau, a2 * sqrt_one_plus_exp(-v), cfg.bessel);
        const ScaledReal p = k1 * k2;
        return Node{p.mantissa(), p.exp2(), v};
    };

    const double h0 = cfg.step_scale *
                      std::min({0.25, 1.0 / (1.0 + std::abs(nu.t1() - nu.t2())), 1.0 / (1.0 + tau)});
    auto n = static_cast<long>(std::ceil((hi - lo) / h0));
    double h = (hi - lo) / static_cast<double>(n);

    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) nodes.push_back(node(lo + h * static_cast<double>(k)));
    std::int64_t ref = nodes.front().exp2;
    for (const auto& nd : nodes)
        if (nd.mantissa != 0.0) ref = std::max(ref, nd.exp2);

    quad::CompensatedSum<double> re;
    quad::CompensatedSum<double> im;
    quad::CompensatedSum<double> ab;
    auto accumulate = [&](const Node& nd, double w) {
        const double val = std::ldexp(nd.mantissa, static_cast<int>(std::max<std::int64_t>(nd.exp2 - ref, -1100)));
        re.add(w * val * std::cos(omega * nd.v));
        im.add(omega == 0.0 ? 0.0 : w * val * std::sin(omega * nd.v));
        ab.add(w * std::abs(val));
    };
    for (long k = 0; k <= n; ++k) accumulate(nodes[static_cast<std::size_t>(k)], (k == 0 || k == n) ? 0.5 : 1.0);

    std::complex<double> value(h * re.value(), h * im.value());
    bool converged = false;
    for (int r = 0; r < cfg.max_halvings; ++r) {
        for (long k = 0; k < n; ++k) accumulate(node(lo + h * (static_cast<double>(k) + 0.5)), 1.0);
        n *= 2;
        h *= 0.5;
        const std::complex<double> next(h * re.value(), h * im.value());
        const double delta = std::abs(next - value);
        value = next;
        if (delta <= cfg.rel_tol * h * ab.value()) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "jw_diagonal: trapezoid did not converge for t1 = " << nu.t1() << ", t2 = " << nu.t2()
           << ", y = (" << y1 << ", " << y2 << ")";
        throw NonConvergence(os.str());
    }

    ScaledReal scale(4.0 * std::pow(kPi, 1.5) * y1 * y2);
    scale /= gamma_half_modulus(1.5 * nu.t0());
    scale /= gamma_half_modulus(1.5 * nu.t1());
    scale /= gamma_half_modulus(1.5 * nu.t2());
    scale *= ScaledReal::from_parts(1.0, ref);
    const double s = scale.to_double();
    if (std::isinf(s)) throw Overflow("jw_diagonal: exponential scales failed to cancel");

    const double theta = 0.5 * (nu.t1() - nu.t2()) * std::log(y1 / y2);
    const std::complex<double> phase = theta == 0.0 ? std::complex<double>(1.0, 0.0)
                                                    : std::complex<double>(std::cos(theta), std::sin(theta));
    return s * value * phase;
}

std::complex<double> jw_full(const SpectralTriple& nu, const H3Point& z, int sign, const JwConfig& cfg) {
    z.validate();
    if (sign != 1 && sign != -1) throw DomainError("jw_full: sign must be +1 or -1");
    const std::complex<double> w = jw_diagonal(nu, z.y1, z.y2, cfg);
    const double theta = z.x1 + static_cast<double>(sign) * z.x2;
    if (theta - std::floor(theta) == 0.0) return w;
    return w * unit_phase(theta);
}

std::complex<double> unit_phase(double theta) {
    theta -= std::floor(theta);
    if (theta == 0.0) return {1.0, 0.0};
    return std::polar(1.0, 2.0 * kPi * theta);
}

double lemma42_envelope(const SpectralTriple& nu, double y1, double y2, double A, double C) {
    if (!(y1 > 0.0) || !(y2 > 0.0) || !(A > 0.0) || !(C > 0.0))
        throw DomainError("lemma42_envelope: inputs must be positive");
    const double t0 = t_zero(nu);
    return C * std::log(t0) * std::sqrt(y1 * y2) * std::pow(1.0 + y1 / t0, -A) * std::pow(1.0 + y2 / t0, -A);
}

VerificationReport verify_lemma42(std::span<const SpectralTriple> nus, std::span<const double> y_grid, double A,
                                  double ceiling, const JwConfig& cfg, unsigned threads) {
    VerificationReport rep;
    rep.name = "lemma42";
    rep.columns = {"t1", "t2", "y1", "y2", "abs", "envelope", "ratio"};
    struct Task {
        SpectralTriple nu;
        double y1, y2;
    };
    std::vector<Task> tasks;
    for (const auto& nu : nus)
        for (double a : y_grid)
            for (double b : y_grid) tasks.push_back({nu, a, b});
    rep.rows.assign(tasks.size(), {});
    parallel_for(tasks.size(), threads, [&](std::size_t k) {
        const auto& tk = tasks[k];
        const double v = std::abs(jw_diagonal(tk.nu, tk.y1, tk.y2, cfg));
        const double env = lemma42_envelope(tk.nu, tk.y1, tk.y2, A, 1.0);
        rep.rows[k] = {tk.nu.t1(), tk.nu.t2(), tk.y1, tk.y2, v, env, v / env};
    });
    double worst = 0.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < rep.rows.size(); ++k)
        if (rep.rows[k][6] > worst) {
            worst = rep.rows[k][6];
            arg = k;
        }
    rep.stats["max_ratio"] = worst;
    rep.stats["points"] = static_cast<double>(rep.rows.size());
    rep.stats["ceiling"] = ceiling;
    rep.pass = std::isfinite(worst) && worst <= ceiling;
    std::ostringstream os;
    if (rep.rows.empty()) {
        os << "no points";
    } else {
        const auto& r = rep.rows[arg];
        os << "max ratio " << worst << " at t1=" << r[0] << " t2=" << r[1] << " y1=" << r[2] << " y2=" << r[3];
    }
    rep.message = os.str();
    return rep;
}

}  // namespace gl3sup
