#include "gl3sup/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "gl3sup/cartan.hpp"
#include "gl3sup/counting.hpp"
#include "gl3sup/error.hpp"
#include "gl3sup/parallel.hpp"

namespace gl3sup {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    return std::mt19937_64(seq);
}

std::string short_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string point_label(const H3Point& z) {
    return "(" + short_num(z.x1) + "," + short_num(z.x2) + "," + short_num(z.x3) + "," + short_num(z.y1) + "," +
           short_num(z.y2) + ")";
}

}  // namespace

VerificationReport verify_eighth(const std::vector<double>& ts, double tol, const BesselEvalConfig& cfg,
                                 unsigned threads) {
    VerificationReport rep;
    rep.name = "eighth";
    rep.columns = {"t", "integral", "deviation"};
    rep.rows.assign(ts.size(), {});
    parallel_for(ts.size(), threads, [&](std::size_t k) {
        const double v = whittaker_sq_log_integral(ts[k], cfg);
        rep.rows[k] = {ts[k], v, std::abs(v - 0.125)};
    });
    double worst = 0.0, at = 0.0;
    for (const auto& r : rep.rows)
        if (r[2] >= worst) {
            worst = r[2];
            at = r[0];
        }
    rep.stats = {{"max_deviation", worst}, {"tolerance", tol}};
    rep.pass = worst <= tol;
    std::ostringstream os;
    os << "max |integral - 1/8| = " << worst << " at t=" << at;
    rep.message = os.str();
    return rep;
}

VerificationReport verify_lemma41(const std::vector<double>& ts, const std::vector<double>& cut_factors, double A,
                                  double ceiling, double growth, const BesselEvalConfig& cfg, unsigned threads) {
    VerificationReport rep;
    rep.name = "lemma41";
    rep.columns = {"t", "cut", "integral", "envelope", "ratio"};
    std::vector<std::pair<double, double>> tasks;
    for (double t : ts)
        for (double f : cut_factors) tasks.emplace_back(t, f * std::max(0.5, t));
    rep.rows.assign(tasks.size(), {});
    parallel_for(tasks.size(), threads, [&](std::size_t k) {
        const auto [t, cut] = tasks[k];
        const double T = std::max(0.5, t);
        const double v = whittaker_sq_tail_integral(t, cut, cfg);
        const double env = std::log(3.0 * T) * std::pow(1.0 + cut / T, -A);
        rep.rows[k] = {t, cut, v, env, v / env};
    });
    std::vector<double> per_t(ts.size(), 0.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        const double r = rep.rows[k][4];
        per_t[k / cut_factors.size()] = std::max(per_t[k / cut_factors.size()], r);
        worst = std::max(worst, std::isfinite(r) ? r : std::numeric_limits<double>::infinity());
    }
    bool increasing = per_t.size() >= 2;
    for (std::size_t k = 1; k < per_t.size(); ++k) increasing = increasing && per_t[k] > per_t[k - 1];
    const double rise = per_t.empty() ? 1.0 : per_t.back() / per_t.front();
    rep.stats = {{"max_ratio", worst}, {"ceiling", ceiling}, {"growth_last_over_first", rise}};
    for (std::size_t k = 0; k < ts.size(); ++k) rep.stats["max_ratio_t=" + short_num(ts[k])] = per_t[k];
    rep.pass = std::isfinite(worst) && worst <= ceiling && !(increasing && rise > growth);
    std::ostringstream os;
    os << "max ratio " << worst << " (ceiling " << ceiling << "), per-T maxima";
    for (double v : per_t) os << ' ' << v;
    rep.message = os.str();
    return rep;
}

VerificationReport verify_lemma42_grid(const std::vector<double>& t0s, const std::vector<double>& base_grid, double A,
                                       double ceiling, double stability, const JwConfig& cfg, unsigned threads) {
    VerificationReport rep;
    rep.name = "lemma42";
    std::vector<double> per;
    for (double T0 : t0s) {
        const SpectralTriple nu(T0 / 2, T0 / 2);
        std::vector<double> ys;
        for (double b : base_grid) ys.push_back(b * std::max(1.0, T0 / 4));
        auto part = verify_lemma42(std::span<const SpectralTriple>(&nu, 1), ys, A, ceiling, cfg, threads);
        rep.columns = part.columns;
        rep.rows.insert(rep.rows.end(), part.rows.begin(), part.rows.end());
        per.push_back(part.stats["max_ratio"]);
        rep.stats["max_ratio_T0=" + short_num(T0)] = part.stats["max_ratio"];
    }
    const double hi = per.empty() ? 0.0 : *std::max_element(per.begin(), per.end());
    const double lo = per.empty() ? 0.0 : *std::min_element(per.begin(), per.end());
    rep.stats["max_ratio"] = hi;
    rep.stats["spread"] = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    rep.pass = std::isfinite(hi) && hi <= ceiling && (per.empty() || (lo > 0 && hi / lo <= stability));
    std::ostringstream os;
    os << "max ratio " << hi << " (ceiling " << ceiling << "), spread across T0 " << rep.stats["spread"];
    rep.message = os.str();
    return rep;
}

VerificationReport verify_bump(const std::vector<double>& ts, double lo, double hi, const BesselEvalConfig& cfg) {
    VerificationReport rep;
    rep.name = "bump";
    rep.columns = {"t", "W", "normalized"};
    rep.pass = true;
    std::ostringstream os;
    double mn = HUGE_VAL, mx = -HUGE_VAL;
    for (double t : ts) {
        const double w = gl2_whittaker(t, t / (2.0 * std::numbers::pi), cfg);
        const double n = w * std::pow(t, -1.0 / 6.0);
        mn = std::min(mn, n);
        mx = std::max(mx, n);
        rep.rows.push_back({t, w, n});
        if (!(n >= lo && n <= hi)) {
            rep.pass = false;
            os << "t=" << t << " gives " << n << "; ";
        }
    }
    os << "W(t/2pi) t^(-1/6) in [" << mn << ", " << mx << "], allowed [" << lo << ", " << hi << "]";
    rep.stats["normalized_min"] = mn;
    rep.stats["normalized_max"] = mx;
    rep.message = os.str();
    return rep;
}

IntMatrix3 random_unimodular(std::uint64_t seed, std::uint64_t k, int steps, int spread) {
    auto rng = stream(seed, k);
    std::uniform_int_distribution<int> row(0, 2), shift(-spread, spread), coin(0, 1);
    IntMatrix3 g = IntMatrix3::identity();
    for (int s = 0; s < steps; ++s) {
        const int i = row(rng);
        int j = row(rng);
        if (j == i) j = (i + 1) % 3;
        IntMatrix3 e = IntMatrix3::identity();
        e(i, j) = shift(rng);
        g = e * g;
    }
    // Finish with a random signed permutation so det = -1 and non-triangular shapes also occur.
    std::array<int, 3> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    IntMatrix3 p;
    for (int r = 0; r < 3; ++r) p(r, perm[static_cast<std::size_t>(r)]) = 1;
    if (coin(rng)) p(0, perm[0]) = -1;
    return p * g;
}

VerificationReport verify_sandwich(int samples, std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.name = "sandwich";
    rep.columns = {"sample", "max_abs_diff", "scale", "g31_exact"};
    double worst = 0.0;
    bool exact = true;
    for (int k = 0; k < samples; ++k) {
        auto rng = stream(seed, 1'000'000 + static_cast<std::uint64_t>(k));
        std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.3, 3.0);
        const H3Point z{ux(rng), ux(rng), ux(rng), uy(rng), uy(rng)};
        const IntMatrix3 g = random_unimodular(seed, static_cast<std::uint64_t>(k));
        const RealMatrix3 a = sandwich(z, g);
        const RealMatrix3 m = to_matrix(z);
        const RealMatrix3 b = m.inverse() * g.to_real() * m;
        double diff = 0.0;
        for (std::size_t j = 0; j < 9; ++j) diff = std::max(diff, std::abs(a.m[j] - b.m[j]));
        const double scale = std::max(1.0, b.frobenius());
        const bool e31 = a(2, 0) == static_cast<double>(g.g()) * z.y1 * z.y2;
        exact = exact && e31;
        worst = std::max(worst, diff / scale);
        rep.rows.push_back({static_cast<double>(k), diff, scale, e31 ? 1.0 : 0.0});
    }
    rep.stats = {{"max_rel_diff", worst}, {"tolerance", tol}, {"samples", static_cast<double>(samples)}};
    rep.pass = worst <= tol && exact;
    std::ostringstream os;
    os << "max |explicit - product| / max(1, |product|) = " << worst << "; (3,1) entry exact: " << (exact ? "yes" : "no");
    rep.message = os.str();
    return rep;
}

VerificationReport verify_entry_bounds(const std::vector<H3Point>& points, double R, double C, int oracle_box,
                                       unsigned threads) {
    VerificationReport rep;
    rep.name = "entry-bounds";
    rep.columns = {"x1", "x2", "x3", "y1", "y2", "matrices", "violations"};
    std::int64_t violations = 0;
    for (const auto& z : points) {
        const auto gs = enumerate_gammas(z, R, threads);
        std::int64_t bad = 0;
        for (const auto& g : gs) bad += !satisfies_entry_bounds(g, z, R, C);
        violations += bad;
        rep.rows.push_back({z.x1, z.x2, z.x3, z.y1, z.y2, static_cast<double>(gs.size()), static_cast<double>(bad)});
    }
    std::int64_t missed = 0, extra = 0;
    if (oracle_box > 0) {
        // Exhaustive search at the origin, where z^{-1} gamma z = gamma.
        const H3Point o{};
        const auto gs = enumerate_gammas(o, R, threads);
        const std::set<IntMatrix3> found(gs.begin(), gs.end());
        const int w = 2 * oracle_box + 1;
        std::int64_t total = 1;
        for (int j = 0; j < 9; ++j) total *= w;
        std::set<IntMatrix3> brute;
        for (std::int64_t k = 0; k < total; ++k) {
            std::int64_t q = k;
            IntMatrix3 g;
            for (auto& v : g.m) {
                v = q % w - oracle_box;
                q /= w;
            }
            const auto d = g.det();
            if ((d != 1 && d != -1) || g.canonical_sign() != g) continue;
            if (cartan_norm(cartan_project(g.to_real())) <= R) brute.insert(g);
        }
        for (const auto& g : brute) missed += !found.count(g);
        // Matrices outside the oracle box cannot be checked by it; count only those inside.
        for (const auto& g : found)
            extra += std::all_of(g.m.begin(), g.m.end(), [&](auto v) { return std::abs(v) <= oracle_box; }) &&
                     !brute.count(g);
        rep.stats["oracle_matrices"] = static_cast<double>(brute.size());
        rep.stats["enumerated_at_origin"] = static_cast<double>(found.size());
    }
    rep.stats["violations"] = static_cast<double>(violations);
    rep.stats["oracle_missed"] = static_cast<double>(missed);
    rep.stats["oracle_extra"] = static_cast<double>(extra);
    rep.pass = violations == 0 && missed == 0 && extra == 0;
    std::ostringstream os;
    os << violations << " entry-bound violations (C=" << C << "), oracle missed " << missed << ", extra " << extra;
    rep.message = os.str();
    return rep;
}

VerificationReport verify_m1_count(const std::vector<H3Point>& points, const std::vector<double>& Ks, double factor,
                                   const std::vector<H3Point>& m4_points, double m4_radius, unsigned threads) {
    VerificationReport rep;
    rep.name = "m1-count";
    rep.columns = {"x1", "x2", "x3", "y1", "y2", "K", "count", "envelope", "ratio"};
    double worst = 0.0;
    std::string where;
    for (const auto& z : points)
        for (double K : Ks) {
            const auto s = m1_shell_count(z, K, threads);
            const double ratio = static_cast<double>(s.count) / s.envelope;
            if (ratio > worst) {
                worst = ratio;
                where = point_label(z) + " K=" + short_num(K);
            }
            rep.rows.push_back({z.x1, z.x2, z.x3, z.y1, z.y2, K, static_cast<double>(s.count), s.envelope, ratio});
        }
    std::int64_t m4 = 0;
    for (const auto& z : m4_points) {
        std::int64_t n = 0;
        for (const auto& g : enumerate_gammas(z, m4_radius, threads)) n += classify_m(g) == MClass::M4;
        m4 += n;
        rep.stats["m4_count " + point_label(z)] = static_cast<double>(n);
    }
    rep.stats["max_ratio"] = worst;
    rep.stats["factor"] = factor;
    rep.stats["m4_total"] = static_cast<double>(m4);
    rep.pass = worst <= factor && m4 == 0;
    std::ostringstream os;
    os << "max count/envelope " << worst << " (limit " << factor << ") at " << where << "; M4 total " << m4;
    rep.message = os.str();
    return rep;
}

VerificationReport verify_pretrace(const std::vector<H3Point>& points, const std::vector<double>& lambdas, double R,
                                   double growth, unsigned threads) {
    VerificationReport rep;
    rep.name = "pretrace";
    rep.columns = {"y1", "y2", "lambda", "total", "ratio_total", "m2", "ratio_m2", "m3", "ratio_m3"};
    if (lambdas.empty()) throw DomainError("verify_pretrace: need at least one lambda");
    double c_total = 0, c_m2 = 0, c_m3 = 0;
    bool ok = true;
    std::ostringstream os;
    for (const auto& z : points) {
        std::array<double, 3> first{}, last{};
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            const double lam = lambdas[k];
            const auto r = pretrace_weight_sum(z, WeightModel{lam}, R, threads);
            const double base = std::pow(lam, 1.5);
            const double s = std::pow(lam, 1.25);
            const double Y = z.y1 * z.y2;
            const std::array<double, 3> ratio{r.total / (base + s * Y * Y), r.by_class[1] / (base + s * z.y2 * z.y2),
                                              r.by_class[2] / (base + s * z.y1 * z.y1)};
            c_total = std::max(c_total, ratio[0]);
            c_m2 = std::max(c_m2, ratio[1]);
            c_m3 = std::max(c_m3, ratio[2]);
            if (k == 0) first = ratio;
            last = ratio;
            rep.rows.push_back({z.y1, z.y2, lam, r.total, ratio[0], r.by_class[1], ratio[1], r.by_class[2], ratio[2]});
        }
        for (int j = 0; j < 3; ++j)
            if (last[j] > growth * first[j] && last[j] > 0) {
                ok = false;
                os << "ratio grows by " << last[j] / first[j] << " at " << point_label(z) << "; ";
            }
    }
    rep.stats = {{"fitted_C_total", c_total}, {"fitted_C_m2", c_m2}, {"fitted_C_m3", c_m3}, {"growth_limit", growth}};
    rep.pass = ok && std::isfinite(c_total) && std::isfinite(c_m2) && std::isfinite(c_m3);
    os << "fitted C: total " << c_total << ", M2 " << c_m2 << ", M3 " << c_m3;
    rep.message = os.str();
    return rep;
}

VerificationReport verify_duality(const std::vector<H3Point>& points, const SpectralTriple& nu, double tol,
                                  const FourierConfig& cfg) {
    VerificationReport rep;
    rep.name = "duality";
    rep.columns = {"x1", "x2", "x3", "y1", "y2", "abs_phi", "abs_dual", "rel_diff"};
    const auto delta = delta_coefficients();
    double worst = 0.0;
    std::string where;
    for (const auto& z : points) {
        const double a = std::abs(fourier_whittaker_sum(z, nu, delta, cfg).value);
        const double b = std::abs(fourier_whittaker_sum(dual_point(z), nu.swapped(), delta, cfg).value);
        const double rel = std::abs(a - b) / std::max(a, b);
        if (!(rel <= worst)) {
            worst = rel;
            where = point_label(z);
        }
        rep.rows.push_back({z.x1, z.x2, z.x3, z.y1, z.y2, a, b, rel});
    }
    rep.stats = {{"max_rel_diff", worst}, {"tolerance", tol}};
    rep.pass = worst <= tol;
    rep.message = "max relative difference " + short_num(worst) + (where.empty() ? "" : " at " + where);
    return rep;
}

}  // namespace gl3sup
