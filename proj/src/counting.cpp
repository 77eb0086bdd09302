#include "gl3sup/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "gl3sup/cartan.hpp"
#include "gl3sup/error.hpp"
#include "gl3sup/parallel.hpp"
#include "gl3sup/summation.hpp"

namespace gl3sup {

namespace {

using i128 = __int128;

// Number of pairs (c, d) != (0, 0) with |c z2 + d| <= R (or < R when strict).
std::int64_t count_ball(std::complex<double> z2, double R, bool strict, bool coprime_only) {
    if (R <= 0.0) return 0;
    const double x = z2.real(), y = z2.imag();
    const double R2 = R * R;
    auto inside = [&](std::int64_t c, std::int64_t d) {
        const double re = static_cast<double>(c) * x + static_cast<double>(d);
        const double im = static_cast<double>(c) * y;
        const double q = re * re + im * im;
        return strict ? q < R2 : q <= R2;
    };
    const auto cmax = static_cast<std::int64_t>(std::floor(R / y)) + 1;
    std::int64_t total = 0;
    for (std::int64_t c = -cmax; c <= cmax; ++c) {
        const double im = static_cast<double>(c) * y;
        const double s = std::sqrt(std::max(0.0, R2 - im * im));
        const double ctr = -static_cast<double>(c) * x;
        auto lo = static_cast<std::int64_t>(std::ceil(ctr - s));
        auto hi = static_cast<std::int64_t>(std::floor(ctr + s));
        // Snap the endpoints to the exact predicate.
        while (lo <= hi && !inside(c, lo)) ++lo;
        while (inside(c, lo - 1)) --lo;
        while (hi >= lo && !inside(c, hi)) --hi;
        while (inside(c, hi + 1)) ++hi;
        if (hi < lo) continue;
        if (!coprime_only) {
            total += hi - lo + 1;
            if (c == 0 && lo <= 0 && 0 <= hi) --total;
        } else {
            for (std::int64_t d = lo; d <= hi; ++d)
                if (std::gcd(c, d) == 1) ++total;
        }
    }
    return total;
}

void check_lattice_args(std::complex<double> z2, double R) {
    if (!std::isfinite(z2.real()) || !(z2.imag() > 0.0) || !std::isfinite(z2.imag()))
        throw DomainError("lattice count: z2 must be finite with Im z2 > 0");
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("lattice count: radius must be > 0");
    if (R >= 1e6 * std::max(1.0, std::abs(z2))) throw FeasibilityError("lattice count: radius too large to enumerate");
}

double entry_slack(double center, double radius) { return 1e-9 * (1.0 + std::abs(center) + radius); }

// Integer range [lo, hi] of v with |v + L| * w <= r.
std::pair<std::int64_t, std::int64_t> entry_range(double L, double w, double r) {
    const double half = r / w;
    const double eps = entry_slack(L, half);
    const double lo = std::ceil(-L - half - eps);
    const double hi = std::floor(-L + half + eps);
    if (!(std::abs(lo) < 4e15) || !(std::abs(hi) < 4e15)) throw FeasibilityError("enumerate_gammas: entry range overflow");
    return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

struct Prefix {
    std::int64_t g, h, d, a, e, i;
    double S;  // squared norm of the sandwich entries fixed so far
};

struct Enumerator {
    H3Point z;
    double R;
    double B;
    double F;

    [[nodiscard]] double budget(double S) const { return std::min(B, std::sqrt(std::max(0.0, F - S))); }

    std::vector<Prefix> prefixes(bool m1_only) const {
        const double x1 = z.x1, x2 = z.x2, x3 = z.x3, y1 = z.y1, Y = z.y1 * z.y2;
        std::vector<Prefix> out;
        auto [g_lo, g_hi] = m1_only ? std::pair<std::int64_t, std::int64_t>{0, 0} : entry_range(0.0, Y, budget(0.0));
        for (std::int64_t g = g_lo; g <= g_hi; ++g) {
            const double gd = static_cast<double>(g);
            const double m31 = gd * Y;
            const double S1 = m31 * m31;
            auto [h_lo, h_hi] = m1_only ? std::pair<std::int64_t, std::int64_t>{0, 0} : entry_range(gd * x2, y1, budget(S1));
            for (std::int64_t h = h_lo; h <= h_hi; ++h) {
                const double hd = static_cast<double>(h);
                const double m32 = (hd + gd * x2) * y1;
                const double S2 = S1 + m32 * m32;
                auto [d_lo, d_hi] = m1_only ? std::pair<std::int64_t, std::int64_t>{0, 0}
                                            : entry_range(-gd * x1, z.y2, budget(S2));
                for (std::int64_t d = d_lo; d <= d_hi; ++d) {
                    const double dd = static_cast<double>(d);
                    const double m21 = (dd - gd * x1) * z.y2;
                    const double S3 = S2 + m21 * m21;
                    const double La = -dd * x2 + gd * x1 * x2 - gd * x3;
                    auto [a_lo, a_hi] = entry_range(La, 1.0, budget(S3));
                    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
                        const double m11 = static_cast<double>(a) + La;
                        const double S4 = S3 + m11 * m11;
                        const double Le = dd * x2 - (hd + gd * x2) * x1;
                        auto [e_lo, e_hi] = entry_range(Le, 1.0, budget(S4));
                        for (std::int64_t e = e_lo; e <= e_hi; ++e) {
                            const double m22 = static_cast<double>(e) + Le;
                            const double S5 = S4 + m22 * m22;
                            const double Li = hd * x1 + gd * x3;
                            auto [i_lo, i_hi] = entry_range(Li, 1.0, budget(S5));
                            for (std::int64_t i = i_lo; i <= i_hi; ++i) {
                                // Upper-triangular gamma: det = a e i.
                                if (g == 0 && h == 0 && d == 0 && std::abs(a * e * i) != 1) continue;
                                const double m33 = static_cast<double>(i) + Li;
                                out.push_back({g, h, d, a, e, i, S5 + m33 * m33});
                            }
                        }
                    }
                }
            }
        }
        return out;
    }

    void complete(const Prefix& p, std::vector<IntMatrix3>& out) const {
        const double x1 = z.x1, x2 = z.x2, x3 = z.x3, y1 = z.y1, y2 = z.y2, Y = z.y1 * z.y2;
        const std::int64_t g = p.g, h = p.h, d = p.d, a = p.a, e = p.e, i = p.i;
        const double gd = static_cast<double>(g), hd = static_cast<double>(h), dd = static_cast<double>(d),
                     ad = static_cast<double>(a), ed = static_cast<double>(e), id = static_cast<double>(i);
        const i128 minor_c = i128(d) * h - i128(e) * g;  // coefficient of c in det
        const double Lf = ed * x1 + dd * x3 - (id + hd * x1 + gd * x3) * x1;
        auto [f_lo, f_hi] = entry_range(Lf, 1.0 / y1, budget(p.S));
        for (std::int64_t f = f_lo; f <= f_hi; ++f) {
            const double fd = static_cast<double>(f);
            const i128 minor_b = i128(d) * i - i128(f) * g;
            const i128 part_a = i128(a) * (i128(e) * i - i128(f) * h);
            if (minor_c == 0 && minor_b == 0 && part_a != 1 && part_a != -1) continue;
            const double m23 = (fd + Lf) / y1;
            const double S6 = p.S + m23 * m23;
            const double Lb = (ad - ed + hd * x1 - dd * x2 + gd * x1 * x2) * x2 - (hd + gd * x2) * x3;
            auto [b_lo, b_hi] = entry_range(Lb, 1.0 / y2, budget(S6));
            for (std::int64_t b = b_lo; b <= b_hi; ++b) {
                const i128 rest = part_a - i128(b) * minor_b;
                if (minor_c == 0 && rest != 1 && rest != -1) continue;
                const double m12 = (static_cast<double>(b) + Lb) / y2;
                const double S7 = S6 + m12 * m12;
                const double Lc = static_cast<double>(b) * x1 - fd * x2 + (-ed + id + hd * x1) * x1 * x2 + ad * x3 -
                                  (id + hd * x1 + dd * x2 - gd * x1 * x2) * x3 - gd * x3 * x3;
                auto [c_lo, c_hi] = entry_range(Lc, 1.0 / Y, budget(S7));
                auto test = [&](std::int64_t c) {
                    const IntMatrix3 gamma = IntMatrix3::from_entries(a, b, c, d, e, f, g, h, i);
                    if (gamma.canonical_sign() != gamma) return;
                    if (cartan_norm(cartan_project(sandwich(z, gamma))) <= R) out.push_back(gamma);
                };
                if (minor_c != 0) {
                    // det = c * minor_c + rest must be +-1.
                    for (i128 target : {i128(-1), i128(1)}) {
                        const i128 num = target - rest;
                        if (num % minor_c != 0) continue;
                        const auto c = static_cast<std::int64_t>(num / minor_c);
                        if (c >= c_lo && c <= c_hi) test(c);
                    }
                } else {
                    for (std::int64_t c = c_lo; c <= c_hi; ++c) test(c);
                }
            }
        }
    }
};

std::vector<IntMatrix3> enumerate_impl(const H3Point& z, double R, bool m1_only, unsigned threads) {
    Enumerator en{z, R, cartan_ball_entry_bound(R) * (1.0 + 1e-12), cartan_ball_frobenius_sq(R)};
    const double r = en.budget(0.0);
    const double Y = z.y1 * z.y2;
    const double outer = m1_only ? 1.0 : (2 * r / Y + 1) * (2 * r / z.y1 + 1) * (2 * r / z.y2 + 1);
    const double estimate = outer * 8.0 * (2 * r * z.y1 + 1) * (2 * r * z.y2 + 1) * (2 * r * Y + 1);
    if (!(estimate <= 1e9)) throw FeasibilityError("enumerate_gammas: search box too large (estimated " +
                                                   std::to_string(estimate) + " candidates)");
    const auto pre = en.prefixes(m1_only);
    std::vector<std::vector<IntMatrix3>> parts(pre.size());
    parallel_for(pre.size(), threads, [&](std::size_t k) { en.complete(pre[k], parts[k]); });
    std::vector<IntMatrix3> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

void check_siegel(const H3Point& z, const char* who) {
    z.validate();
    if (!in_siegel_set(z)) throw DomainError(std::string(who) + ": point must lie in the Siegel set");
}

}  // namespace

std::int64_t lattice_disk_count(std::complex<double> z2, double R, bool coprime_only) {
    check_lattice_args(z2, R);
    return count_ball(z2, R, false, coprime_only);
}

std::int64_t lattice_annulus_count(std::complex<double> z2, double r_lo, double r_hi, bool coprime_only) {
    check_lattice_args(z2, r_hi);
    if (!(r_lo >= 0.0) || !(r_lo <= r_hi)) throw DomainError("lattice_annulus_count: need 0 <= r_lo <= r_hi");
    return count_ball(z2, r_hi, true, coprime_only) - count_ball(z2, r_lo, true, coprime_only);
}

VerificationReport verify_lattice_shells(std::span<const std::complex<double>> z2s, int max_m, bool coprime_only,
                                         double ceiling) {
    VerificationReport rep;
    rep.name = "lattice-shells";
    rep.columns = {"x2", "y2", "m", "count", "envelope", "ratio"};
    double worst = 0.0;
    for (const auto& z2 : z2s)
        for (int m = -1; m <= max_m; ++m) {
            const double lo = std::ldexp(1.0, m), hi = std::ldexp(1.0, m + 1);
            const auto n = lattice_annulus_count(z2, lo, hi, coprime_only);
            const double env = lo + lo * lo / z2.imag();
            const double ratio = static_cast<double>(n) / env;
            worst = std::max(worst, ratio);
            rep.rows.push_back({z2.real(), z2.imag(), static_cast<double>(m), static_cast<double>(n), env, ratio});
        }
    rep.stats = {{"fitted_C", worst}, {"points", static_cast<double>(rep.rows.size())}, {"ceiling", ceiling}};
    rep.pass = worst <= ceiling;
    std::ostringstream msg;
    msg << "fitted C = " << worst;
    rep.message = msg.str();
    return rep;
}

double cartan_ball_entry_bound(double R) { return std::exp(std::sqrt(2.0 / 3.0) * R); }

double cartan_ball_frobenius_sq(double R) {
    // sum exp(2 a_j) is convex in a, so its maximum over the disk is on the circle |a| = R.
    constexpr int n = 7200;
    const double u[3] = {1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0.0};
    const double v[3] = {1 / std::sqrt(6.0), 1 / std::sqrt(6.0), -2 / std::sqrt(6.0)};
    double best = 3.0;
    for (int k = 0; k < n; ++k) {
        const double phi = 2.0 * M_PI * k / n;
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += std::exp(2.0 * R * (std::cos(phi) * u[j] + std::sin(phi) * v[j]));
        best = std::max(best, s);
    }
    // Grid error: |d/dphi log s| <= 2 R sqrt(2/3).
    return best * std::exp(2.0 * R * std::sqrt(2.0 / 3.0) * M_PI / n) * (1.0 + 1e-12);
}

std::vector<IntMatrix3> enumerate_gammas(const H3Point& z, double R, unsigned threads) {
    check_siegel(z, "enumerate_gammas");
    if (!(R > 0.0) || R > 3.0) throw DomainError("enumerate_gammas: R must lie in (0, 3]");
    return enumerate_impl(z, R, false, threads);
}

MClass classify_m(const IntMatrix3& gamma) {
    const auto g = gamma.g(), h = gamma.h(), d = gamma.d();
    if (g != 0 || (h != 0 && d != 0)) return MClass::M4;
    if (h == 0 && d == 0) return MClass::M1;
    return h != 0 ? MClass::M2 : MClass::M3;
}

bool satisfies_entry_bounds(const IntMatrix3& gamma, const H3Point& z, double R, double C) {
    const double s = C * std::exp(R);
    const double Y = z.y1 * z.y2;
    auto ok = [](std::int64_t v, double bound) { return std::abs(static_cast<double>(v)) <= bound; };
    return ok(gamma.g(), s / Y) && ok(gamma.h(), s / z.y1) && ok(gamma.d(), s / z.y2) && ok(gamma.a(), s) &&
           ok(gamma.e(), s) && ok(gamma.i(), s) && ok(gamma.f(), s * z.y1) && ok(gamma.b(), s * z.y2) &&
           ok(gamma.c(), s * Y);
}

ShellCount m1_shell_count(const H3Point& z, double K, unsigned threads) {
    check_siegel(z, "m1_shell_count");
    if (!(K > 0.0) || K > 2.0) throw DomainError("m1_shell_count: K must lie in (0, 2]");
    ShellCount r;
    for (const auto& gamma : enumerate_impl(z, 2.0 * K, true, threads)) {
        const double n = cartan_norm(cartan_project(sandwich(z, gamma)));
        if (n >= K && n < 2.0 * K) ++r.count;
    }
    r.envelope = (1 + z.y1 * K) * (1 + z.y2 * K) * (1 + z.y1 * z.y2 * K);
    return r;
}

void WeightModel::validate() const {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw DomainError("WeightModel: lambda must be finite and >= 1");
}

double WeightModel::weight(double cartan_norm) const {
    return std::pow(lambda, 1.5) / std::sqrt(1.0 + std::sqrt(lambda) * cartan_norm);
}

PretraceResult pretrace_weight_sum(const H3Point& z, const WeightModel& model, double R, unsigned threads) {
    model.validate();
    const auto gammas = enumerate_gammas(z, R, threads);
    CompensatedSum total;
    std::array<CompensatedSum, 4> parts;
    PretraceResult r;
    for (const auto& gamma : gammas) {
        const double w = model.weight(cartan_norm(cartan_project(sandwich(z, gamma))));
        const auto k = static_cast<std::size_t>(classify_m(gamma)) - 1;
        total.add(w);
        parts[k].add(w);
        ++r.counts[k];
    }
    r.total = total.value();
    for (std::size_t k = 0; k < 4; ++k) r.by_class[k] = parts[k].value();
    return r;
}

void write_matrix_list(std::ostream& os, std::span<const IntMatrix3> gammas) {
    for (const auto& g : gammas) os << format_matrix(g) << '\n';
}

}  // namespace gl3sup
