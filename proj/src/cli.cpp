#include "gl3sup/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gl3sup/cartan.hpp"
#include "gl3sup/counting.hpp"
#include "gl3sup/error.hpp"
#include "gl3sup/expansion.hpp"
#include "gl3sup/gl2special.hpp"
#include "gl3sup/h3geom.hpp"
#include "gl3sup/spectral.hpp"
#include "gl3sup/verify.hpp"
#include "gl3sup/whittaker3.hpp"

namespace gl3sup {

namespace {

using json = nlohmann::ordered_json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Globals {
    std::string format = "csv";
    std::string out_path;
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::optional<double> tol;

    [[nodiscard]] bool json_out() const { return format == "json"; }
    [[nodiscard]] BesselEvalConfig bessel() const {
        BesselEvalConfig c;
        if (tol) c.rel_tol = *tol;
        c.validate();
        return c;
    }
    [[nodiscard]] JwConfig jw() const {
        JwConfig c;
        c.bessel = bessel();
        if (tol) c.rel_tol = std::max(*tol, 1e-14);
        c.validate();
        return c;
    }
};

// A table of rows written as CSV (header first) or as a JSON array of objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write(std::ostream& os, bool as_json) const {
        if (as_json) {
            json arr = json::array();
            for (const auto& r : rows) {
                json o = json::object();
                for (std::size_t k = 0; k < columns.size(); ++k) {
                    const std::string& v = r[k];
                    char* end = nullptr;
                    const double d = std::strtod(v.c_str(), &end);
                    if (!v.empty() && end == v.c_str() + v.size() && std::isfinite(d))
                        o[columns[k]] = d;
                    else
                        o[columns[k]] = v;
                }
                arr.push_back(o);
            }
            os << arr.dump(2) << '\n';
            return;
        }
        for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
        os << '\n';
        for (const auto& r : rows) {
            for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
            os << '\n';
        }
    }
};

void write_report(std::ostream& os, const VerificationReport& rep, bool as_json) {
    if (as_json) {
        json j;
        j["name"] = rep.name;
        j["pass"] = rep.pass;
        j["message"] = rep.message;
        j["stats"] = rep.stats;
        j["columns"] = rep.columns;
        j["rows"] = rep.rows;
        os << j.dump(2) << '\n';
        return;
    }
    Table t;
    t.columns = rep.columns;
    for (const auto& r : rep.rows) {
        std::vector<std::string> cells;
        for (double v : r) cells.push_back(num(v));
        t.rows.push_back(cells);
    }
    t.write(os, false);
    for (const auto& [k, v] : rep.stats) os << "# " << k << " = " << num(v) << '\n';
    os << "# " << (rep.pass ? "PASS" : "FAIL") << ": " << rep.name << ": " << rep.message << '\n';
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ParseError("expected a comma-separated list of numbers, got '" + text + "'");
        }
        if (used != item.size() || !std::isfinite(v))
            throw ParseError("expected a comma-separated list of numbers, got '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ParseError("empty list");
    return out;
}

const std::vector<H3Point>& count_grid() {
    static const std::vector<H3Point> g{{0, 0, 0, 1, 1}, {0, 0, 0, 2, 1}, {0, 0, 0, 3, 5}};
    return g;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out_default, std::ostream& err) {
    CLI::App app{"Numerical companion for sup-norm bounds of GL(3) Hecke-Maass cusp forms"};
    app.require_subcommand(1);
    Globals G;
    app.add_option("--format", G.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", G.out_path, "Write output to this file instead of stdout");
    app.add_option("--threads", G.threads, "Worker threads (0 = hardware concurrency)");
    app.add_option("--seed", G.seed, "Seed for sampled quantities");
    app.add_option("--tol", G.tol, "Relative quadrature tolerance override")->check(CLI::Range(1e-15, 1e-3));

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate K_{it}(x), W_{it}(x) or the GL(3) Whittaker function");
    std::string target;
    std::optional<double> t, x, t1, t2, y1, y2;
    double ex1 = 0, ex2 = 0, ex3 = 0;
    int sign = 1;
    eval->add_option("target", target, "kbessel | gl2w | jw3")->required()->check(CLI::IsMember({"kbessel", "gl2w", "jw3"}));
    eval->add_option("--t", t, "Order t (kbessel, gl2w)");
    eval->add_option("--x", x, "Argument x (kbessel, gl2w)");
    eval->add_option("--t1", t1, "Spectral parameter t1 (jw3)");
    eval->add_option("--t2", t2, "Spectral parameter t2 (jw3)");
    eval->add_option("--y1", y1, "Height y1 (jw3)");
    eval->add_option("--y2", y2, "Height y2 (jw3)");
    eval->add_option("--x1", ex1, "Unipotent coordinate x1 (jw3)");
    eval->add_option("--x2", ex2, "Unipotent coordinate x2 (jw3)");
    eval->add_option("--x3", ex3, "Unipotent coordinate x3 (jw3)");
    eval->add_option("--sign", sign, "Sign of the phase (jw3)")->check(CLI::IsMember({-1, 1}));

    // verify
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    std::int64_t samples = 10000;
    double radius = 1.0;
    std::optional<double> ceiling;
    double A = 3.0;
    verify
        ->add_option("suite", suite,
                     "lemma41 | lemma42 | cartan | eighth | entry-bounds | m1-count | pretrace | envelope-3940 | bump | "
                     "sandwich | duality")
        ->required()
        ->check(CLI::IsMember({"lemma41", "lemma42", "cartan", "eighth", "entry-bounds", "m1-count", "pretrace",
                               "envelope-3940", "bump", "sandwich", "duality"}));
    verify->add_option("--samples", samples, "Sample count (cartan, sandwich)")->check(CLI::PositiveNumber);
    verify->add_option("--radius", radius, "Radius (cartan, entry-bounds, pretrace)")->check(CLI::PositiveNumber);
    verify->add_option("--ceiling", ceiling, "Pass/fail threshold overriding the suite default");
    verify->add_option("--A", A, "Decay exponent A (lemma41, lemma42)")->check(CLI::PositiveNumber);

    // scan
    auto* scan = app.add_subcommand("scan", "Evaluate the truncated Fourier-Whittaker expansion over a grid");
    std::string source = "delta", coeff_path;
    double st1 = 1.0, st2 = 1.0, sx1 = 0.0, sx2 = 0.0, sx3 = 0.0;
    std::string sy1 = "1", sy2 = "1";
    std::int64_t syn_cutoff = 100, syn_primes = 100;
    std::optional<double> pair_radius, coeff_cutoff;
    double eps = 1e-6;
    scan->add_option("--source", source, "delta | synthetic | file")->check(CLI::IsMember({"delta", "synthetic", "file"}));
    scan->add_option("--coeffs", coeff_path, "Coefficient CSV (source = file)");
    scan->add_option("--cutoff", syn_cutoff, "Synthetic table cutoff m1^2 m2 <= M")->check(CLI::PositiveNumber);
    scan->add_option("--primes", syn_primes, "Synthetic Satake parameters for primes up to this bound");
    scan->add_option("--t1", st1, "Spectral parameter t1")->check(CLI::NonNegativeNumber);
    scan->add_option("--t2", st2, "Spectral parameter t2")->check(CLI::NonNegativeNumber);
    scan->add_option("--x1", sx1, "x1 for every grid point");
    scan->add_option("--x2", sx2, "x2 for every grid point");
    scan->add_option("--x3", sx3, "x3 for every grid point");
    scan->add_option("--y1", sy1, "Comma-separated y1 values");
    scan->add_option("--y2", sy2, "Comma-separated y2 values");
    scan->add_option("--pair-radius", pair_radius, "Truncation |c z2 + d| <= R");
    scan->add_option("--coeff-cutoff", coeff_cutoff, "Truncation m1^2 m2 <= M");
    scan->add_option("--epsilon", eps, "epsilon in the envelope columns")->check(CLI::PositiveNumber);

    // count
    auto* count = app.add_subcommand("count", "Enumerate pre-trace matrices and classify them");
    std::string cpoint;
    double cradius = 1.0;
    bool list = false;
    count->add_option("--point", cpoint, "x1,x2,x3,y1,y2 in the Siegel set")->required();
    count->add_option("--radius", cradius, "Cartan-norm radius R <= 3")->check(CLI::PositiveNumber);
    count->add_flag("--list", list, "Also print the matrices");

    // reduce
    auto* reduce = app.add_subcommand("reduce", "Move a point into the Siegel set");
    std::string rpoint;
    reduce->add_option("--point", rpoint, "x1,x2,x3,y1,y2")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out_default, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    std::ofstream file;
    if (!G.out_path.empty()) {
        file.open(G.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open output file '" << G.out_path << "'\n";
            return kExitInput;
        }
    }
    std::ostream& out = G.out_path.empty() ? out_default : file;
    std::ostringstream buf;  // written only on success so failures leave no partial output

    try {
        int code = kExitOk;
        if (*eval) {
            Table tb;
            if (target == "jw3") {
                if (!t1 || !t2 || !y1 || !y2) throw DomainError("eval jw3 requires --t1 --t2 --y1 --y2");
                const SpectralTriple nu(*t1, *t2);
                const H3Point z{ex1, ex2, ex3, *y1, *y2};
                const auto v = jw_full(nu, z, sign, G.jw());
                tb.columns = {"t1", "t2", "x1", "x2", "x3", "y1", "y2", "re", "im", "abs"};
                tb.rows.push_back({num(*t1), num(*t2), num(ex1), num(ex2), num(ex3), num(*y1), num(*y2), num(v.real()),
                                   num(v.imag()), num(std::abs(v))});
            } else {
                if (!t || !x) throw DomainError("eval " + target + " requires --t and --x");
                if (target == "kbessel") {
                    const auto v = k_bessel_imag_scaled(*t, *x, G.bessel());
                    tb.columns = {"t", "x", "value", "log_abs"};
                    tb.rows.push_back({num(*t), num(*x), num(v.to_double()), num(v.is_zero() ? -HUGE_VAL : v.log_abs())});
                } else {
                    const double v = gl2_whittaker(*t, *x, G.bessel());
                    tb.columns = {"t", "x", "value"};
                    tb.rows.push_back({num(*t), num(*x), num(v)});
                }
            }
            tb.write(buf, G.json_out());
        } else if (*verify) {
            VerificationReport rep;
            if (suite == "lemma41") {
                rep = verify_lemma41({2, 10, 40}, {0, 0.5, 1, 4}, A, ceiling.value_or(50.0), 3.0, G.bessel(), G.threads);
            } else if (suite == "lemma42") {
                rep = verify_lemma42_grid({2, 7, 31}, {0.5, 1, 2, 4, 8, 16}, A, ceiling.value_or(100.0), 3.0, G.jw(),
                                          G.threads);
            } else if (suite == "cartan") {
                if (radius > 1.0) throw DomainError("verify cartan: --radius must be <= 1");
                rep = verify_cartan_lemma(samples, radius, G.seed, G.threads);
            } else if (suite == "eighth") {
                rep = verify_eighth({0, 1, 5, 20}, ceiling.value_or(1e-5), G.bessel(), G.threads);
            } else if (suite == "entry-bounds") {
                auto pts = count_grid();
                pts.push_back({0.3, -0.2, 0.45, 1.1, 0.9});
                rep = verify_entry_bounds(pts, radius, ceiling.value_or(10.0), 3, G.threads);
            } else if (suite == "m1-count") {
                rep = verify_m1_count(count_grid(), {0.25, 0.5, 1.0}, ceiling.value_or(64.0),
                                      {{0, 0, 0, 5.3, 5.3}, {0.2, -0.3, 0.1, 28, 1}}, 1.0, G.threads);
            } else if (suite == "pretrace") {
                rep = verify_pretrace(count_grid(), {1e2, 1e4}, radius, ceiling.value_or(3.0), G.threads);
            } else if (suite == "envelope-3940") {
                rep = verify_envelope_3940({1e2, 1e3, 1e4, 1e5, 1e6}, EnvelopeParams{}, ceiling.value_or(0.01));
            } else if (suite == "bump") {
                rep = verify_bump({20, 50, 100}, 0.05, ceiling.value_or(20.0), G.bessel());
            } else if (suite == "sandwich") {
                rep = verify_sandwich(static_cast<int>(std::min<std::int64_t>(samples, 1'000'000)), G.seed,
                                      ceiling.value_or(1e-12));
            } else {
                FourierConfig fc;
                fc.jw = G.jw();
                fc.threads = G.threads;
                rep = verify_duality({{0.1, 0.2, 0.3, 3, 3}, {-0.3, 0.45, 0.1, 4, 3.5}, {0.15, -0.1, -0.4, 6, 3},
                                      {0.4, 0.05, 0.2, 3, 6}, {-0.2, -0.35, 0.0, 5, 5}},
                                     SpectralTriple(1, 1), ceiling.value_or(1e-6), fc);
            }
            write_report(buf, rep, G.json_out());
            if (!rep.pass) {
                err << "verification failed: " << rep.name << ": " << rep.message << '\n';
                code = kExitVerifyFail;
            }
        } else if (*scan) {
            CoefficientTable table;
            if (source == "delta") {
                table = delta_coefficients();
            } else if (source == "synthetic") {
                table = synthetic_coefficients(G.seed, syn_primes, syn_cutoff);
            } else {
                if (coeff_path.empty()) throw DomainError("scan --source file requires --coeffs");
                table = load_coefficients(coeff_path);
            }
            const SpectralTriple nu(st1, st2);
            const double lambda = laplace_eigenvalue(nu);
            EnvelopeParams ep;
            ep.epsilon = eps;
            FourierConfig fc;
            fc.jw = G.jw();
            fc.threads = G.threads;
            fc.pair_radius = pair_radius;
            fc.coeff_cutoff = coeff_cutoff;
            Table tb;
            tb.columns = {"x1", "x2", "x3", "y1", "y2", "re", "im", "abs", "envelope2", "envelope3"};
            for (double a : parse_list(sy1))
                for (double b : parse_list(sy2)) {
                    const H3Point z{sx1, sx2, sx3, a, b};
                    const auto s = fourier_whittaker_sum(z, nu, table, fc);
                    tb.rows.push_back({num(sx1), num(sx2), num(sx3), num(a), num(b), num(s.value.real()),
                                       num(s.value.imag()), num(std::abs(s.value)), num(theorem2_envelope(lambda, a, b, ep)),
                                       num(theorem3_envelope(lambda, a, b, ep))});
                }
            tb.write(buf, G.json_out());
        } else if (*count) {
            const H3Point z = parse_point(cpoint);
            const auto gs = enumerate_gammas(z, cradius, G.threads);
            std::array<std::int64_t, 4> n{};
            for (const auto& g : gs) ++n[static_cast<std::size_t>(classify_m(g)) - 1];
            if (G.json_out()) {
                json j;
                j["point"] = format_point(z);
                j["radius"] = cradius;
                j["totals"] = {{"M1", n[0]}, {"M2", n[1]}, {"M3", n[2]}, {"M4", n[3]}};
                j["total"] = gs.size();
                if (list) {
                    j["matrices"] = json::array();
                    for (const auto& g : gs) j["matrices"].push_back(g.m);
                }
                buf << j.dump(2) << '\n';
            } else {
                buf << "M1:" << n[0] << " M2:" << n[1] << " M3:" << n[2] << " M4:" << n[3] << '\n';
                buf << "total:" << gs.size() << '\n';
                if (list) write_matrix_list(buf, gs);
            }
        } else if (*reduce) {
            const H3Point z = parse_point(rpoint);
            const auto r = siegel_reduce(z);
            Table tb;
            tb.columns = {"x1", "x2", "x3", "y1", "y2", "gamma", "steps"};
            tb.rows.push_back({num(r.point.x1), num(r.point.x2), num(r.point.x3), num(r.point.y1), num(r.point.y2),
                               format_matrix(r.gamma), std::to_string(r.steps)});
            tb.write(buf, G.json_out());
        }
        out << buf.str();
        out.flush();
        return code;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InvalidPair& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const SingularMatrix& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const FeasibilityError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NormalizationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace gl3sup
