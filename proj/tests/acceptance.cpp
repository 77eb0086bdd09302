// Acceptance runner: one PASS/FAIL line per criterion. Exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gl3sup/cartan.hpp"
#include "gl3sup/cli.hpp"
#include "gl3sup/expansion.hpp"
#include "gl3sup/verify.hpp"

using namespace gl3sup;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0 && secs > time_limit_s) {
        o.pass = false;
        o.detail += "; runtime over " + std::to_string(time_limit_s) + " s";
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

Outcome from(const VerificationReport& r) { return {r.pass, r.message}; }

std::string cli_output(std::vector<std::string> args, int& code) {
    args.insert(args.begin(), "gl3sup");
    std::ostringstream out, err;
    code = run_cli(args, out, err);
    return out.str();
}

const std::vector<H3Point> kCountGrid{{0, 0, 0, 1, 1}, {0, 0, 0, 2, 1}, {0, 0, 0, 3, 5}};

}  // namespace

int main() {
    run(1, "eighth identity", 10, [] { return from(verify_eighth({0, 1, 5, 20}, 1e-5)); });

    run(2, "GL(2) tail envelope", 60, [] { return from(verify_lemma41({2, 10, 40}, {0, 0.5, 1, 4}, 3.0, 50.0, 3.0)); });

    run(3, "GL(3) Whittaker envelope", 300,
        [] { return from(verify_lemma42_grid({2, 7, 31}, {0.5, 1, 2, 4, 8, 16}, 3.0, 100.0, 3.0)); });

    run(4, "Whittaker bump", 0, [] { return from(verify_bump({20, 50, 100}, 0.05, 20.0)); });

    run(5, "Cartan comparison", 5, [] { return from(verify_cartan_lemma(10000, 1.0, 1)); });

    run(6, "sandwich formula", 0, [] { return from(verify_sandwich(100, 1, 1e-12)); });

    run(7, "entry bounds", 0, [] {
        auto pts = kCountGrid;
        pts.push_back({0.3, -0.2, 0.45, 1.1, 0.9});
        return from(verify_entry_bounds(pts, 1.0, 10.0, 3));
    });

    run(8, "M1 shell count and empty M4", 0, [] {
        return from(verify_m1_count(kCountGrid, {0.25, 0.5, 1.0}, 64.0, {{0, 0, 0, 5.3, 5.3}, {0.2, -0.3, 0.1, 28, 1}}, 1.0));
    });

    run(9, "pre-trace weight sum", 0, [] { return from(verify_pretrace(kCountGrid, {1e2, 1e4}, 1.0, 3.0)); });

    run(10, "global envelope crossover", 1,
        [] { return from(verify_envelope_3940({1e2, 1e3, 1e4, 1e5, 1e6}, EnvelopeParams{}, 0.01)); });

    run(11, "duality", 0, [] {
        return from(verify_duality({{0.1, 0.2, 0.3, 3, 3},
                                    {-0.3, 0.45, 0.1, 4, 3.5},
                                    {0.15, -0.1, -0.4, 6, 3},
                                    {0.4, 0.05, 0.2, 3, 6},
                                    {-0.2, -0.35, 0.0, 5, 5}},
                                   SpectralTriple(1, 1), 1e-6));
    });

    run(12, "thread determinism", 0, [] {
        const std::vector<std::vector<std::string>> cmds{
            {"scan", "--source", "synthetic", "--t1", "1", "--t2", "2", "--x1", "0.1", "--x2", "-0.2", "--x3", "0.3",
             "--y1", "1,1.5", "--y2", "1", "--pair-radius", "2", "--coeff-cutoff", "12"},
            {"count", "--point", "0.1,-0.2,0.3,1.2,1.1", "--radius", "1", "--list"}};
        for (const auto& cmd : cmds) {
            std::string ref;
            for (const char* th : {"1", "2", "8"}) {
                std::vector<std::string> args{"--threads", th};
                args.insert(args.end(), cmd.begin(), cmd.end());
                int code = 0;
                const std::string s = cli_output(args, code);
                if (code != 0) return Outcome{false, cmd[0] + " exited with " + std::to_string(code)};
                if (ref.empty())
                    ref = s;
                else if (s != ref)
                    return Outcome{false, cmd[0] + " output differs at --threads " + th};
            }
        }
        return Outcome{true, "scan and count byte-identical at 1, 2, 8 threads"};
    });

    std::printf("%d failure(s)\n", failures);
    return failures;
}
