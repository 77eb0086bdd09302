#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "gl3sup/cli.hpp"

using namespace gl3sup;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gl3sup");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("count prints class totals") {
        const auto r = cli({"count", "--point", "0,0,0,1,1", "--radius", "0.05"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("M1:4 M2:4 M3:4 M4:12\n", 0) == 0);
        const auto j = cli({"--format", "json", "count", "--point", "0,0,0,1,1", "--radius", "0.05", "--list"});
        const auto parsed = nlohmann::json::parse(j.out);
        CHECK(parsed["total"] == 24);
        CHECK(parsed["matrices"].size() == 24);
    }

    TEST_CASE("reduce reports the point and gamma") {
        const auto r = cli({"reduce", "--point", "0,0,0,0.1,0.1"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("x1,x2,x3,y1,y2,gamma,steps\n", 0) == 0);
    }

    TEST_CASE("eval") {
        const auto k = cli({"eval", "kbessel", "--t", "0", "--x", "1"});
        CHECK(k.code == 0);
        CHECK(k.out.find("0.42102443824070") != std::string::npos);
        const auto j = cli({"--format", "json", "eval", "jw3", "--t1", "1", "--t2", "1", "--y1", "1", "--y2", "1"});
        CHECK(j.code == 0);
        CHECK(nlohmann::json::parse(j.out)[0]["abs"].get<double>() > 0.0);
    }

    TEST_CASE("input errors exit with 2") {
        CHECK(cli({"eval", "kbessel", "--t", "1"}).code == 2);
        CHECK(cli({"eval", "kbessel", "--t", "1", "--x", "-1"}).code == 2);
        CHECK(cli({"count", "--point", "0,0,0,1"}).code == 2);
        CHECK(cli({"count", "--point", "0.9,0,0,1,1"}).code == 2);
        CHECK(cli({"verify", "nonsense"}).code == 2);
        CHECK(cli({"scan", "--source", "file"}).code == 2);
        CHECK(cli({"scan", "--source", "file", "--coeffs", "/nonexistent.csv"}).code == 2);
        CHECK(cli({"--format", "xml", "reduce", "--point", "0,0,0,1,1"}).code == 2);
        CHECK(cli({}).code == 2);
    }

    TEST_CASE("help exits with 0") { CHECK(cli({"--help"}).code == 0); }

    TEST_CASE("verify exit status follows the verdict") {
        const auto pass = cli({"verify", "bump"});
        CHECK(pass.code == 0);
        CHECK(pass.out.find("# PASS: bump") != std::string::npos);
        const auto fail = cli({"verify", "bump", "--ceiling", "0.1"});
        CHECK(fail.code == 1);
        CHECK(fail.out.find("# FAIL: bump") != std::string::npos);
        const auto j = cli({"--format", "json", "verify", "sandwich", "--samples", "20"});
        CHECK(nlohmann::json::parse(j.out)["pass"] == true);
    }

    TEST_CASE("scan columns") {
        const auto r = cli({"scan", "--t1", "1", "--t2", "1", "--y1", "3", "--y2", "3,4", "--x1", "0.1"});
        CHECK(r.code == 0);
        std::istringstream is(r.out);
        std::string line;
        std::getline(is, line);
        CHECK(line == "x1,x2,x3,y1,y2,re,im,abs,envelope2,envelope3");
        int rows = 0;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == 2);
    }
}
