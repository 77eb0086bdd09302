#pragma once

#include <map>
#include <string>
#include <vector>

namespace gl3sup {

/// Outcome of a numerical verification: per-point rows, named summary statistics, verdict.
struct VerificationReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, double> stats;
    bool pass = true;
    std::string message;
};

}  // namespace gl3sup
