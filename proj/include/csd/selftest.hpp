#pragma once

#include <string>
#include <vector>

namespace csd {

struct SelfTestLine {
    std::string name;
    bool pass = false;
    std::string detail;  // measured residual / value, for the report
};

struct SelfTestReport {
    std::vector<SelfTestLine> lines;
    bool all_pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

/// Runs the invariant suite of every module at the given grid sizes with fixed
/// seeds. corrupt_gamma perturbs one gamma-matrix entry first (fault-injection
/// hook; the gamma-algebra check must then fail and be named in the report).
SelfTestReport selftest(const std::vector<int>& sizes = {32, 64}, bool corrupt_gamma = false);

std::string format_report(const SelfTestReport& rep);

}  // namespace csd
