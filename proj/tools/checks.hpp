// Named invariant checks behind the `verify` subcommand. Each check exercises
// one module-level invariant and reports computed-vs-expected detail; the
// runner prints one PASS/FAIL line per check.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ppqkd::checks {

struct CheckResult {
    bool ok = false;
    std::string detail;  // computed vs expected summary
};

struct Check {
    std::string name;  // module/check_name
    std::function<CheckResult()> run;
};

std::vector<Check> all_checks();

}  // namespace ppqkd::checks
