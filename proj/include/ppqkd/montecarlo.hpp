// Sequential Born-rule sampling oracle. Each simulator walks a full protocol
// round on raw state vectors -- prepare, (attack,) measure, collapse, detect --
// without ever consulting the closed-form analysis modules, and tallies joint
// outcome counts against analytically expected cell probabilities. Identical
// (scenario, params, trials, seed) inputs produce bit-identical reports.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppqkd/collective.hpp"
#include "ppqkd/intercept.hpp"
#include "ppqkd/protocol.hpp"

namespace ppqkd {

enum class Scenario { honest, intercept_resend, collective };

const char* to_string(Scenario s);

// Joint outcome cell. eve is 0 where the scenario has no Eve outcome
// (honest and collective runs).
struct CellKey {
    Axis axis = Axis::X;
    int bob = +1;
    int eve = 0;
    int r_index = 1;

    friend bool operator<(const CellKey& l, const CellKey& r) {
        const auto tie = [](const CellKey& k) {
            return std::tuple<int, int, int, int>(static_cast<int>(k.axis), k.bob, k.eve, k.r_index);
        };
        return tie(l) < tie(r);
    }
};

// A named aggregate statistic (for example the conditional pass rate of the
// check subsequence) with its analytic expectation and deviation in sigma
// units, sigma = sqrt(p(1-p)/N) for the N rounds entering the aggregate.
struct NamedCheck {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double sigma_deviation = 0.0;
};

struct FrequencyReport {
    Scenario scenario = Scenario::honest;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::map<CellKey, std::uint64_t> counts;
    std::map<CellKey, double> expected;  // probabilities, summing to 1
    double max_sigma_deviation = 0.0;    // over cells with nonzero expectation
    std::uint64_t impossible_cell_hits = 0;  // samples landing on zero-probability cells
    std::uint64_t table1_violations = 0;     // honest scenario only; must stay 0
    std::vector<NamedCheck> named_checks;
};

// Eve measures the flying qubit in her xi basis, then Bob measures a uniform
// random X/Z axis, then Alice detects in the R basis.
FrequencyReport simulate_ir(const InterceptParams& p, std::uint64_t trials, std::uint64_t seed);

// Bob measures first; Eve's unitary entangles her fresh probe with the
// collapsed channel qubit on the way back; Alice detects in the R basis. The
// probe itself is never measured (Eve's guess probability is the analytic
// Helstrom bound, not a sampled quantity).
FrequencyReport simulate_collective(const CollectiveParams& p, std::uint64_t trials,
                                    std::uint64_t seed);

// Attack-free rounds; any deterministic-table violation is analytically
// impossible and aborts the run.
FrequencyReport simulate_honest(std::uint64_t trials, std::uint64_t seed);

}  // namespace ppqkd
