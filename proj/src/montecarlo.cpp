#include "ppqkd/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "ppqkd/rng.hpp"

namespace ppqkd {

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::honest: return "honest";
        case Scenario::intercept_resend: return "ir";
        case Scenario::collective: return "collective";
    }
    return "?";
}

namespace {

struct SimFixtures {
    StateVector psi = initial_state();
    RBasis basis = r_basis();
    Table1 table = table1();
    std::array<ComplexMatrix, 2> bob_x{
        lift_to_channel(pauli_projector(Axis::X, Outcome::plus)).matrix(),
        lift_to_channel(pauli_projector(Axis::X, Outcome::minus)).matrix()};
    std::array<ComplexMatrix, 2> bob_z{
        lift_to_channel(pauli_projector(Axis::Z, Outcome::plus)).matrix(),
        lift_to_channel(pauli_projector(Axis::Z, Outcome::minus)).matrix()};

    const ComplexMatrix& bob_projector(Axis axis, Outcome o) const {
        const std::size_t slot = (o == Outcome::plus) ? 0 : 1;
        return axis == Axis::X ? bob_x[slot] : bob_z[slot];
    }
};

Outcome outcome_from_int(int v) { return v > 0 ? Outcome::plus : Outcome::minus; }

// Deviation of an observed count from a binomial(trials, p) expectation, in
// sigma units. Zero-probability cells are handled by the caller.
double cell_sigma(std::uint64_t count, std::uint64_t trials, double p) {
    const double sigma = std::sqrt(p * (1.0 - p) * static_cast<double>(trials));
    if (sigma == 0.0) return 0.0;
    return std::abs(static_cast<double>(count) - p * static_cast<double>(trials)) / sigma;
}

void finalize_cell_statistics(FrequencyReport& report) {
    report.max_sigma_deviation = 0.0;
    report.impossible_cell_hits = 0;
    for (const auto& [key, p] : report.expected) {
        const auto it = report.counts.find(key);
        const std::uint64_t count = (it == report.counts.end()) ? 0 : it->second;
        if (p <= 0.0) {
            report.impossible_cell_hits += count;
            continue;
        }
        report.max_sigma_deviation =
            std::max(report.max_sigma_deviation, cell_sigma(count, report.trials, p));
    }
}

// Conditional rate check: `hits` successes out of `base` conditioning rounds
// against expected rate p.
NamedCheck rate_check(std::string name, std::uint64_t hits, std::uint64_t base, double p) {
    NamedCheck check;
    check.name = std::move(name);
    check.expected = p;
    if (base == 0) return check;
    check.observed = static_cast<double>(hits) / static_cast<double>(base);
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(base));
    check.sigma_deviation = sigma == 0.0 ? 0.0 : std::abs(check.observed - p) / sigma;
    return check;
}

bool is_consistent(const Table1& table, Axis axis, Outcome bob, int r_index) {
    return table.outcome(r_index, axis) == bob;
}

}  // namespace

FrequencyReport simulate_honest(std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_honest: trials must be >= 1");
    const SimFixtures fx;
    SeededRng rng(seed);

    FrequencyReport report;
    report.scenario = Scenario::honest;
    report.trials = trials;
    report.seed = seed;

    for (Axis axis : {Axis::X, Axis::Z}) {
        for (int bob : {+1, -1}) {
            const StateVector collapsed =
                apply(fx.bob_projector(axis, outcome_from_int(bob)), fx.psi).normalized();
            for (int r = 1; r <= 4; ++r) {
                const double p_r = std::norm(inner_product(fx.basis.r(r), collapsed));
                report.expected[CellKey{axis, bob, 0, r}] = 0.5 * 0.5 * p_r;
            }
        }
    }

    std::array<std::uint64_t, 4> r_counts{};
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Axis axis = rng.bernoulli(0.5) ? Axis::X : Axis::Z;
        const StateVector branch = apply(fx.bob_projector(axis, Outcome::plus), fx.psi);
        const Outcome bob = rng.bernoulli(branch.norm_sq()) ? Outcome::plus : Outcome::minus;
        const StateVector collapsed = (bob == Outcome::plus)
                                          ? branch.normalized()
                                          : apply(fx.bob_projector(axis, Outcome::minus), fx.psi)
                                                .normalized();
        std::array<double, 4> weights{};
        for (int r = 1; r <= 4; ++r) {
            weights[static_cast<std::size_t>(r - 1)] =
                std::norm(inner_product(fx.basis.r(r), collapsed));
        }
        const int detection = rng.pick(weights) + 1;
        if (!is_consistent(fx.table, axis, bob, detection)) {
            ++report.table1_violations;
            throw std::logic_error("simulate_honest: deterministic-table violation sampled");
        }
        ++report.counts[CellKey{axis, value(bob), 0, detection}];
        ++r_counts[static_cast<std::size_t>(detection - 1)];
    }

    finalize_cell_statistics(report);
    for (int r = 1; r <= 4; ++r) {
        report.named_checks.push_back(rate_check("r" + std::to_string(r) + "_frequency",
                                                 r_counts[static_cast<std::size_t>(r - 1)], trials,
                                                 0.25));
    }
    return report;
}

FrequencyReport simulate_ir(const InterceptParams& p, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_ir: trials must be >= 1");
    const SimFixtures fx;
    SeededRng rng(seed);

    FrequencyReport report;
    report.scenario = Scenario::intercept_resend;
    report.trials = trials;
    report.seed = seed;

    const std::array<ComplexMatrix, 2> eve_proj{
        lift_to_channel(xi_projector(p, Outcome::plus)).matrix(),
        lift_to_channel(xi_projector(p, Outcome::minus)).matrix()};

    for (Axis axis : {Axis::X, Axis::Z}) {
        for (int bob : {+1, -1}) {
            for (int eve : {+1, -1}) {
                for (int r = 1; r <= 4; ++r) {
                    const Complex amp = attack_amplitude(r, axis, outcome_from_int(bob),
                                                         outcome_from_int(eve), p);
                    report.expected[CellKey{axis, bob, eve, r}] = 0.5 * std::norm(amp);
                }
            }
        }
    }

    std::uint64_t s23_rounds = 0, s23_pass = 0, s14_rounds = 0, s14_agree = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const StateVector eve_branch = apply(eve_proj[0], fx.psi);
        const Outcome eve = rng.bernoulli(eve_branch.norm_sq()) ? Outcome::plus : Outcome::minus;
        const StateVector after_eve = (eve == Outcome::plus)
                                          ? eve_branch.normalized()
                                          : apply(eve_proj[1], fx.psi).normalized();

        const Axis axis = rng.bernoulli(0.5) ? Axis::X : Axis::Z;
        const StateVector bob_branch = apply(fx.bob_projector(axis, Outcome::plus), after_eve);
        const Outcome bob = rng.bernoulli(bob_branch.norm_sq()) ? Outcome::plus : Outcome::minus;
        const StateVector after_bob =
            (bob == Outcome::plus)
                ? bob_branch.normalized()
                : apply(fx.bob_projector(axis, Outcome::minus), after_eve).normalized();

        std::array<double, 4> weights{};
        for (int r = 1; r <= 4; ++r) {
            weights[static_cast<std::size_t>(r - 1)] =
                std::norm(inner_product(fx.basis.r(r), after_bob));
        }
        const int detection = rng.pick(weights) + 1;
        ++report.counts[CellKey{axis, value(bob), value(eve), detection}];

        if (detection == 2 || detection == 3) {
            ++s23_rounds;
            if (is_consistent(fx.table, axis, bob, detection)) ++s23_pass;
        } else {
            ++s14_rounds;
            // Eve reads her +1 outcome as the r1 key bit and -1 as the r4 bit.
            if ((detection == 1 && eve == Outcome::plus) ||
                (detection == 4 && eve == Outcome::minus)) {
                ++s14_agree;
            }
        }
    }

    finalize_cell_statistics(report);

    // Analytic aggregates from the same expected map the cells use.
    double exp_s23 = 0.0, exp_s23_pass = 0.0, exp_s14 = 0.0, exp_s14_agree = 0.0;
    for (const auto& [key, prob] : report.expected) {
        if (key.r_index == 2 || key.r_index == 3) {
            exp_s23 += prob;
            if (is_consistent(fx.table, key.axis, outcome_from_int(key.bob), key.r_index)) {
                exp_s23_pass += prob;
            }
        } else {
            exp_s14 += prob;
            if ((key.r_index == 1 && key.eve > 0) || (key.r_index == 4 && key.eve < 0)) {
                exp_s14_agree += prob;
            }
        }
    }
    report.named_checks.push_back(
        rate_check("s23_pass_rate", s23_pass, s23_rounds, exp_s23_pass / exp_s23));
    report.named_checks.push_back(
        rate_check("s14_eve_alice_agreement", s14_agree, s14_rounds, exp_s14_agree / exp_s14));
    return report;
}

FrequencyReport simulate_collective(const CollectiveParams& p, std::uint64_t trials,
                                    std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("simulate_collective: trials must be >= 1");
    const SimFixtures fx;
    SeededRng rng(seed);

    FrequencyReport report;
    report.scenario = Scenario::collective;
    report.trials = trials;
    report.seed = seed;

    for (Axis axis : {Axis::X, Axis::Z}) {
        for (int bob : {+1, -1}) {
            for (int r = 1; r <= 4; ++r) {
                report.expected[CellKey{axis, bob, 0, r}] =
                    0.5 * k_value(axis, outcome_from_int(bob), r, p);
            }
        }
    }

    // Raw ingredients of Eve's unitary: probe responses and branch weights.
    const ProbeBasis pb = probe_basis(p);
    const double sf = std::sqrt(p.fidelity);
    const double sg = std::sqrt(1.0 - p.fidelity);

    std::uint64_t s23_rounds = 0, s23_pass = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Axis axis = rng.bernoulli(0.5) ? Axis::X : Axis::Z;
        const StateVector branch = apply(fx.bob_projector(axis, Outcome::plus), fx.psi);
        const Outcome bob = rng.bernoulli(branch.norm_sq()) ? Outcome::plus : Outcome::minus;

        // Channel qubit collapsed by Bob's measurement.
        const double s2 = 1.0 / std::sqrt(2.0);
        std::array<Complex, 2> chan;
        if (axis == Axis::Z) {
            chan = (bob == Outcome::plus) ? std::array<Complex, 2>{Complex{1.0, 0.0}, Complex{0.0, 0.0}}
                                          : std::array<Complex, 2>{Complex{0.0, 0.0}, Complex{1.0, 0.0}};
        } else {
            chan = (bob == Outcome::plus)
                       ? std::array<Complex, 2>{Complex{s2, 0.0}, Complex{s2, 0.0}}
                       : std::array<Complex, 2>{Complex{s2, 0.0}, Complex{-s2, 0.0}};
        }
        // Alice's retained qubit given Bob's outcome: sqrt(2) <i_t|psi>.
        const std::array<Complex, 2> retained{std::conj(chan[0]), std::conj(chan[1])};

        // U (|chan> (x) |X>) = |0>(chan0 sqrtF a + chan1 sqrt(1-F) g)
        //                    + |1>(chan0 sqrt(1-F) b + chan1 sqrtF d)
        const StateVector w0 = (chan[0] * sf) * pb.alpha + (chan[1] * sg) * pb.gamma;
        const StateVector w1 = (chan[0] * sg) * pb.beta + (chan[1] * sf) * pb.delta;

        // P(r_j) = || sum_{a,c} conj(r_j[2a+c]) retained[a] w_c ||^2
        std::array<double, 4> weights{};
        for (int r = 1; r <= 4; ++r) {
            const StateVector& rv = fx.basis.r(r);
            StateVector probe = StateVector::zero(4);
            for (int a = 0; a < 2; ++a) {
                probe = probe + (std::conj(rv[2 * a + 0]) * retained[static_cast<std::size_t>(a)]) * w0;
                probe = probe + (std::conj(rv[2 * a + 1]) * retained[static_cast<std::size_t>(a)]) * w1;
            }
            weights[static_cast<std::size_t>(r - 1)] = probe.norm_sq();
        }
        const int detection = rng.pick(weights) + 1;
        ++report.counts[CellKey{axis, value(bob), 0, detection}];

        if (detection == 2 || detection == 3) {
            ++s23_rounds;
            if (is_consistent(fx.table, axis, bob, detection)) ++s23_pass;
        }
    }

    finalize_cell_statistics(report);

    double exp_s23 = 0.0, exp_s23_pass = 0.0;
    for (const auto& [key, prob] : report.expected) {
        if (key.r_index == 2 || key.r_index == 3) {
            exp_s23 += prob;
            if (is_consistent(fx.table, key.axis, outcome_from_int(key.bob), key.r_index)) {
                exp_s23_pass += prob;
            }
        }
    }
    report.named_checks.push_back(
        rate_check("s23_pass_rate", s23_pass, s23_rounds, exp_s23_pass / exp_s23));
    return report;
}

}  // namespace ppqkd
