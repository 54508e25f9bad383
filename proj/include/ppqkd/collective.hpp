// The constrained collective attack: Eve entangles a four-dimensional probe
// with the channel qubit on its way back from Bob to Alice, then measures the
// probe only after the public discussion. Her unitary is pinned down by two
// angles (a, b); the fidelity F follows from the constraint that the check
// subsequence looks statistically clean. Eve's best guess probability is the
// Helstrom bound 1/2 + ||rho0 - rho1||_t / 2.

#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "ppqkd/protocol.hpp"
#include "ppqkd/qmath.hpp"

namespace ppqkd {

// (a, b, F) with F bound to a and b through
//   cos b (1 - F) = -1 + 2F - F cos a.
// Construct through make_collective_params so the invariant always holds.
struct CollectiveParams {
    double a = 0.0;
    double b = 0.0;
    double fidelity = 1.0;
};

// F = (1 + cos b) / (2 + cos b - cos a), the unique algebraic solution of the
// constraint. nullopt when the denominator vanishes (the a=0, b=pi corner) or
// the value falls outside [0,1] beyond rounding slack.
std::optional<double> fidelity_from_ab(double a, double b);

std::optional<CollectiveParams> make_collective_params(double a, double b);

// Eve's probe responses: unit vectors with <alpha|gamma> = <beta|delta> =
// <alpha|beta> = <gamma|delta> = 0 by construction.
struct ProbeBasis {
    StateVector alpha, beta, gamma, delta;
};

ProbeBasis probe_basis(const CollectiveParams& p);

// Sub-normalized probe state left with Eve when Bob measured `axis` with
// outcome `bob` and Alice detected r_{r_index}; built from the explicit
// coefficient expansion over the probe basis. axis must be X or Z.
StateVector probe_state(Axis axis, Outcome bob, int r_index, const CollectiveParams& p);

// Squared norm of the probe state, i.e. the joint weight of the
// (axis, outcome, detection) event given Bob's axis. Collapses to (1+F)/8 for
// table-consistent labels and (1-F)/8 otherwise.
double k_value(Axis axis, Outcome bob, int r_index, const CollectiveParams& p);

// The two probe mixtures Eve must discriminate: rho0 collects the r1-labeled
// outer products, rho1 the r4-labeled ones. Each has trace 1/2.
std::pair<HermitianOperator, HermitianOperator> rho_pair(const CollectiveParams& p);

struct CollectiveReport {
    double a = 0.0;
    double b = 0.0;
    double fidelity = 0.0;
    double p_ab = 0.0;  // probability the check subsequence shows no anomaly, (1+F)/2
    double p_e = 0.0;   // Eve's optimal guess probability, in [1/2, 1]
};

std::optional<CollectiveReport> p_eve(double a, double b);

struct CollectiveCell {
    int n = 0, m = 0;
    double a = 0.0, b = 0.0;
    std::optional<CollectiveReport> report;  // nullopt marks an invalid cell
};

struct Fig4SliceRow {
    double a = 0.0;
    std::optional<double> fidelity;
    std::optional<double> p_e;
};

struct CollectiveSweep {
    int n_max = 0, m_max = 0;
    double step_a = 0.0, step_b = 0.0;
    std::vector<CollectiveCell> cells;  // row-major in (n, m), size (n_max+1)(m_max+1)
    std::size_t invalid_cells = 0;
    int argmax_n = 0, argmax_m = 0;  // lexicographic (n, m) tie-break
    double max_p_e = 0.0;
    std::vector<Fig4SliceRow> fig4_slice;  // p_e against F at b fixed to the argmax b
};

// Evaluates p_eve on the grid a = n pi / n_max, b = m pi / m_max for
// n = 0..n_max, m = 0..m_max. Cells may be evaluated concurrently
// (PPQKD_WORKERS); results merge in deterministic (n, m) order.
CollectiveSweep sweep_collective(int n_max, int m_max);

}  // namespace ppqkd
