// The intercept/resend attack: Eve projectively measures the channel qubit
// flying from Alice to Bob in an Euler-parameterized basis and forwards the
// collapsed state. This module carries both computation routes for the joint
// outcome weights -- the raw-amplitude path (authoritative) and the closed
// forms (regression oracle) -- plus the symmetric-strategy analysis and the
// sweep behind the detection/guess probability curves.

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ppqkd/protocol.hpp"
#include "ppqkd/qmath.hpp"

namespace ppqkd {

// Euler angles of Eve's measurement basis. gamma is carried for completeness
// but provably never reaches the projectors.
struct InterceptParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

// SU(2) Euler rotation  exp(-i a sz/2) exp(-i b sy/2) exp(-i g sz/2).
ComplexMatrix euler_unitary(const InterceptParams& p);

// Projector onto Eve's outcome: U diag(1,0) U^dagger resp. U diag(0,1)
// U^dagger, in closed form (gamma cancels).
HermitianOperator xi_projector(const InterceptParams& p, Outcome outcome);

// <r_j| P(sigma_axis = bob) P(sigma_xi = eve) |psi> with both projectors
// lifted to the channel qubit. axis must be X or Z.
Complex attack_amplitude(int r_index, Axis axis, Outcome bob, Outcome eve,
                         const InterceptParams& p);

// Joint outcome weights of the attack, grouped the way the analysis consumes
// them. f_k/g_k split the check detections r2/r3 by Bob's outcome (summed over
// Eve's); u_k/v_k split the key detections r1/r4 by Eve's outcome (summed over
// Bob's). Indices: 1 = r2|x, 2 = r2|z, 3 = r3|x, 4 = r3|z for f/g and
// 1 = r1|x, 2 = r1|z, 3 = r4|x, 4 = r4|z for u/v (0-based in the arrays).
struct FgUvTable {
    std::array<double, 4> f{}, g{}, u{}, v{};
};

// Amplitude path: every entry is a sum of squared attack amplitudes.
FgUvTable fg_uv_table(const InterceptParams& p);

// The printed closed forms of the same sixteen functions, e.g.
// f1 = (1/16)(cos^2 b + sin^2 a sin^2 b). Kept as the regression oracle for
// the amplitude path.
FgUvTable fg_uv_closed_form(double alpha, double beta);

enum class BetaBranch { plus, minus };

// The symmetric-strategy constraint cos^2 b = cos^2 a sin^2 b solved for
// beta: principal arctan(+-1/cos alpha), continued to pi/2 where cos alpha
// vanishes.
double symmetric_beta(double alpha, BetaBranch branch);

struct IrReport {
    double p1 = 0.0;  // probability the check subsequence shows no anomaly
    double p2 = 0.0;  // probability Eve's guess matches Alice's key bit
    double q1 = 0.0, q2 = 0.0;        // r1 vs r4 weights within the key subsequence
    std::array<double, 4> q_ratios{};  // normalized detection weights r1..r4
};

// Full report at an explicit (alpha, beta[, gamma]) point. nullopt if any
// conditional denominator vanishes.
std::optional<IrReport> ir_report(const InterceptParams& p);

// The symmetric-strategy curves as functions of alpha (beta bound to the plus
// branch).
std::optional<double> p1(double alpha);

struct P2Result {
    double p2 = 0.0;
    double q1 = 0.0, q2 = 0.0;
};
std::optional<P2Result> p2(double alpha);

// Same guess probability on the minus branch; identically 1/2 (Eve's outcome
// decorrelates from Alice's bit there).
std::optional<double> p2_tilde(double alpha);

// Normalized detection weights Q1:Q2:Q3:Q4 built from the u/v and f/g sums.
std::array<double, 4> q_ratio_4(const InterceptParams& p);

struct IrSweepRow {
    double alpha = 0.0;
    std::optional<double> p1, p1_comp_r2r3_a, p1_comp_r2r3_b;
    std::optional<double> p2, p2_comp_r1, p2_comp_r4;
    std::optional<double> q1, q2;
};

struct IrSweep {
    std::vector<IrSweepRow> rows;  // uniform alpha grid over [0, 2pi)
    double grid_step = 0.0;
    std::size_t argmax_p1 = 0;  // smallest grid index attaining the maximum
    std::size_t argmax_p2 = 0;
    double max_p1 = 0.0;
    double max_p2 = 0.0;
};

// Tabulates the symmetric-strategy curves on a uniform alpha grid. Component
// columns are the r1/r4 (resp. r2-x / r2-z family) shares, so that
// p2 = p2_comp_r1 + p2_comp_r4 row by row.
IrSweep sweep_ir(int alpha_points);

}  // namespace ppqkd
