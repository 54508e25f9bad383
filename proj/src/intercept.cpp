#include "ppqkd/intercept.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ppqkd {

namespace {

void check_finite_angle(double x, const char* what) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite angle");
}

void check_attack_axis(Axis axis) {
    if (axis == Axis::Y) {
        throw std::invalid_argument("attack analysis is defined for the X and Z axes only");
    }
}

// Cached per-call protocol fixtures. Construction is cheap (dims <= 4) but
// the sweep calls this thousands of times, so build once per thread.
struct Fixtures {
    StateVector psi = initial_state();
    RBasis basis = r_basis();
    std::array<ComplexMatrix, 2> bob_x{
        lift_to_channel(pauli_projector(Axis::X, Outcome::plus)).matrix(),
        lift_to_channel(pauli_projector(Axis::X, Outcome::minus)).matrix()};
    std::array<ComplexMatrix, 2> bob_z{
        lift_to_channel(pauli_projector(Axis::Z, Outcome::plus)).matrix(),
        lift_to_channel(pauli_projector(Axis::Z, Outcome::minus)).matrix()};
};

const Fixtures& fixtures() {
    thread_local Fixtures fx;
    return fx;
}

int outcome_slot(Outcome o) { return o == Outcome::plus ? 0 : 1; }

}  // namespace

ComplexMatrix euler_unitary(const InterceptParams& p) {
    check_finite_angle(p.alpha, "euler_unitary");
    check_finite_angle(p.beta, "euler_unitary");
    check_finite_angle(p.gamma, "euler_unitary");
    const double c = std::cos(p.beta / 2.0);
    const double s = std::sin(p.beta / 2.0);
    const Complex em_apg = std::polar(1.0, -(p.alpha + p.gamma) / 2.0);
    const Complex em_amg = std::polar(1.0, -(p.alpha - p.gamma) / 2.0);
    ComplexMatrix u(2);
    u.set(0, 0, em_apg * c);
    u.set(0, 1, -em_amg * s);
    u.set(1, 0, std::conj(em_amg) * s);
    u.set(1, 1, std::conj(em_apg) * c);
    return u;
}

HermitianOperator xi_projector(const InterceptParams& p, Outcome outcome) {
    check_finite_angle(p.alpha, "xi_projector");
    check_finite_angle(p.beta, "xi_projector");
    const double c = std::cos(p.beta / 2.0);
    const double s = std::sin(p.beta / 2.0);
    const double sign = (outcome == Outcome::plus) ? 1.0 : -1.0;
    const Complex off = sign * std::polar(s * c, -p.alpha);
    ComplexMatrix m(2);
    m.set(0, 0, Complex{outcome == Outcome::plus ? c * c : s * s, 0.0});
    m.set(1, 1, Complex{outcome == Outcome::plus ? s * s : c * c, 0.0});
    m.set(0, 1, off);
    m.set(1, 0, std::conj(off));
    return HermitianOperator(m);
}

Complex attack_amplitude(int r_index, Axis axis, Outcome bob, Outcome eve,
                         const InterceptParams& p) {
    check_attack_axis(axis);
    if (r_index < 1 || r_index > 4) throw std::invalid_argument("attack_amplitude: r index");
    const Fixtures& fx = fixtures();
    const ComplexMatrix eve_proj = lift_to_channel(xi_projector(p, eve)).matrix();
    const ComplexMatrix& bob_proj =
        (axis == Axis::X) ? fx.bob_x[static_cast<std::size_t>(outcome_slot(bob))]
                          : fx.bob_z[static_cast<std::size_t>(outcome_slot(bob))];
    return inner_product(fx.basis.r(r_index), apply(bob_proj, apply(eve_proj, fx.psi)));
}

FgUvTable fg_uv_table(const InterceptParams& p) {
    const Fixtures& fx = fixtures();
    const std::array<ComplexMatrix, 2> eve{
        lift_to_channel(xi_projector(p, Outcome::plus)).matrix(),
        lift_to_channel(xi_projector(p, Outcome::minus)).matrix()};

    // weight[r-1][axis 0=x 1=z][bob][eve] = |<r| P_bob P_eve |psi>|^2
    double w[4][2][2][2];
    for (int l = 0; l < 2; ++l) {
        const StateVector after_eve = apply(eve[static_cast<std::size_t>(l)], fx.psi);
        for (int ax = 0; ax < 2; ++ax) {
            for (int i = 0; i < 2; ++i) {
                const ComplexMatrix& bp = (ax == 0) ? fx.bob_x[static_cast<std::size_t>(i)]
                                                    : fx.bob_z[static_cast<std::size_t>(i)];
                const StateVector after_bob = apply(bp, after_eve);
                for (int r = 0; r < 4; ++r) {
                    w[r][ax][i][l] = std::norm(inner_product(fx.basis.r(r + 1), after_bob));
                }
            }
        }
    }

    FgUvTable t;
    // r2/r3 check families, split by Bob's outcome, summed over Eve's
    t.f[0] = w[1][0][0][0] + w[1][0][0][1];
    t.g[0] = w[1][0][1][0] + w[1][0][1][1];
    t.f[1] = w[1][1][0][0] + w[1][1][0][1];
    t.g[1] = w[1][1][1][0] + w[1][1][1][1];
    t.f[2] = w[2][0][0][0] + w[2][0][0][1];
    t.g[2] = w[2][0][1][0] + w[2][0][1][1];
    t.f[3] = w[2][1][0][0] + w[2][1][0][1];
    t.g[3] = w[2][1][1][0] + w[2][1][1][1];
    // r1/r4 key families, split by Eve's outcome, summed over Bob's
    t.u[0] = w[0][0][0][0] + w[0][0][1][0];
    t.v[0] = w[0][0][0][1] + w[0][0][1][1];
    t.u[1] = w[0][1][0][0] + w[0][1][1][0];
    t.v[1] = w[0][1][0][1] + w[0][1][1][1];
    t.u[2] = w[3][0][0][0] + w[3][0][1][0];
    t.v[2] = w[3][0][0][1] + w[3][0][1][1];
    t.u[3] = w[3][1][0][0] + w[3][1][1][0];
    t.v[3] = w[3][1][0][1] + w[3][1][1][1];
    return t;
}

FgUvTable fg_uv_closed_form(double alpha, double beta) {
    check_finite_angle(alpha, "fg_uv_closed_form");
    check_finite_angle(beta, "fg_uv_closed_form");
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double c2a = std::cos(2.0 * alpha), s2a = std::sin(2.0 * alpha);
    const double c2b = std::cos(2.0 * beta), s2b = std::sin(2.0 * beta);
    const double ch = std::cos(beta / 2.0), sh = std::sin(beta / 2.0);

    FgUvTable t;
    t.f[0] = (cb * cb + sa * sa * sb * sb) / 16.0;
    t.g[0] = (4.0 + 2.0 * cb * cb - 4.0 * ca * cb * sb + (3.0 + c2a + 2.0 * s2a) * sb * sb) / 32.0;
    t.f[1] = (7.0 + c2b - 2.0 * (ca + sa) * s2b) / 32.0;
    t.g[1] = sb * sb / 16.0;
    t.f[2] = (4.0 + 2.0 * cb * cb - 4.0 * ca * cb * sb + (3.0 + c2a - 2.0 * s2a) * sb * sb) / 32.0;
    t.g[2] = (cb * cb + sa * sa * sb * sb) / 16.0;
    t.f[3] = sb * sb / 16.0;
    t.g[3] = (7.0 + c2b + 2.0 * (-ca + sa) * s2b) / 32.0;

    t.u[0] = (2.0 * cb + 2.0 * (1.0 + ca * sb) * (2.0 + sa * sb) + ca * s2b) / 32.0;
    t.v[0] = (-2.0 * cb + 2.0 * (1.0 - ca * sb) * (2.0 - sa * sb) + ca * s2b) / 32.0;
    t.u[1] = ch * ch * (2.0 + (ca + sa) * sb) / 8.0;
    t.v[1] = -sh * sh * (-2.0 + (ca + sa) * sb) / 8.0;
    t.u[2] = (-2.0 * cb - 2.0 * (-1.0 + ca * sb) * (2.0 + sa * sb) + ca * s2b) / 32.0;
    t.v[2] = (2.0 * cb - 2.0 * (1.0 + ca * sb) * (-2.0 + sa * sb) + ca * s2b) / 32.0;
    t.u[3] = sh * sh * (2.0 + (-ca + sa) * sb) / 8.0;
    t.v[3] = ch * ch * (2.0 + (ca - sa) * sb) / 8.0;
    return t;
}

double symmetric_beta(double alpha, BetaBranch branch) {
    check_finite_angle(alpha, "symmetric_beta");
    const double ca = std::cos(alpha);
    const double sign = (branch == BetaBranch::plus) ? 1.0 : -1.0;
    if (std::abs(ca) < 1e-15) return std::numbers::pi / 2.0;  // arctan(+-inf) limit
    return std::atan(sign / ca);
}

namespace {

std::optional<IrReport> report_from_table(const FgUvTable& t) {
    IrReport rep;

    double p1_sum = 0.0;
    const std::array<double, 4> pass_numerators{t.g[0], t.f[1], t.f[2], t.g[3]};
    for (int k = 0; k < 4; ++k) {
        const double den = t.f[static_cast<std::size_t>(k)] + t.g[static_cast<std::size_t>(k)];
        if (den < tol::abl_denominator) return std::nullopt;
        p1_sum += pass_numerators[static_cast<std::size_t>(k)] / den;
    }
    rep.p1 = p1_sum / 4.0;

    const double s14 = t.u[0] + t.v[0] + t.u[1] + t.v[1];
    const double s14b = t.u[2] + t.v[2] + t.u[3] + t.v[3];
    const double r_total = s14 + s14b;
    if (r_total < tol::abl_denominator) return std::nullopt;
    rep.q1 = s14 / r_total;
    rep.q2 = s14b / r_total;

    std::array<double, 4> guess_terms{};
    const std::array<double, 4> guess_numerators{t.u[0], t.u[1], t.v[2], t.v[3]};
    for (int k = 0; k < 4; ++k) {
        const double den = t.u[static_cast<std::size_t>(k)] + t.v[static_cast<std::size_t>(k)];
        if (den < tol::abl_denominator) return std::nullopt;
        guess_terms[static_cast<std::size_t>(k)] =
            guess_numerators[static_cast<std::size_t>(k)] / den;
    }
    rep.p2 = 0.5 * rep.q1 * (guess_terms[0] + guess_terms[1]) +
             0.5 * rep.q2 * (guess_terms[2] + guess_terms[3]);

    const std::array<double, 4> qw{
        t.u[0] + t.v[0] + t.u[1] + t.v[1],
        t.f[0] + t.g[0] + t.f[1] + t.g[1],
        t.f[2] + t.g[2] + t.f[3] + t.g[3],
        t.u[2] + t.v[2] + t.u[3] + t.v[3],
    };
    const double q_total = qw[0] + qw[1] + qw[2] + qw[3];
    for (int k = 0; k < 4; ++k) {
        rep.q_ratios[static_cast<std::size_t>(k)] = qw[static_cast<std::size_t>(k)] / q_total;
    }
    return rep;
}

}  // namespace

std::optional<IrReport> ir_report(const InterceptParams& p) {
    return report_from_table(fg_uv_table(p));
}

std::optional<double> p1(double alpha) {
    const auto rep = ir_report({alpha, symmetric_beta(alpha, BetaBranch::plus), 0.0});
    if (!rep) return std::nullopt;
    return rep->p1;
}

std::optional<P2Result> p2(double alpha) {
    const auto rep = ir_report({alpha, symmetric_beta(alpha, BetaBranch::plus), 0.0});
    if (!rep) return std::nullopt;
    return P2Result{rep->p2, rep->q1, rep->q2};
}

std::optional<double> p2_tilde(double alpha) {
    const FgUvTable t =
        fg_uv_table({alpha, symmetric_beta(alpha, BetaBranch::minus), 0.0});
    // On the minus branch r1 and r4 carry equal weight, so the guess
    // probability is the plain four-term average.
    double sum = 0.0;
    const std::array<double, 4> numerators{t.u[0], t.u[1], t.v[2], t.v[3]};
    for (int k = 0; k < 4; ++k) {
        const double den = t.u[static_cast<std::size_t>(k)] + t.v[static_cast<std::size_t>(k)];
        if (den < tol::abl_denominator) return std::nullopt;
        sum += numerators[static_cast<std::size_t>(k)] / den;
    }
    return sum / 4.0;
}

std::array<double, 4> q_ratio_4(const InterceptParams& p) {
    const FgUvTable t = fg_uv_table(p);
    const std::array<double, 4> qw{
        t.u[0] + t.v[0] + t.u[1] + t.v[1],
        t.f[0] + t.g[0] + t.f[1] + t.g[1],
        t.f[2] + t.g[2] + t.f[3] + t.g[3],
        t.u[2] + t.v[2] + t.u[3] + t.v[3],
    };
    const double total = qw[0] + qw[1] + qw[2] + qw[3];
    return {qw[0] / total, qw[1] / total, qw[2] / total, qw[3] / total};
}

IrSweep sweep_ir(int alpha_points) {
    if (alpha_points < 2) throw std::invalid_argument("sweep_ir: need at least 2 grid points");
    IrSweep sweep;
    sweep.grid_step = 2.0 * std::numbers::pi / alpha_points;
    sweep.rows.reserve(static_cast<std::size_t>(alpha_points));
    sweep.max_p1 = -1.0;
    sweep.max_p2 = -1.0;

    for (int k = 0; k < alpha_points; ++k) {
        const double alpha = k * sweep.grid_step;
        IrSweepRow row;
        row.alpha = alpha;
        const double beta = symmetric_beta(alpha, BetaBranch::plus);
        const FgUvTable t = fg_uv_table({alpha, beta, 0.0});
        const auto rep = report_from_table(t);
        if (rep) {
            row.p1 = rep->p1;
            row.p1_comp_r2r3_a = t.g[0] / (t.f[0] + t.g[0]);
            row.p1_comp_r2r3_b = t.f[1] / (t.f[1] + t.g[1]);
            row.p2 = rep->p2;
            row.p2_comp_r1 = 0.5 * rep->q1 * (t.u[0] / (t.u[0] + t.v[0]) + t.u[1] / (t.u[1] + t.v[1]));
            row.p2_comp_r4 = 0.5 * rep->q2 * (t.v[2] / (t.u[2] + t.v[2]) + t.v[3] / (t.u[3] + t.v[3]));
            row.q1 = rep->q1;
            row.q2 = rep->q2;
            // smallest index wins ties, so require a strict improvement
            if (rep->p1 > sweep.max_p1) {
                sweep.max_p1 = rep->p1;
                sweep.argmax_p1 = static_cast<std::size_t>(k);
            }
            if (rep->p2 > sweep.max_p2) {
                sweep.max_p2 = rep->p2;
                sweep.argmax_p2 = static_cast<std::size_t>(k);
            }
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

}  // namespace ppqkd
