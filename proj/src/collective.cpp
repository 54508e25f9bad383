#include "ppqkd/collective.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace ppqkd {

namespace {

void check_valid(const CollectiveParams& p) {
    const double cb_lhs = std::cos(p.b) * (1.0 - p.fidelity);
    const double cb_rhs = -1.0 + 2.0 * p.fidelity - p.fidelity * std::cos(p.a);
    if (std::abs(cb_lhs - cb_rhs) > 1e-9 || p.fidelity < 0.0 || p.fidelity > 1.0) {
        throw std::invalid_argument("CollectiveParams: constraint violated");
    }
}

void check_label(Axis axis, int r_index) {
    if (axis == Axis::Y) throw std::invalid_argument("collective attack labels use X and Z only");
    if (r_index < 1 || r_index > 4) throw std::invalid_argument("r index out of range");
}

}  // namespace

std::optional<double> fidelity_from_ab(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("fidelity_from_ab: non-finite angle");
    }
    const double num = 1.0 + std::cos(b);
    const double den = 2.0 + std::cos(b) - std::cos(a);
    if (std::abs(den) < tol::fidelity_denominator) return std::nullopt;
    const double f = num / den;
    // den = num + (1 - cos a), so analytically F sits in [0,1] wherever it is
    // defined; reject anything further out than rounding noise and clamp the
    // rest.
    if (f < -tol::fidelity_range || f > 1.0 + tol::fidelity_range) return std::nullopt;
    return std::min(std::max(f, 0.0), 1.0);
}

std::optional<CollectiveParams> make_collective_params(double a, double b) {
    const auto f = fidelity_from_ab(a, b);
    if (!f) return std::nullopt;
    return CollectiveParams{a, b, *f};
}

ProbeBasis probe_basis(const CollectiveParams& p) {
    check_valid(p);
    const Complex zero{0.0, 0.0};
    const Complex one{1.0, 0.0};
    return ProbeBasis{
        StateVector({one, zero, zero, zero}),
        StateVector({zero, Complex{std::cos(p.b), 0.0}, zero, Complex{std::sin(p.b), 0.0}}),
        StateVector({zero, one, zero, zero}),
        StateVector({Complex{std::cos(p.a), 0.0}, zero, Complex{std::sin(p.a), 0.0}, zero}),
    };
}

StateVector probe_state(Axis axis, Outcome bob, int r_index, const CollectiveParams& p) {
    check_label(axis, r_index);
    const ProbeBasis pb = probe_basis(p);
    const double sf = std::sqrt(p.fidelity);
    const double sg = std::sqrt(1.0 - p.fidelity);
    const Complex i{0.0, 1.0};
    const Complex c1m = (1.0 - i);  // shorthand for the recurring phases
    const Complex c1p = (1.0 + i);
    const Complex c3p = (3.0 + i);

    // Coefficient expansion over (alpha, beta, gamma, delta), one closed form
    // per (axis, outcome, detection) label.
    struct Coeffs {
        Complex ca{0.0, 0.0}, cb{0.0, 0.0}, cg{0.0, 0.0}, cd{0.0, 0.0};
    } c;

    const bool plus = (bob == Outcome::plus);
    if (axis == Axis::Z) {
        switch (r_index) {
            case 1:
                if (plus) {
                    c.ca = sf / 2.0;
                    c.cb = c1m / 4.0 * sg;
                } else {
                    c.cg = c1p / 4.0 * sg;
                }
                break;
            case 2:
                if (plus) {
                    c.ca = sf / 2.0;
                    c.cb = -c1m / 4.0 * sg;
                } else {
                    c.cg = -c1p / 4.0 * sg;
                }
                break;
            case 3:
                if (plus) {
                    c.cb = c1p / 4.0 * sg;
                } else {
                    c.cg = c1m / 4.0 * sg;
                    c.cd = sf / 2.0;
                }
                break;
            case 4:
                if (plus) {
                    c.cb = -c1p / 4.0 * sg;
                } else {
                    c.cg = -c1m / 4.0 * sg;
                    c.cd = sf / 2.0;
                }
                break;
        }
    } else {  // Axis::X
        switch (r_index) {
            case 1:
                if (plus) {
                    c.ca = c3p / 8.0 * sf;
                    c.cb = c1m / 8.0 * sg;
                    c.cg = c3p / 8.0 * sg;
                    c.cd = c1m / 8.0 * sf;
                } else {
                    c.ca = c1m / 8.0 * sf;
                    c.cb = c1m / 8.0 * sg;
                    c.cg = -c1m / 8.0 * sg;
                    c.cd = -c1m / 8.0 * sf;
                }
                break;
            case 2:
                if (plus) {
                    c.ca = c1m / 8.0 * sf;
                    c.cb = -c1m / 8.0 * sg;
                    c.cg = c1m / 8.0 * sg;
                    c.cd = -c1m / 8.0 * sf;
                } else {
                    c.ca = c3p / 8.0 * sf;
                    c.cb = -c1m / 8.0 * sg;
                    c.cg = -c3p / 8.0 * sg;
                    c.cd = c1m / 8.0 * sf;
                }
                break;
            case 3:
                if (plus) {
                    c.ca = c1m / 8.0 * sf;
                    c.cb = c3p / 8.0 * sg;
                    c.cg = c1m / 8.0 * sg;
                    c.cd = c3p / 8.0 * sf;
                } else {
                    c.ca = -c1m / 8.0 * sf;
                    c.cb = -c1m / 8.0 * sg;
                    c.cg = c1m / 8.0 * sg;
                    c.cd = c1m / 8.0 * sf;
                }
                break;
            case 4:
                if (plus) {
                    c.ca = -c1m / 8.0 * sf;
                    c.cb = c1m / 8.0 * sg;
                    c.cg = -c1m / 8.0 * sg;
                    c.cd = c1m / 8.0 * sf;
                } else {
                    c.ca = c1m / 8.0 * sf;
                    c.cb = -c3p / 8.0 * sg;
                    c.cg = -c1m / 8.0 * sg;
                    c.cd = c3p / 8.0 * sf;
                }
                break;
        }
    }
    return c.ca * pb.alpha + c.cb * pb.beta + c.cg * pb.gamma + c.cd * pb.delta;
}

double k_value(Axis axis, Outcome bob, int r_index, const CollectiveParams& p) {
    return probe_state(axis, bob, r_index, p).norm_sq();
}

std::pair<HermitianOperator, HermitianOperator> rho_pair(const CollectiveParams& p) {
    ComplexMatrix rho0(4);
    ComplexMatrix rho1(4);
    for (Axis axis : {Axis::Z, Axis::X}) {
        for (Outcome bob : {Outcome::plus, Outcome::minus}) {
            rho0 = rho0 + outer_product(probe_state(axis, bob, 1, p));
            rho1 = rho1 + outer_product(probe_state(axis, bob, 4, p));
        }
    }
    return {HermitianOperator(rho0), HermitianOperator(rho1)};
}

std::optional<CollectiveReport> p_eve(double a, double b) {
    const auto params = make_collective_params(a, b);
    if (!params) return std::nullopt;
    const auto [rho0, rho1] = rho_pair(*params);
    CollectiveReport rep;
    rep.a = a;
    rep.b = b;
    rep.fidelity = params->fidelity;
    rep.p_ab = 0.5 * (1.0 + params->fidelity);
    rep.p_e = 0.5 + 0.5 * trace_norm(rho0.matrix() - rho1.matrix());
    return rep;
}

namespace {

int worker_count() {
    if (const char* env = std::getenv("PPQKD_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

}  // namespace

CollectiveSweep sweep_collective(int n_max, int m_max) {
    if (n_max < 1 || m_max < 1) throw std::invalid_argument("sweep_collective: grid sizes must be >= 1");
    CollectiveSweep sweep;
    sweep.n_max = n_max;
    sweep.m_max = m_max;
    sweep.step_a = std::numbers::pi / n_max;
    sweep.step_b = std::numbers::pi / m_max;
    const std::size_t total =
        static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(m_max + 1);
    sweep.cells.resize(total);

    const auto eval_rows = [&](int n_begin, int n_end) {
        for (int n = n_begin; n < n_end; ++n) {
            for (int m = 0; m <= m_max; ++m) {
                CollectiveCell cell;
                cell.n = n;
                cell.m = m;
                cell.a = n * sweep.step_a;
                cell.b = m * sweep.step_b;
                cell.report = p_eve(cell.a, cell.b);
                sweep.cells[static_cast<std::size_t>(n) * static_cast<std::size_t>(m_max + 1) +
                            static_cast<std::size_t>(m)] = cell;
            }
        }
    };

    const int workers = std::min(worker_count(), n_max + 1);
    if (workers <= 1) {
        eval_rows(0, n_max + 1);
    } else {
        // Disjoint row blocks; the cell vector is preallocated, so the merge
        // order (and thus the result) is independent of the partitioning.
        std::vector<std::thread> pool;
        const int rows = n_max + 1;
        const int chunk = (rows + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * chunk;
            const int hi = std::min(rows, lo + chunk);
            if (lo < hi) pool.emplace_back(eval_rows, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    sweep.max_p_e = -1.0;
    for (const CollectiveCell& cell : sweep.cells) {
        if (!cell.report) {
            ++sweep.invalid_cells;
            continue;
        }
        if (cell.report->p_e > sweep.max_p_e) {  // strict: lexicographic (n,m) tie-break
            sweep.max_p_e = cell.report->p_e;
            sweep.argmax_n = cell.n;
            sweep.argmax_m = cell.m;
        }
    }

    sweep.fig4_slice.reserve(static_cast<std::size_t>(n_max + 1));
    for (int n = 0; n <= n_max; ++n) {
        const CollectiveCell& cell =
            sweep.cells[static_cast<std::size_t>(n) * static_cast<std::size_t>(m_max + 1) +
                        static_cast<std::size_t>(sweep.argmax_m)];
        Fig4SliceRow row;
        row.a = n * sweep.step_a;
        if (cell.report) {
            row.fidelity = cell.report->fidelity;
            row.p_e = cell.report->p_e;
        }
        sweep.fig4_slice.push_back(row);
    }
    return sweep;
}

}  // namespace ppqkd
