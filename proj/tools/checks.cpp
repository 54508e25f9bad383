#include "checks.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "ppqkd/collective.hpp"
#include "ppqkd/intercept.hpp"
#include "ppqkd/montecarlo.hpp"
#include "ppqkd/protocol.hpp"
#include "ppqkd/qmath.hpp"

namespace ppqkd::checks {

namespace {

const double kPi = std::numbers::pi;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(15);
    os << x;
    return os.str();
}

CheckResult bound_result(double worst, double limit, const std::string& label) {
    CheckResult r;
    r.ok = worst <= limit;
    r.detail = label + " worst=" + fmt(worst) + " limit=" + fmt(limit);
    return r;
}

ComplexMatrix random_hermitian(std::mt19937_64& gen, int dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    ComplexMatrix m(dim);
    for (int r = 0; r < dim; ++r) {
        m.set(r, r, Complex{dist(gen), 0.0});
        for (int c = r + 1; c < dim; ++c) {
            Complex z{dist(gen), dist(gen)};
            m.set(r, c, z);
            m.set(c, r, std::conj(z));
        }
    }
    return m;
}

StateVector random_state(std::mt19937_64& gen, int dim) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Complex> a(static_cast<std::size_t>(dim));
    for (auto& x : a) x = Complex{dist(gen), dist(gen)};
    return StateVector(std::move(a));
}

CheckResult qmath_eig() {
    std::mt19937_64 gen(101);
    double worst_trace = 0.0, worst_resid = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        const ComplexMatrix m = random_hermitian(gen, rep % 2 ? 2 : 4);
        const HermitianEigen eig = hermitian_eigensystem(HermitianOperator(m));
        double sum = 0.0;
        for (double l : eig.values) sum += l;
        worst_trace = std::max(worst_trace, std::abs(sum - m.trace().real()));
        for (std::size_t k = 0; k < eig.values.size(); ++k) {
            const StateVector resid =
                apply(m, eig.vectors[k]) - Complex{eig.values[k], 0.0} * eig.vectors[k];
            worst_resid = std::max(worst_resid, resid.norm());
        }
    }
    CheckResult r;
    r.ok = worst_trace <= 1e-10 && worst_resid <= 1e-9;
    r.detail = "trace gap=" + fmt(worst_trace) + " (<=1e-10), residual=" + fmt(worst_resid) +
               " (<=1e-9)";
    return r;
}

CheckResult qmath_trace_norm() {
    std::mt19937_64 gen(102);
    double worst = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        const ComplexMatrix m = random_hermitian(gen, 4);
        const double tn = trace_norm(m);
        worst = std::max(worst, std::abs(m.trace().real()) - tn);          // >= |Tr|
        worst = std::max(worst, std::abs(trace_norm(Complex{-1.0, 0.0} * m) - tn));
    }
    return bound_result(worst, 1e-10, "trace-norm property gap");
}

CheckResult qmath_inner_symmetry() {
    std::mt19937_64 gen(103);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const StateVector u = random_state(gen, 4);
        const StateVector v = random_state(gen, 4);
        worst = std::max(worst, std::abs(inner_product(u, v) - std::conj(inner_product(v, u))));
    }
    return bound_result(worst, 1e-12, "conjugate symmetry gap");
}

CheckResult qmath_bilinearity() {
    std::mt19937_64 gen(104);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const StateVector u = random_state(gen, 2), v = random_state(gen, 2),
                          w = random_state(gen, 2);
        const Complex a{0.6, -0.3}, b{-0.2, 1.1};
        const StateVector gap = tensor_product(a * u + b * v, w) -
                                (a * tensor_product(u, w) + b * tensor_product(v, w));
        worst = std::max(worst, gap.norm());
    }
    return bound_result(worst, 1e-12, "bilinearity gap");
}

CheckResult protocol_r_basis() {
    const RBasis basis = r_basis();
    double worst = 0.0;
    ComplexMatrix completeness(4);
    for (int i = 1; i <= 4; ++i) {
        completeness = completeness + outer_product(basis.r(i));
        for (int j = 1; j <= 4; ++j) {
            const Complex ip = inner_product(basis.r(i), basis.r(j));
            worst = std::max(worst, std::abs(ip - (i == j ? Complex{1.0, 0.0} : Complex{0.0, 0.0})));
        }
    }
    const ComplexMatrix gap = completeness - ComplexMatrix::identity(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(gap.at(r, c)));
    return bound_result(worst, tol::hermitian, "orthonormality/completeness gap");
}

CheckResult protocol_projectors() {
    double worst = 0.0;
    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        const ComplexMatrix plus = pauli_projector(axis, Outcome::plus).matrix();
        const ComplexMatrix minus = pauli_projector(axis, Outcome::minus).matrix();
        const ComplexMatrix idem = plus * plus - plus;
        const ComplexMatrix ortho = plus * minus;
        const ComplexMatrix comp = plus + minus - ComplexMatrix::identity(2);
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                worst = std::max({worst, std::abs(idem.at(r, c)), std::abs(ortho.at(r, c)),
                                  std::abs(comp.at(r, c))});
            }
        }
    }
    return bound_result(worst, tol::hermitian, "projector algebra gap");
}

CheckResult protocol_table1() {
    const StateVector psi = initial_state();
    const RBasis basis = r_basis();
    const Table1 table = table1();  // throws if not deterministic
    double worst = 0.0;
    for (int i = 1; i <= 4; ++i) {
        for (Axis axis : {Axis::X, Axis::Z}) {
            const std::vector<HermitianOperator> projectors{
                lift_to_channel(pauli_projector(axis, Outcome::plus)),
                lift_to_channel(pauli_projector(axis, Outcome::minus))};
            const std::size_t tabulated =
                table.outcome(i, axis) == Outcome::plus ? 0 : 1;
            const auto p_hit = abl_probability(psi, basis.r(i), projectors, tabulated);
            const auto p_miss = abl_probability(psi, basis.r(i), projectors, 1 - tabulated);
            worst = std::max({worst, std::abs(*p_hit - 1.0), std::abs(*p_miss)});
        }
    }
    return bound_result(worst, tol::hermitian, "determinism gap (8 entries)");
}

CheckResult protocol_honest_uniformity() {
    constexpr int kTrials = 100000;
    std::array<std::uint64_t, 4> counts{};
    for (int t = 0; t < kTrials; ++t) {
        const ProtocolRound round = honest_round(777000 + static_cast<std::uint64_t>(t));
        ++counts[static_cast<std::size_t>(round.alice_detection - 1)];
    }
    const double expect = kTrials / 4.0;
    double chi2 = 0.0, worst_sigma = 0.0;
    const double sigma = std::sqrt(0.25 * 0.75 * kTrials);
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expect;
        chi2 += d * d / expect;
        worst_sigma = std::max(worst_sigma, std::abs(d) / sigma);
    }
    // 3-sigma band for a chi-square with 3 degrees of freedom: 3 + 3*sqrt(6)
    const double chi2_limit = 3.0 + 3.0 * std::sqrt(6.0);
    CheckResult r;
    r.ok = chi2 <= chi2_limit && worst_sigma <= 4.0;
    r.detail = "chi2=" + fmt(chi2) + " (<=" + fmt(chi2_limit) + "), worst cell sigma=" +
               fmt(worst_sigma) + " (<=4)";
    return r;
}

CheckResult intercept_gamma_irrelevance() {
    std::mt19937_64 gen(105);
    std::uniform_real_distribution<double> dist(0.0, 4.0 * kPi);
    double worst_gamma = 0.0;   // projector must not depend on gamma at all
    double worst_unitary = 0.0; // and must match the U diag(1,0) U^dagger route
    for (int rep = 0; rep < 50; ++rep) {
        const double alpha = dist(gen), beta = dist(gen);
        const ComplexMatrix base = xi_projector({alpha, beta, 0.0}, Outcome::plus).matrix();
        for (int g = 0; g < 3; ++g) {
            const InterceptParams p{alpha, beta, dist(gen)};
            const ComplexMatrix proj = xi_projector(p, Outcome::plus).matrix();
            const ComplexMatrix u = euler_unitary(p);
            ComplexMatrix sel(2);
            sel.set(0, 0, Complex{1.0, 0.0});
            const ComplexMatrix conj = u * sel * u.dagger();
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    worst_gamma = std::max(worst_gamma, std::abs(proj.at(r, c) - base.at(r, c)));
                    worst_unitary = std::max(worst_unitary, std::abs(conj.at(r, c) - base.at(r, c)));
                }
            }
        }
    }
    CheckResult r;
    r.ok = worst_gamma <= 1e-15 && worst_unitary <= 1e-14;
    r.detail = "gamma dependence=" + fmt(worst_gamma) + " (<=1e-15), unitary-route gap=" +
               fmt(worst_unitary) + " (<=1e-14)";
    return r;
}

CheckResult intercept_closed_forms() {
    std::mt19937_64 gen(106);
    std::uniform_real_distribution<double> dist(0.0, 4.0 * kPi);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const double alpha = dist(gen), beta = dist(gen);
        const FgUvTable amp = fg_uv_table({alpha, beta, 0.0});
        const FgUvTable closed = fg_uv_closed_form(alpha, beta);
        for (int k = 0; k < 4; ++k) {
            const auto kk = static_cast<std::size_t>(k);
            worst = std::max({worst, std::abs(amp.f[kk] - closed.f[kk]),
                              std::abs(amp.g[kk] - closed.g[kk]),
                              std::abs(amp.u[kk] - closed.u[kk]),
                              std::abs(amp.v[kk] - closed.v[kk])});
        }
    }
    return bound_result(worst, tol::hermitian, "closed-form vs amplitude gap (1000 draws)");
}

CheckResult intercept_bookkeeping() {
    std::mt19937_64 gen(107);
    std::uniform_real_distribution<double> dist(0.0, 4.0 * kPi);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const InterceptParams p{dist(gen), dist(gen), 0.0};
        double total = 0.0;
        for (Axis axis : {Axis::X, Axis::Z}) {
            for (Outcome bob : {Outcome::plus, Outcome::minus}) {
                for (Outcome eve : {Outcome::plus, Outcome::minus}) {
                    for (int r = 1; r <= 4; ++r) {
                        total += 0.5 * std::norm(attack_amplitude(r, axis, bob, eve, p));
                    }
                }
            }
        }
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return bound_result(worst, tol::probability, "total probability gap");
}

CheckResult intercept_symmetric_condition() {
    std::mt19937_64 gen(108);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * kPi);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const double alpha = dist(gen);
        for (BetaBranch branch : {BetaBranch::plus, BetaBranch::minus}) {
            const double beta = symmetric_beta(alpha, branch);
            const double cb = std::cos(beta), sb = std::sin(beta), ca = std::cos(alpha);
            worst = std::max(worst, std::abs(cb * cb - ca * ca * sb * sb));
        }
    }
    return bound_result(worst, tol::hermitian, "constraint residual");
}

CheckResult intercept_q_normalization() {
    std::mt19937_64 gen(109);
    std::uniform_real_distribution<double> dist(0.0, 2.0 * kPi);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const auto res = p2(dist(gen));
        if (!res) continue;
        worst = std::max(worst, std::abs(res->q1 + res->q2 - 1.0));
    }
    return bound_result(worst, tol::hermitian, "q1+q2-1");
}

CheckResult intercept_p2_tilde() {
    double worst = 0.0;
    for (int k = 0; k < 720; ++k) {
        const double alpha = 2.0 * kPi * k / 720.0;
        const auto pt = p2_tilde(alpha);
        if (!pt) return {false, "undefined at alpha=" + fmt(alpha)};
        worst = std::max(worst, std::abs(*pt - 0.5));
    }
    return bound_result(worst, tol::probability, "|p2_tilde - 1/2| on 720-point grid");
}

CheckResult intercept_breidbart() {
    const auto rep1 = p1(0.0);
    const auto rep2 = p2(0.0);
    const FgUvTable t = fg_uv_table({0.0, kPi / 4.0, 0.0});
    const double sqrt2 = std::sqrt(2.0);
    double worst = std::abs(*rep1 - 5.0 / 6.0);
    worst = std::max(worst, std::abs(rep2->p2 - (5.0 + 3.0 * sqrt2) / 10.0));
    worst = std::max(worst, std::abs(rep2->q1 - rep2->q2));
    for (double x : {t.f[0], t.g[1], t.g[2], t.f[3]}) worst = std::max(worst, std::abs(x - 1.0 / 32.0));
    for (double x : {t.g[0], t.f[1], t.f[2], t.g[3]}) worst = std::max(worst, std::abs(x - 5.0 / 32.0));
    CheckResult r = bound_result(worst, tol::hermitian, "gap");
    r.detail = "P1=" + fmt(*rep1) + " (5/6), P2=" + fmt(rep2->p2) + " ((5+3sqrt2)/10); " + r.detail;
    return r;
}

CheckResult intercept_pi_point() {
    const InterceptParams p{kPi, kPi / 4.0, 0.0};
    const auto rep = ir_report(p);
    const FgUvTable t = fg_uv_table(p);
    const std::array<double, 4> ratios = q_ratio_4(p);
    const double sqrt2 = std::sqrt(2.0);
    double worst = std::abs(rep->p1 - 0.9);
    const std::array<double, 4> expect_ratio{3.0 / 16.0, 5.0 / 16.0, 5.0 / 16.0, 3.0 / 16.0};
    for (int k = 0; k < 4; ++k) {
        worst = std::max(worst, std::abs(ratios[static_cast<std::size_t>(k)] -
                                         expect_ratio[static_cast<std::size_t>(k)]));
    }
    const double lo = (3.0 - sqrt2) / 6.0, hi = (3.0 + sqrt2) / 6.0;
    worst = std::max(worst, std::abs(t.u[0] / (t.u[0] + t.v[0]) - lo));
    worst = std::max(worst, std::abs(t.u[1] / (t.u[1] + t.v[1]) - hi));
    worst = std::max(worst, std::abs(rep->p2 - 0.5));
    CheckResult r = bound_result(worst, tol::hermitian, "gap");
    r.detail = "P1=" + fmt(rep->p1) + " (9/10), Q=3:5:5:3, conditionals (3+-sqrt2)/6; " + r.detail;
    return r;
}

std::mt19937_64& coll_gen() {
    static std::mt19937_64 gen(110);
    return gen;
}

CollectiveParams random_valid_params() {
    std::uniform_real_distribution<double> dist(0.0, kPi);
    for (;;) {
        const auto p = make_collective_params(dist(coll_gen()), dist(coll_gen()));
        if (p) return *p;
    }
}

CheckResult collective_k_closure() {
    const Table1 table = table1();
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const CollectiveParams p = random_valid_params();
        for (Axis axis : {Axis::X, Axis::Z}) {
            for (Outcome bob : {Outcome::plus, Outcome::minus}) {
                for (int r = 1; r <= 4; ++r) {
                    const double expect = table.outcome(r, axis) == bob
                                              ? (1.0 + p.fidelity) / 8.0
                                              : (1.0 - p.fidelity) / 8.0;
                    worst = std::max(worst, std::abs(k_value(axis, bob, r, p) - expect));
                }
            }
        }
    }
    return bound_result(worst, tol::hermitian, "K-vs-(1+-F)/8 gap (100 draws)");
}

CheckResult collective_completeness() {
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const CollectiveParams p = random_valid_params();
        double total = 0.0;
        for (Axis axis : {Axis::X, Axis::Z}) {
            for (Outcome bob : {Outcome::plus, Outcome::minus}) {
                for (int r = 1; r <= 4; ++r) total += 0.5 * k_value(axis, bob, r, p);
            }
        }
        worst = std::max(worst, std::abs(total - 1.0));
    }
    return bound_result(worst, tol::probability, "half-weighted K sum gap");
}

CheckResult collective_p_ab() {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const CollectiveParams p = random_valid_params();
        const double sum = k_value(Axis::X, Outcome::minus, 2, p) +
                           k_value(Axis::X, Outcome::plus, 3, p) +
                           k_value(Axis::Z, Outcome::plus, 2, p) +
                           k_value(Axis::Z, Outcome::minus, 3, p);
        worst = std::max(worst, std::abs(sum - 0.5 * (1.0 + p.fidelity)));
    }
    return bound_result(worst, tol::hermitian, "S23 K-sum vs (1+F)/2 gap");
}

CheckResult collective_rho() {
    double worst_trace = 0.0, worst_psd = 0.0;
    for (int rep = 0; rep < 40; ++rep) {
        const CollectiveParams p = random_valid_params();
        const auto [rho0, rho1] = rho_pair(p);
        worst_trace = std::max(worst_trace, std::abs(rho0.matrix().trace().real() - 0.5));
        worst_trace = std::max(worst_trace, std::abs(rho1.matrix().trace().real() - 0.5));
        for (const auto& rho : {rho0, rho1}) {
            const auto ev = hermitian_eigenvalues(rho);
            worst_psd = std::max(worst_psd, -ev.back());
        }
    }
    CheckResult r;
    r.ok = worst_trace <= tol::hermitian && worst_psd <= 1e-12;
    r.detail = "trace gap=" + fmt(worst_trace) + ", min eigenvalue >= -" + fmt(worst_psd);
    return r;
}

CheckResult collective_bounds() {
    double lo = 1.0, hi = 0.0;
    for (int rep = 0; rep < 60; ++rep) {
        const CollectiveParams p = random_valid_params();
        const auto rep_pe = p_eve(p.a, p.b);
        lo = std::min(lo, rep_pe->p_e);
        hi = std::max(hi, rep_pe->p_e);
    }
    CheckResult r;
    r.ok = lo >= 0.5 - 1e-12 && hi <= 1.0 + 1e-12;
    r.detail = "p_e range [" + fmt(lo) + ", " + fmt(hi) + "] within [1/2, 1]";
    return r;
}

CheckResult collective_f1_baseline() {
    const auto rep = p_eve(0.0, 1.0);
    CheckResult r;
    r.ok = rep && std::abs(rep->p_e - 0.5) <= tol::hermitian &&
           std::abs(rep->fidelity - 1.0) <= tol::hermitian;
    r.detail = rep ? "p_e=" + fmt(rep->p_e) + " (expected 1/2 at F=1)" : "unexpected invalid";
    return r;
}

CheckResult mc_determinism() {
    const InterceptParams p{0.0, kPi / 4.0, 0.0};
    const FrequencyReport a = simulate_ir(p, 20000, 42);
    const FrequencyReport b = simulate_ir(p, 20000, 42);
    CheckResult r;
    r.ok = a.counts == b.counts && a.max_sigma_deviation == b.max_sigma_deviation;
    r.detail = r.ok ? "identical counts for identical seeds" : "reports differ";
    return r;
}

CheckResult mc_honest() {
    const FrequencyReport rep = simulate_honest(100000, 1);
    double worst = 0.0;
    for (const auto& check : rep.named_checks) worst = std::max(worst, check.sigma_deviation);
    CheckResult r;
    r.ok = rep.table1_violations == 0 && rep.impossible_cell_hits == 0 && worst <= 4.0;
    r.detail = "violations=" + std::to_string(rep.table1_violations) +
               ", worst marginal sigma=" + fmt(worst) + " (<=4)";
    return r;
}

}  // namespace

std::vector<Check> all_checks() {
    return {
        {"qmath/eig_trace_and_residuals", qmath_eig},
        {"qmath/trace_norm_properties", qmath_trace_norm},
        {"qmath/inner_product_conjugate_symmetry", qmath_inner_symmetry},
        {"qmath/tensor_bilinearity", qmath_bilinearity},
        {"protocol/r_basis_orthonormality", protocol_r_basis},
        {"protocol/projector_algebra", protocol_projectors},
        {"protocol/table1", protocol_table1},
        {"protocol/honest_round_uniformity", protocol_honest_uniformity},
        {"intercept/gamma_irrelevance", intercept_gamma_irrelevance},
        {"intercept/closed_form_amplitude_equivalence", intercept_closed_forms},
        {"intercept/probability_bookkeeping", intercept_bookkeeping},
        {"intercept/symmetric_condition", intercept_symmetric_condition},
        {"intercept/q_weight_normalization", intercept_q_normalization},
        {"intercept/p2_tilde_identity", intercept_p2_tilde},
        {"intercept/breidbart_values", intercept_breidbart},
        {"intercept/pi_point_values", intercept_pi_point},
        {"collective/k_closure", collective_k_closure},
        {"collective/k_completeness", collective_completeness},
        {"collective/p_ab_identity", collective_p_ab},
        {"collective/rho_traces_and_psd", collective_rho},
        {"collective/trace_distance_bounds", collective_bounds},
        {"collective/f1_baseline", collective_f1_baseline},
        {"montecarlo/determinism", mc_determinism},
        {"montecarlo/honest_no_violations", mc_honest},
    };
}

}  // namespace ppqkd::checks
