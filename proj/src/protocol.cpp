#include "ppqkd/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ppqkd/rng.hpp"

namespace ppqkd {

namespace {
const double kSqrtHalf = 1.0 / std::sqrt(2.0);
const Complex kPhase{0.5 / std::sqrt(2.0), 0.5 / std::sqrt(2.0)};  // (1/2) e^{i pi/4}
}  // namespace

const char* to_string(Axis axis) {
    switch (axis) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

StateVector initial_state() {
    return StateVector({Complex{kSqrtHalf, 0.0}, Complex{0.0, 0.0}, Complex{0.0, 0.0},
                        Complex{kSqrtHalf, 0.0}});
}

RBasis r_basis() {
    const Complex h{kSqrtHalf, 0.0};
    const Complex p = kPhase;             // (1/2) e^{+i pi/4}
    const Complex m = std::conj(kPhase);  // (1/2) e^{-i pi/4}
    return RBasis{{
        StateVector({h, p, m, Complex{0.0, 0.0}}),
        StateVector({h, -p, -m, Complex{0.0, 0.0}}),
        StateVector({Complex{0.0, 0.0}, m, p, h}),
        StateVector({Complex{0.0, 0.0}, -m, -p, h}),
    }};
}

HermitianOperator pauli_projector(Axis axis, Outcome outcome) {
    const double s = (outcome == Outcome::plus) ? 1.0 : -1.0;
    ComplexMatrix m(2);
    switch (axis) {
        case Axis::Z:
            m.set(0, 0, Complex{0.5 * (1.0 + s), 0.0});
            m.set(1, 1, Complex{0.5 * (1.0 - s), 0.0});
            break;
        case Axis::X:
            m.set(0, 0, Complex{0.5, 0.0});
            m.set(1, 1, Complex{0.5, 0.0});
            m.set(0, 1, Complex{0.5 * s, 0.0});
            m.set(1, 0, Complex{0.5 * s, 0.0});
            break;
        case Axis::Y:
            m.set(0, 0, Complex{0.5, 0.0});
            m.set(1, 1, Complex{0.5, 0.0});
            m.set(0, 1, Complex{0.0, -0.5 * s});
            m.set(1, 0, Complex{0.0, 0.5 * s});
            break;
    }
    return HermitianOperator(m);
}

HermitianOperator lift_to_channel(const HermitianOperator& p) {
    if (p.dim() != 2) throw std::invalid_argument("lift_to_channel expects a qubit operator");
    return HermitianOperator(tensor_product(ComplexMatrix::identity(2), p.matrix()));
}

std::optional<double> abl_probability(const StateVector& pre_state, const StateVector& post_state,
                                      const std::vector<HermitianOperator>& projectors,
                                      std::size_t which) {
    if (projectors.empty() || which >= projectors.size()) {
        throw std::invalid_argument("abl_probability: bad projector index");
    }
    const int dim = pre_state.dim();
    if (post_state.dim() != dim) throw std::invalid_argument("abl_probability: dimension mismatch");

    ComplexMatrix sum(dim);
    for (const auto& p : projectors) {
        if (p.dim() != dim) throw std::invalid_argument("abl_probability: dimension mismatch");
        sum = sum + p.matrix();
    }
    const ComplexMatrix resid = sum - ComplexMatrix::identity(dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            if (std::abs(resid.at(r, c)) > tol::probability) {
                throw std::invalid_argument("abl_probability: projectors do not resolve the identity");
            }
        }
    }

    double denom = 0.0;
    double numer = 0.0;
    for (std::size_t j = 0; j < projectors.size(); ++j) {
        const double w = std::norm(inner_product(post_state, apply(projectors[j].matrix(), pre_state)));
        denom += w;
        if (j == which) numer = w;
    }
    if (denom < tol::abl_denominator) return std::nullopt;
    return numer / denom;
}

Outcome Table1::outcome(int r_index, Axis axis) const {
    if (r_index < 1 || r_index > 4 || axis == Axis::Y) {
        throw std::invalid_argument("Table1: index out of range");
    }
    return entries[static_cast<std::size_t>(r_index - 1)][axis == Axis::X ? 0 : 1];
}

Table1 table1() {
    const StateVector psi = initial_state();
    const RBasis basis = r_basis();
    Table1 t{};
    for (int i = 1; i <= 4; ++i) {
        for (Axis axis : {Axis::X, Axis::Z}) {
            std::vector<HermitianOperator> projectors{
                lift_to_channel(pauli_projector(axis, Outcome::plus)),
                lift_to_channel(pauli_projector(axis, Outcome::minus))};
            const auto p_plus = abl_probability(psi, basis.r(i), projectors, 0);
            const auto p_minus = abl_probability(psi, basis.r(i), projectors, 1);
            if (!p_plus || !p_minus) {
                throw std::runtime_error("table1: undefined conditional probability");
            }
            Outcome o;
            if (std::abs(*p_plus - 1.0) <= tol::hermitian && std::abs(*p_minus) <= tol::hermitian) {
                o = Outcome::plus;
            } else if (std::abs(*p_minus - 1.0) <= tol::hermitian &&
                       std::abs(*p_plus) <= tol::hermitian) {
                o = Outcome::minus;
            } else {
                throw std::runtime_error("table1: entry r" + std::to_string(i) +
                                         " is not deterministic");
            }
            t.entries[static_cast<std::size_t>(i - 1)][axis == Axis::X ? 0 : 1] = o;
        }
    }
    return t;
}

ProtocolRound honest_round(std::uint64_t rng_seed) {
    SeededRng rng(rng_seed);
    const StateVector psi = initial_state();
    const RBasis basis = r_basis();

    const Axis axis = rng.bernoulli(0.5) ? Axis::X : Axis::Z;
    const HermitianOperator p_plus = lift_to_channel(pauli_projector(axis, Outcome::plus));
    const StateVector branch_plus = apply(p_plus.matrix(), psi);

    const Outcome outcome = rng.bernoulli(branch_plus.norm_sq()) ? Outcome::plus : Outcome::minus;
    const StateVector collapsed =
        (outcome == Outcome::plus)
            ? branch_plus.normalized()
            : apply(lift_to_channel(pauli_projector(axis, Outcome::minus)).matrix(), psi).normalized();

    std::array<double, 4> weights{};
    for (int i = 1; i <= 4; ++i) {
        weights[static_cast<std::size_t>(i - 1)] = std::norm(inner_product(basis.r(i), collapsed));
    }
    const int detection = rng.pick(weights) + 1;

    ProtocolRound round;
    round.bob_axis = axis;
    round.bob_outcome = outcome;
    round.alice_detection = detection;
    round.subsequence =
        (detection == 1 || detection == 4) ? Subsequence::S14 : Subsequence::S23;
    return round;
}

}  // namespace ppqkd
