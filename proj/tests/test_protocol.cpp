#include <array>
#include <cmath>
#include <map>

#include "doctest.h"
#include "ppqkd/protocol.hpp"

using namespace ppqkd;

namespace {
const double kSqrtHalf = 1.0 / std::sqrt(2.0);
}

TEST_CASE("initial state") {
    const StateVector psi = initial_state();
    CHECK(psi.dim() == 4);
    CHECK(psi[0].real() == doctest::Approx(kSqrtHalf).epsilon(1e-15));
    CHECK(std::abs(psi[1]) == doctest::Approx(0.0));
    CHECK(std::abs(psi[2]) == doctest::Approx(0.0));
    CHECK(psi[3].real() == doctest::Approx(kSqrtHalf).epsilon(1e-15));
    CHECK(psi.is_normalized());
    CHECK(std::abs(inner_product(psi, StateVector::basis(4, 1))) == doctest::Approx(0.0));
}

TEST_CASE("r basis amplitudes, orthonormality, completeness") {
    const RBasis basis = r_basis();

    CHECK(basis.r(1)[0].real() == doctest::Approx(kSqrtHalf).epsilon(1e-15));
    CHECK(basis.r(1)[0].imag() == doctest::Approx(0.0));
    // r1 amplitude on |01> is (1/2) e^{i pi/4}
    CHECK(basis.r(1)[1].real() == doctest::Approx(0.5 * kSqrtHalf).epsilon(1e-15));
    CHECK(basis.r(1)[1].imag() == doctest::Approx(0.5 * kSqrtHalf).epsilon(1e-15));
    // r3/r4 live on the |11> side
    CHECK(basis.r(3)[3].real() == doctest::Approx(kSqrtHalf).epsilon(1e-15));
    CHECK(std::abs(basis.r(3)[0]) == doctest::Approx(0.0));

    CHECK(std::abs(inner_product(basis.r(3), basis.r(4))) < 1e-12);
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
            const double expect = (i == j) ? 1.0 : 0.0;
            CHECK(std::abs(inner_product(basis.r(i), basis.r(j)) - Complex{expect, 0.0}) < 1e-12);
        }
    }

    ComplexMatrix sum(4);
    for (int i = 1; i <= 4; ++i) sum = sum + outer_product(basis.r(i));
    const ComplexMatrix gap = sum - ComplexMatrix::identity(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(std::abs(gap.at(r, c)) < 1e-12);
}

TEST_CASE("pauli projectors") {
    const ComplexMatrix zp = pauli_projector(Axis::Z, Outcome::plus).matrix();
    CHECK(zp.at(0, 0) == Complex{1.0, 0.0});
    CHECK(zp.at(1, 1) == Complex{0.0, 0.0});

    const ComplexMatrix xp = pauli_projector(Axis::X, Outcome::plus).matrix();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(xp.at(r, c) == Complex{0.5, 0.0});

    const ComplexMatrix yp = pauli_projector(Axis::Y, Outcome::plus).matrix();
    CHECK(yp.at(0, 1) == Complex{0.0, -0.5});
    CHECK(yp.at(1, 0) == Complex{0.0, 0.5});

    for (Axis axis : {Axis::X, Axis::Y, Axis::Z}) {
        const ComplexMatrix plus = pauli_projector(axis, Outcome::plus).matrix();
        const ComplexMatrix minus = pauli_projector(axis, Outcome::minus).matrix();
        const ComplexMatrix idem = plus * plus - plus;
        const ComplexMatrix cross = plus * minus;
        const ComplexMatrix comp = plus + minus - ComplexMatrix::identity(2);
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                CHECK(std::abs(idem.at(r, c)) < 1e-12);
                CHECK(std::abs(cross.at(r, c)) < 1e-12);
                CHECK(std::abs(comp.at(r, c)) < 1e-12);
            }
        }
    }
}

TEST_CASE("lift to channel") {
    ComplexMatrix d(2);
    d.set(0, 0, Complex{1.0, 0.0});
    const ComplexMatrix lifted = lift_to_channel(HermitianOperator(d)).matrix();
    for (int k = 0; k < 4; ++k) {
        const double expect = (k == 0 || k == 2) ? 1.0 : 0.0;
        CHECK(lifted.at(k, k) == Complex{expect, 0.0});
    }

    const ComplexMatrix id = lift_to_channel(HermitianOperator(ComplexMatrix::identity(2))).matrix();
    const ComplexMatrix gap = id - ComplexMatrix::identity(4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(std::abs(gap.at(r, c)) == doctest::Approx(0.0));

    // <r1| P(x=+1 on the channel) |psi> = 1/2
    const StateVector projected =
        apply(lift_to_channel(pauli_projector(Axis::X, Outcome::plus)).matrix(), initial_state());
    const Complex amp = inner_product(r_basis().r(1), projected);
    CHECK(amp.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(amp.imag() == doctest::Approx(0.0));
}

TEST_CASE("abl probability: deterministic cases") {
    const StateVector psi = initial_state();
    const RBasis basis = r_basis();
    const std::vector<HermitianOperator> x_set{
        lift_to_channel(pauli_projector(Axis::X, Outcome::plus)),
        lift_to_channel(pauli_projector(Axis::X, Outcome::minus))};
    const std::vector<HermitianOperator> z_set{
        lift_to_channel(pauli_projector(Axis::Z, Outcome::plus)),
        lift_to_channel(pauli_projector(Axis::Z, Outcome::minus))};

    CHECK(*abl_probability(psi, basis.r(1), x_set, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(*abl_probability(psi, basis.r(1), x_set, 1) == doctest::Approx(0.0));
    CHECK(*abl_probability(psi, basis.r(1), z_set, 0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("abl probability: contract violations and the undefined branch") {
    const StateVector psi = initial_state();
    const RBasis basis = r_basis();

    // Incomplete projector set: only one X projector.
    const std::vector<HermitianOperator> incomplete{
        lift_to_channel(pauli_projector(Axis::X, Outcome::plus))};
    CHECK_THROWS_AS((void)abl_probability(psi, basis.r(1), incomplete, 0), std::invalid_argument);

    // Zero denominator: pre = |00>, post = |01>, z projectors keep them
    // orthogonal on every branch. Must be a value, not an exception.
    const std::vector<HermitianOperator> z_set{
        lift_to_channel(pauli_projector(Axis::Z, Outcome::plus)),
        lift_to_channel(pauli_projector(Axis::Z, Outcome::minus))};
    const auto undefined =
        abl_probability(StateVector::basis(4, 0), StateVector::basis(4, 1), z_set, 0);
    CHECK_FALSE(undefined.has_value());

    CHECK_THROWS_AS((void)abl_probability(psi, StateVector::basis(2, 0), z_set, 0),
                    std::invalid_argument);
}

TEST_CASE("deterministic outcome table") {
    const Table1 t = table1();
    CHECK(t.outcome(1, Axis::X) == Outcome::plus);
    CHECK(t.outcome(1, Axis::Z) == Outcome::plus);
    CHECK(t.outcome(2, Axis::X) == Outcome::minus);
    CHECK(t.outcome(2, Axis::Z) == Outcome::plus);
    CHECK(t.outcome(3, Axis::X) == Outcome::plus);
    CHECK(t.outcome(3, Axis::Z) == Outcome::minus);
    CHECK(t.outcome(4, Axis::X) == Outcome::minus);
    CHECK(t.outcome(4, Axis::Z) == Outcome::minus);
}

TEST_CASE("honest rounds satisfy the table and the subsequence rule") {
    const Table1 t = table1();
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        const ProtocolRound round = honest_round(seed);
        CHECK(t.outcome(round.alice_detection, round.bob_axis) == round.bob_outcome);
        const bool s14 = round.alice_detection == 1 || round.alice_detection == 4;
        CHECK(round.subsequence == (s14 ? Subsequence::S14 : Subsequence::S23));
    }
}

TEST_CASE("honest round detection frequencies are uniform") {
    constexpr int kTrials = 100000;
    std::array<int, 4> counts{};
    std::map<Axis, int> axis_counts;
    for (int k = 0; k < kTrials; ++k) {
        const ProtocolRound round = honest_round(static_cast<std::uint64_t>(k) + 31337);
        ++counts[static_cast<std::size_t>(round.alice_detection - 1)];
        ++axis_counts[round.bob_axis];
    }
    const double sigma = std::sqrt(0.25 * 0.75 * kTrials);
    double chi2 = 0.0;
    for (int c : counts) {
        const double d = c - kTrials / 4.0;
        CHECK(std::abs(d) <= 4.0 * sigma);
        chi2 += d * d / (kTrials / 4.0);
    }
    CHECK(chi2 <= 3.0 + 3.0 * std::sqrt(6.0));  // 3-sigma band for chi-square, 3 dof

    const double axis_sigma = std::sqrt(0.25 * kTrials);
    CHECK(std::abs(axis_counts[Axis::X] - kTrials / 2.0) <= 4.0 * axis_sigma);
}

TEST_CASE("honest round is deterministic in the seed") {
    const ProtocolRound a = honest_round(987654321);
    const ProtocolRound b = honest_round(987654321);
    CHECK(a.bob_axis == b.bob_axis);
    CHECK(a.bob_outcome == b.bob_outcome);
    CHECK(a.alice_detection == b.alice_detection);
}
