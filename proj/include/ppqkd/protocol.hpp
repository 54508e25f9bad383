// The honest pre/post-selection key-distribution protocol: entangled pair
// preparation, the four-state R measurement basis, Pauli projectors on the
// channel qubit, the pre/post-selection (ABL) conditional probability, the
// deterministic outcome table and an attack-free sampled protocol round.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ppqkd/qmath.hpp"

namespace ppqkd {

enum class Axis { X, Y, Z };
enum class Outcome : int { plus = +1, minus = -1 };
enum class Subsequence { S14, S23 };

inline int value(Outcome o) { return static_cast<int>(o); }
inline Outcome opposite(Outcome o) { return o == Outcome::plus ? Outcome::minus : Outcome::plus; }

const char* to_string(Axis axis);

// The four entangled eigenstates of Alice's final joint observable R,
// pairwise orthonormal and complete on the two-qubit space. r1/r4 yield key
// bits (subsequence S14), r2/r3 are eavesdropping checks (S23).
struct RBasis {
    std::array<StateVector, 4> vectors;

    // 1-based, matching the conventional labels r1..r4.
    const StateVector& r(int index) const { return vectors.at(static_cast<std::size_t>(index - 1)); }
};

// (1/sqrt2)(|00> + |11>): Alice's maximally entangled preparation. The first
// tensor factor is Alice's retained qubit, the second the channel qubit.
StateVector initial_state();

RBasis r_basis();

// Projector onto the given outcome of a Pauli observable on one qubit.
// Z maps +1 -> |0>, -1 -> |1>; X maps +1 -> |+>, -1 -> |->.
HermitianOperator pauli_projector(Axis axis, Outcome outcome);

// identity (x) P: extends a channel-qubit projector to the retained+channel
// pair under the 2j+k flattening convention.
HermitianOperator lift_to_channel(const HermitianOperator& p);

// Pre/post-selection conditional probability of the intermediate outcome
// `which`: |<post|P_which|pre>|^2 / sum_j |<post|P_j|pre>|^2. The projector
// list must resolve the identity (within tol::probability). Returns nullopt
// when the denominator is numerically zero (below tol::abl_denominator);
// attack sweeps legitimately hit such measure-zero branches, so this is a
// value, not an error.
std::optional<double> abl_probability(const StateVector& pre_state, const StateVector& post_state,
                                      const std::vector<HermitianOperator>& projectors,
                                      std::size_t which);

// Deterministic outcome o for each (detection r_i, axis) pair: the ABL
// probability of o is 1 and of the opposite outcome 0, both within
// tol::hermitian. Throws if any entry fails to be deterministic.
struct Table1 {
    // outcome(i, axis) for i in 1..4, axis in {X, Z}
    Outcome outcome(int r_index, Axis axis) const;
    std::array<std::array<Outcome, 2>, 4> entries;  // [r-1][0]=X, [r-1][1]=Z
};

Table1 table1();

struct ProtocolRound {
    Axis bob_axis = Axis::X;
    Outcome bob_outcome = Outcome::plus;
    int alice_detection = 1;  // 1..4
    Subsequence subsequence = Subsequence::S14;
};

// One attack-free round, fully determined by the seed: Bob picks X or Z with
// probability 1/2 each, his outcome and Alice's R detection are Born-sampled.
// The result always satisfies the deterministic table.
ProtocolRound honest_round(std::uint64_t rng_seed);

}  // namespace ppqkd
