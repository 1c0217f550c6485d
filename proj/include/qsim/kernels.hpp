#pragma once

#include "qsim/gate.hpp"
#include "qsim/topology.hpp"

#include <cstdint>
#include <optional>
#include <span>

/// Gate arithmetic on one rank's slice of amplitudes.
///
/// Slices are indexed by offset; bit b of the offset is local qubit b. The
/// specialized kernels (Pauli-X/Y, Hadamard, phases) touch only the nonzero
/// entries of their matrix; the *_general paths do full 2x2 arithmetic and
/// serve U1Q/CU1Q and benchmark comparisons.
namespace qsim::kernels {

using Slice = std::span<Complex>;
using ConstSlice = std::span<const Complex>;

/// Complex multiplications performed by kernels on the calling thread.
[[nodiscard]] std::uint64_t multiplication_count();
void reset_multiplication_count();

void apply_pauli_x(Slice slice, int t_bit);
void apply_pauli_y(Slice slice, int t_bit);
void apply_hadamard(Slice slice, int t_bit);

/// Full 2x2 update of every (j, j + 2^t_bit) pair.
void apply_1q_general(Slice slice, const Matrix2 &matrix, int t_bit);

/// Dispatches to the specialized kernel for X, Y, H; anything else goes general.
void apply_1q_pairs(Slice slice, GateKind kind, const Matrix2 &matrix, int t_bit);

/// Pair update restricted to offsets whose bit c_bit is 1.
void apply_controlled_x(Slice slice, int c_bit, int t_bit);
void apply_controlled_general(Slice slice, const Matrix2 &matrix, int c_bit, int t_bit);
void apply_controlled_pairs(Slice slice, GateKind kind, const Matrix2 &matrix, int c_bit,
                            int t_bit);

/// Diagonal action: amplitudes with target bit b get phase_b, provided the
/// optional control bit is 1. Target and control are global qubit indices;
/// non-local ones resolve to a per-rank constant.
struct DiagonalPhase {
    int target;
    std::optional<int> control;
    Complex phase0{1.0, 0.0};
    Complex phase1{1.0, 0.0};
};

[[nodiscard]] DiagonalPhase diagonal_phase(const Gate &gate);

void apply_diag(Slice slice, const Topology &topology, const DiagonalPhase &phase);

/**
 * Updates mine using the partner's slice after a full exchange over target
 * rank bit; my_side_bit is this rank's value of that bit. With
 * local_control_bit set, only offsets whose control bit is 1 change.
 * X/CNOT reduce to adopting the partner's amplitudes.
 */
void combine_after_exchange(Slice mine, ConstSlice theirs, GateKind kind, const Matrix2 &matrix,
                            int my_side_bit, std::optional<int> local_control_bit = std::nullopt);

/// m-qubit dense update (m <= 3). Sub-index bit j of the matrix maps to target_bits[j].
void apply_dense_local(Slice slice, std::span<const Complex> matrix,
                       std::span<const int> target_bits);

void apply_swap_local(Slice slice, int a_bit, int b_bit);

} // namespace qsim::kernels
