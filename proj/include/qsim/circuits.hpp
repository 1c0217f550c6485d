#pragma once

#include "qsim/circuit.hpp"

#include <cstddef>
#include <functional>
#include <random>

namespace qsim {

/// H then a chain of controlled-R_k per qubit, from the top qubit down.
/// with_swaps appends the bit-reversal SWAP layer so the output is the
/// standard DFT ordering.
[[nodiscard]] Circuit build_qft(int n_qubits, bool with_swaps = false);

struct UniversalSpec {
    int n_qubits = 2;
    /// k for rotation slot s (global rotation counter). Defaults to 1 + s mod N.
    std::function<int(std::size_t slot)> k_schedule;
};

/// N + 1 layers of R_k on every qubit interleaved with N nearest-neighbour
/// CNOT chains: N(N+1) rotations plus N(N-1) CNOTs, 2N^2 gates total.
[[nodiscard]] Circuit build_universal(const UniversalSpec &spec);

/// H(0) followed by CNOT(i, i+1) for i = 0..N-2.
[[nodiscard]] Circuit build_ghz(int n_qubits);

[[nodiscard]] Gate inverse_gate(const Gate &gate);

/// Adjoint circuit: gates reversed, each inverted exactly (no global-phase slack).
[[nodiscard]] Circuit inverse_circuit(const Circuit &circuit);

// Random generation for verification and property tests.

[[nodiscard]] std::vector<Complex> random_unitary(std::mt19937_64 &gen, std::size_t dim);
[[nodiscard]] Matrix2 random_unitary2(std::mt19937_64 &gen);

struct RandomCircuitOptions {
    int n_qubits = 2;
    std::size_t n_gates = 10;
    /// DENSE targets are drawn below this qubit so they stay local for every
    /// partitioning under test; 0 disables DENSE.
    int dense_qubit_limit = 0;
};

/// Uniform over the full gate set, random operands, random angles/matrices.
[[nodiscard]] Circuit random_circuit(std::mt19937_64 &gen, const RandomCircuitOptions &options);

} // namespace qsim
