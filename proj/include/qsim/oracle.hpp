#pragma once

#include "qsim/circuit.hpp"
#include "qsim/measure.hpp"

#include <span>
#include <vector>

/// Single-process reference simulator used as ground truth in tests and
/// `qsim verify`. Deliberately unoptimized and independent of the kernels:
/// every gate is turned into its full matrix over its operands and applied by
/// a plain gather/multiply/scatter over the whole vector.
namespace qsim::oracle {

inline constexpr int kMaxDenseQubits = 20;
inline constexpr int kMaxExpvalQubits = 14;

class DenseState {
  public:
    explicit DenseState(int n_qubits, Index basis_index = 0);
    DenseState(int n_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<Complex> &amplitudes() const { return amplitudes_; }
    [[nodiscard]] std::vector<Complex> &amplitudes() { return amplitudes_; }

  private:
    int n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Matrix of gate over its operands; sub-index bit j belongs to qubits()[j].
[[nodiscard]] std::vector<Complex> reference_matrix(const Gate &gate);

void dense_apply(DenseState &state, const Gate &gate);
void dense_apply(DenseState &state, const Circuit &circuit);

/// a_j = 2^{-N/2} exp(2 pi i x j / 2^N).
[[nodiscard]] std::vector<Complex> dft_reference(Index x, int n_qubits);

/// <psi|H|psi> with H applied term by term; the imaginary part is the
/// Hermiticity residue.
[[nodiscard]] Complex dense_expval_complex(const DenseState &state,
                                           std::span<const PauliTerm> terms);
[[nodiscard]] double dense_expval(const DenseState &state, std::span<const PauliTerm> terms);

[[nodiscard]] double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);

} // namespace qsim::oracle
