#include "qsim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsim::oracle {

namespace {

const double kPi = std::acos(-1.0);

void check_size(int n_qubits, int limit) {
    if (n_qubits < 1 || n_qubits > limit) {
        throw Error("oracle supports 1.." + std::to_string(limit) + " qubits, got " +
                    std::to_string(n_qubits));
    }
}

std::vector<Complex> one_qubit(const Gate &gate) {
    const Complex i{0.0, 1.0};
    switch (gate.kind()) {
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -i, i, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H: {
        const double h = 1.0 / std::sqrt(2.0);
        return {h, h, h, -h};
    }
    case GateKind::S: return {1.0, 0.0, 0.0, i};
    case GateKind::T: return {1.0, 0.0, 0.0, std::exp(i * (kPi / 4.0))};
    case GateKind::RZ:
        return {std::exp(-i * (gate.angle() / 2.0)), 0.0, 0.0, std::exp(i * (gate.angle() / 2.0))};
    case GateKind::RK:
    case GateKind::CRK:
        return {1.0, 0.0, 0.0, std::exp(i * (2.0 * kPi / std::pow(2.0, gate.k())))};
    case GateKind::CNOT: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::U1Q:
    case GateKind::CU1Q: return gate.matrix();
    default: break;
    }
    throw Error("oracle: no single-qubit matrix for this gate");
}

} // namespace

DenseState::DenseState(int n_qubits, Index basis_index) : n_qubits_(n_qubits) {
    check_size(n_qubits, kMaxDenseQubits);
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    if (basis_index >= amplitudes_.size()) {
        throw Error("oracle: basis index out of range");
    }
    amplitudes_[basis_index] = 1.0;
}

DenseState::DenseState(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    check_size(n_qubits, kMaxDenseQubits);
    if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
        throw Error("oracle: amplitude count does not match qubit count");
    }
}

std::vector<Complex> reference_matrix(const Gate &gate) {
    switch (gate.kind()) {
    case GateKind::CNOT:
    case GateKind::CRK:
    case GateKind::CU1Q: {
        // Operands {control, target}: sub-index = control + 2 * target.
        const auto u = one_qubit(gate);
        std::vector<Complex> m(16, 0.0);
        m[0 * 4 + 0] = 1.0;
        m[2 * 4 + 2] = 1.0;
        m[1 * 4 + 1] = u[0];
        m[1 * 4 + 3] = u[1];
        m[3 * 4 + 1] = u[2];
        m[3 * 4 + 3] = u[3];
        return m;
    }
    case GateKind::SWAP: {
        std::vector<Complex> m(16, 0.0);
        m[0 * 4 + 0] = 1.0;
        m[1 * 4 + 2] = 1.0;
        m[2 * 4 + 1] = 1.0;
        m[3 * 4 + 3] = 1.0;
        return m;
    }
    case GateKind::DENSE:
        return gate.matrix();
    default:
        return one_qubit(gate);
    }
}

void dense_apply(DenseState &state, const Gate &gate) {
    const int n = state.n_qubits();
    const auto ops = gate.qubits();
    for (const int q : ops) {
        if (q >= n) {
            throw Error("oracle: operand out of range");
        }
    }
    const auto matrix = reference_matrix(gate);
    const std::size_t dim = std::size_t{1} << ops.size();

    Index op_mask = 0;
    for (const int q : ops) {
        op_mask |= Index{1} << q;
    }
    auto &amps = state.amplitudes();
    std::vector<Index> where(dim);
    std::vector<Complex> in(dim);
    for (Index base = 0; base < amps.size(); ++base) {
        if ((base & op_mask) != 0) {
            continue;
        }
        for (std::size_t s = 0; s < dim; ++s) {
            Index index = base;
            for (std::size_t j = 0; j < ops.size(); ++j) {
                if ((s >> j) & 1U) {
                    index |= Index{1} << ops[j];
                }
            }
            where[s] = index;
            in[s] = amps[index];
        }
        for (std::size_t r = 0; r < dim; ++r) {
            Complex acc = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                acc += matrix[r * dim + c] * in[c];
            }
            amps[where[r]] = acc;
        }
    }
}

void dense_apply(DenseState &state, const Circuit &circuit) {
    if (circuit.n_qubits() != state.n_qubits()) {
        throw Error("oracle: circuit and state qubit counts differ");
    }
    for (const Gate &gate : circuit.gates()) {
        dense_apply(state, gate);
    }
}

std::vector<Complex> dft_reference(Index x, int n_qubits) {
    check_size(n_qubits, kMaxDenseQubits);
    const Index dim = Index{1} << n_qubits;
    if (x >= dim) {
        throw Error("dft_reference: x out of range");
    }
    std::vector<Complex> out(dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Index j = 0; j < dim; ++j) {
        // Reduce x*j mod 2^N first so the angle stays accurate.
        const Index phase_index = (x * j) & (dim - 1);
        const double theta = 2.0 * kPi * static_cast<double>(phase_index) / static_cast<double>(dim);
        out[j] = scale * Complex{std::cos(theta), std::sin(theta)};
    }
    return out;
}

Complex dense_expval_complex(const DenseState &state, std::span<const PauliTerm> terms) {
    check_size(state.n_qubits(), kMaxExpvalQubits);
    const auto &psi = state.amplitudes();
    const Complex i{0.0, 1.0};
    Complex total = 0.0;
    std::vector<Complex> applied(psi.size());
    for (const auto &term : terms) {
        // P|psi> factor by factor.
        applied = psi;
        for (const auto &[q, p] : term.factors) {
            if (q >= state.n_qubits()) {
                throw Error("oracle: Pauli qubit out of range");
            }
            const Index bit = Index{1} << q;
            std::vector<Complex> next(applied.size());
            for (Index idx = 0; idx < applied.size(); ++idx) {
                const bool one = (idx & bit) != 0;
                switch (p) {
                case Pauli::X: next[idx ^ bit] = applied[idx]; break;
                case Pauli::Y: next[idx ^ bit] = (one ? -i : i) * applied[idx]; break;
                case Pauli::Z: next[idx] = one ? -applied[idx] : applied[idx]; break;
                }
            }
            applied.swap(next);
        }
        Complex inner = 0.0;
        for (Index idx = 0; idx < psi.size(); ++idx) {
            inner += std::conj(psi[idx]) * applied[idx];
        }
        total += term.coefficient * inner;
    }
    return total;
}

double dense_expval(const DenseState &state, std::span<const PauliTerm> terms) {
    return dense_expval_complex(state, terms).real();
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error("max_abs_diff: length mismatch");
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]));
    }
    return worst;
}

} // namespace qsim::oracle
