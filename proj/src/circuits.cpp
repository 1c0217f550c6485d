#include "qsim/circuits.hpp"

#include <string>

namespace qsim {

Circuit build_qft(int n_qubits, bool with_swaps) {
    Circuit circuit(n_qubits);
    for (int i = n_qubits - 1; i >= 0; --i) {
        circuit.add(Gate::h(i));
        for (int k = 2; k <= i + 1; ++k) {
            circuit.add(Gate::crk(i - k + 1, i, k));
        }
    }
    if (with_swaps) {
        for (int j = 0; j < n_qubits / 2; ++j) {
            circuit.add(Gate::swap(j, n_qubits - 1 - j));
        }
    }
    return circuit;
}

Circuit build_universal(const UniversalSpec &spec) {
    const int n = spec.n_qubits;
    if (n < 2) {
        throw Error("universal circuit needs at least 2 qubits, got " + std::to_string(n));
    }
    const auto k_for = [&](std::size_t slot) {
        return spec.k_schedule ? spec.k_schedule(slot)
                               : 1 + static_cast<int>(slot % static_cast<std::size_t>(n));
    };
    Circuit circuit(n);
    std::size_t slot = 0;
    for (int layer = 0; layer <= n; ++layer) {
        for (int q = 0; q < n; ++q) {
            circuit.add(Gate::rk(q, k_for(slot++)));
        }
        if (layer < n) {
            for (int q = 0; q + 1 < n; ++q) {
                circuit.add(Gate::cnot(q, q + 1));
            }
        }
    }
    return circuit;
}

Circuit build_ghz(int n_qubits) {
    if (n_qubits < 2) {
        throw Error("GHZ circuit needs at least 2 qubits");
    }
    Circuit circuit(n_qubits);
    circuit.add(Gate::h(0));
    for (int i = 0; i + 1 < n_qubits; ++i) {
        circuit.add(Gate::cnot(i, i + 1));
    }
    return circuit;
}

namespace {

std::vector<Complex> adjoint(const std::vector<Complex> &matrix, std::size_t dim) {
    std::vector<Complex> out(dim * dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            out[c * dim + r] = std::conj(matrix[r * dim + c]);
        }
    }
    return out;
}

Matrix2 adjoint2(const Matrix2 &m) {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

} // namespace

Gate inverse_gate(const Gate &gate) {
    switch (gate.kind()) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::SWAP:
        return gate;
    case GateKind::RZ:
        return Gate::rz(gate.target(), -gate.angle());
    case GateKind::S:
    case GateKind::T:
    case GateKind::RK:
    case GateKind::U1Q:
        return Gate::u1q(gate.target(), adjoint2(gate.matrix2()));
    case GateKind::CRK:
    case GateKind::CU1Q:
        return Gate::cu1q(gate.control(), gate.target(), adjoint2(gate.matrix2()));
    case GateKind::DENSE: {
        const std::size_t dim = std::size_t{1} << gate.qubits().size();
        return Gate::dense({gate.qubits().begin(), gate.qubits().end()},
                           adjoint(gate.matrix(), dim));
    }
    }
    throw Error("inverse_gate: unhandled kind");
}

Circuit inverse_circuit(const Circuit &circuit) {
    Circuit inverse(circuit.n_qubits());
    for (auto it = circuit.gates().rbegin(); it != circuit.gates().rend(); ++it) {
        inverse.add(inverse_gate(*it));
    }
    return inverse;
}

} // namespace qsim
