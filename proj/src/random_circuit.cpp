#include "qsim/circuits.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

namespace qsim {

std::vector<Complex> random_unitary(std::mt19937_64 &gen, std::size_t dim) {
    // Modified Gram-Schmidt on the columns of a complex Gaussian matrix.
    std::normal_distribution<double> normal;
    std::vector<Complex> m(dim * dim);
    for (auto &entry : m) {
        entry = {normal(gen), normal(gen)};
    }
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            Complex dot{0.0, 0.0};
            for (std::size_t r = 0; r < dim; ++r) {
                dot += std::conj(m[r * dim + prev]) * m[r * dim + c];
            }
            for (std::size_t r = 0; r < dim; ++r) {
                m[r * dim + c] -= dot * m[r * dim + prev];
            }
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            norm += std::norm(m[r * dim + c]);
        }
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < dim; ++r) {
            m[r * dim + c] /= norm;
        }
    }
    return m;
}

Matrix2 random_unitary2(std::mt19937_64 &gen) {
    const auto m = random_unitary(gen, 2);
    return {m[0], m[1], m[2], m[3]};
}

namespace {

std::vector<int> distinct_qubits(std::mt19937_64 &gen, int limit, int count) {
    std::vector<int> all(static_cast<std::size_t>(limit));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), gen);
    all.resize(static_cast<std::size_t>(count));
    return all;
}

} // namespace

Circuit random_circuit(std::mt19937_64 &gen, const RandomCircuitOptions &options) {
    const int n = options.n_qubits;
    Circuit circuit(n);

    std::vector<GateKind> kinds{GateKind::X,   GateKind::Y,    GateKind::Z,    GateKind::H,
                                GateKind::S,   GateKind::T,    GateKind::RZ,   GateKind::RK,
                                GateKind::U1Q};
    if (n >= 2) {
        kinds.insert(kinds.end(), {GateKind::CNOT, GateKind::CRK, GateKind::CU1Q, GateKind::SWAP});
    }
    if (options.dense_qubit_limit >= 1) {
        kinds.push_back(GateKind::DENSE);
    }

    std::uniform_int_distribution<std::size_t> pick_kind(0, kinds.size() - 1);
    std::uniform_real_distribution<double> angle(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> pick_k(1, 6);

    for (std::size_t g = 0; g < options.n_gates; ++g) {
        const GateKind kind = kinds[pick_kind(gen)];
        const bool two_qubit = kind == GateKind::CNOT || kind == GateKind::CRK ||
                               kind == GateKind::CU1Q || kind == GateKind::SWAP;
        if (kind == GateKind::DENSE) {
            const int limit = std::min(options.dense_qubit_limit, n);
            std::uniform_int_distribution<int> pick_m(1, std::min(3, limit));
            const int m = pick_m(gen);
            auto targets = distinct_qubits(gen, limit, m);
            circuit.add(Gate::dense(std::move(targets), random_unitary(gen, std::size_t{1} << m)));
            continue;
        }
        const auto q = distinct_qubits(gen, n, two_qubit ? 2 : 1);
        switch (kind) {
        case GateKind::X: circuit.add(Gate::x(q[0])); break;
        case GateKind::Y: circuit.add(Gate::y(q[0])); break;
        case GateKind::Z: circuit.add(Gate::z(q[0])); break;
        case GateKind::H: circuit.add(Gate::h(q[0])); break;
        case GateKind::S: circuit.add(Gate::s(q[0])); break;
        case GateKind::T: circuit.add(Gate::t(q[0])); break;
        case GateKind::RZ: circuit.add(Gate::rz(q[0], angle(gen))); break;
        case GateKind::RK: circuit.add(Gate::rk(q[0], pick_k(gen))); break;
        case GateKind::U1Q: circuit.add(Gate::u1q(q[0], random_unitary2(gen))); break;
        case GateKind::CNOT: circuit.add(Gate::cnot(q[0], q[1])); break;
        case GateKind::CRK: circuit.add(Gate::crk(q[0], q[1], pick_k(gen))); break;
        case GateKind::CU1Q: circuit.add(Gate::cu1q(q[0], q[1], random_unitary2(gen))); break;
        case GateKind::SWAP: circuit.add(Gate::swap(q[0], q[1])); break;
        case GateKind::DENSE: break;
        }
    }
    return circuit;
}

} // namespace qsim
