#include "qsim/gate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsim {

std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::T: return "T";
    case GateKind::RZ: return "RZ";
    case GateKind::RK: return "RK";
    case GateKind::U1Q: return "U1Q";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CRK: return "CRK";
    case GateKind::CU1Q: return "CU1Q";
    case GateKind::SWAP: return "SWAP";
    case GateKind::DENSE: return "DENSE";
    }
    return "?";
}

double unitarity_defect(std::span<const Complex> matrix, std::size_t dim) {
    double defect = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            Complex dot{0.0, 0.0};
            for (std::size_t r = 0; r < dim; ++r) {
                dot += std::conj(matrix[r * dim + i]) * matrix[r * dim + j];
            }
            const Complex expected = (i == j) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            defect = std::max(defect, std::abs(dot - expected));
        }
    }
    return defect;
}

namespace {

void require_unitary(std::span<const Complex> matrix, std::size_t dim) {
    const double defect = unitarity_defect(matrix, dim);
    if (!(defect <= kUnitarityTolerance)) {
        throw Error("gate matrix is not unitary (defect " + std::to_string(defect) + ")");
    }
}

} // namespace

Complex rk_phase(int k) {
    return std::polar(1.0, std::numbers::pi / std::ldexp(1.0, k - 1));
}

Gate::Gate(GateKind kind, std::vector<int> qubits) : kind_(kind), qubits_(std::move(qubits)) {
    for (std::size_t i = 0; i < qubits_.size(); ++i) {
        if (qubits_[i] < 0) {
            throw Error(std::string(gate_name(kind_)) + ": negative qubit operand");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits_[i] == qubits_[j]) {
                throw Error(std::string(gate_name(kind_)) + ": duplicate qubit operand " +
                            std::to_string(qubits_[i]));
            }
        }
    }
}

Gate Gate::rz(int target, double theta) {
    if (!std::isfinite(theta)) {
        throw Error("RZ: angle must be finite");
    }
    Gate gate(GateKind::RZ, {target});
    gate.angle_ = theta;
    return gate;
}

Gate Gate::rk(int target, int k) {
    if (k < 1) {
        throw Error("RK: k must be >= 1, got " + std::to_string(k));
    }
    Gate gate(GateKind::RK, {target});
    gate.k_ = k;
    return gate;
}

Gate Gate::crk(int control, int target, int k) {
    if (k < 1) {
        throw Error("CRK: k must be >= 1, got " + std::to_string(k));
    }
    Gate gate(GateKind::CRK, {control, target});
    gate.k_ = k;
    return gate;
}

Gate Gate::u1q(int target, const Matrix2 &matrix) {
    Gate gate(GateKind::U1Q, {target});
    require_unitary(matrix, 2);
    gate.matrix_.assign(matrix.begin(), matrix.end());
    return gate;
}

Gate Gate::cu1q(int control, int target, const Matrix2 &matrix) {
    Gate gate(GateKind::CU1Q, {control, target});
    require_unitary(matrix, 2);
    gate.matrix_.assign(matrix.begin(), matrix.end());
    return gate;
}

Gate Gate::dense(std::vector<int> targets, std::vector<Complex> matrix) {
    if (targets.empty() || targets.size() > 3) {
        throw Error("DENSE: 1 to 3 targets supported, got " + std::to_string(targets.size()));
    }
    const std::size_t dim = std::size_t{1} << targets.size();
    if (matrix.size() != dim * dim) {
        throw Error("DENSE: expected " + std::to_string(dim * dim) + " matrix entries, got " +
                    std::to_string(matrix.size()));
    }
    Gate gate(GateKind::DENSE, std::move(targets));
    require_unitary(matrix, dim);
    gate.matrix_ = std::move(matrix);
    return gate;
}

bool Gate::is_controlled() const {
    return kind_ == GateKind::CNOT || kind_ == GateKind::CRK || kind_ == GateKind::CU1Q;
}

int Gate::control() const {
    if (!is_controlled()) {
        throw Error(std::string(gate_name(kind_)) + " has no control qubit");
    }
    return qubits_[0];
}

int Gate::target() const {
    if (is_controlled()) {
        return qubits_[1];
    }
    if (qubits_.size() != 1) {
        throw Error(std::string(gate_name(kind_)) + " has no single target qubit");
    }
    return qubits_[0];
}

bool Gate::is_diagonal() const {
    switch (kind_) {
    case GateKind::Z:
    case GateKind::S:
    case GateKind::T:
    case GateKind::RZ:
    case GateKind::RK:
    case GateKind::CRK:
        return true;
    default:
        return false;
    }
}

Matrix2 Gate::matrix2() const {
    using namespace std::complex_literals;
    const double r = std::numbers::sqrt2 / 2.0;
    switch (kind_) {
    case GateKind::X:
    case GateKind::CNOT:
        return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y:
        return {0.0, -1i, 1i, 0.0};
    case GateKind::Z:
        return {1.0, 0.0, 0.0, -1.0};
    case GateKind::H:
        return {r, r, r, -r};
    case GateKind::S:
        return {1.0, 0.0, 0.0, 1i};
    case GateKind::T:
        return {1.0, 0.0, 0.0, std::polar(1.0, std::numbers::pi / 4.0)};
    case GateKind::RZ:
        return {std::polar(1.0, -angle_ / 2.0), 0.0, 0.0, std::polar(1.0, angle_ / 2.0)};
    case GateKind::RK:
    case GateKind::CRK:
        return {1.0, 0.0, 0.0, rk_phase(k_)};
    case GateKind::U1Q:
    case GateKind::CU1Q:
        return {matrix_[0], matrix_[1], matrix_[2], matrix_[3]};
    case GateKind::SWAP:
    case GateKind::DENSE:
        break;
    }
    throw Error(std::string(gate_name(kind_)) + " has no 2x2 payload");
}

int Gate::min_qubits() const { return *std::max_element(qubits_.begin(), qubits_.end()) + 1; }

} // namespace qsim
