#pragma once

#include "qsim/types.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsim {

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using Matrix2 = std::array<Complex, 4>;

enum class GateKind {
    X,
    Y,
    Z,
    H,
    S,
    T,
    RZ,
    RK,
    U1Q,
    CNOT,
    CRK,
    CU1Q,
    SWAP,
    DENSE,
};

[[nodiscard]] std::string_view gate_name(GateKind kind);

constexpr double kUnitarityTolerance = 1e-10;

/**
 * One gate of the supported set with its operands and parameters.
 *
 * Controlled kinds store operands as {control, target}. Dense gates hold a
 * row-major 2^m x 2^m matrix whose sub-index bit j corresponds to targets[j].
 * Construction validates operand distinctness, RK's k >= 1, and unitarity of
 * user-supplied matrices.
 */
class Gate {
  public:
    static Gate x(int target) { return {GateKind::X, {target}}; }
    static Gate y(int target) { return {GateKind::Y, {target}}; }
    static Gate z(int target) { return {GateKind::Z, {target}}; }
    static Gate h(int target) { return {GateKind::H, {target}}; }
    static Gate s(int target) { return {GateKind::S, {target}}; }
    static Gate t(int target) { return {GateKind::T, {target}}; }
    static Gate rz(int target, double theta);
    static Gate rk(int target, int k);
    static Gate u1q(int target, const Matrix2 &matrix);
    static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}}; }
    static Gate crk(int control, int target, int k);
    static Gate cu1q(int control, int target, const Matrix2 &matrix);
    static Gate swap(int a, int b) { return {GateKind::SWAP, {a, b}}; }
    static Gate dense(std::vector<int> targets, std::vector<Complex> matrix);

    [[nodiscard]] GateKind kind() const { return kind_; }
    [[nodiscard]] std::span<const int> qubits() const { return qubits_; }
    [[nodiscard]] bool is_controlled() const;
    [[nodiscard]] int control() const;
    /// Target of single-qubit and controlled kinds.
    [[nodiscard]] int target() const;
    [[nodiscard]] double angle() const { return angle_; }
    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] const std::vector<Complex> &matrix() const { return matrix_; }

    /// Diagonal in the computational basis (never needs communication).
    [[nodiscard]] bool is_diagonal() const;

    /// The 2x2 payload acting on the target, for single-qubit and controlled kinds.
    [[nodiscard]] Matrix2 matrix2() const;

    /// Largest operand index plus one.
    [[nodiscard]] int min_qubits() const;

    bool operator==(const Gate &) const = default;

  private:
    Gate(GateKind kind, std::vector<int> qubits);

    GateKind kind_;
    std::vector<int> qubits_;
    double angle_ = 0.0;
    int k_ = 0;
    std::vector<Complex> matrix_;
};

/// Phase e^{i*pi/2^(k-1)} applied by RK / CRK on the |1> component.
[[nodiscard]] Complex rk_phase(int k);

/// max |(U^dagger U - I)_ij| for a row-major dim x dim matrix.
[[nodiscard]] double unitarity_defect(std::span<const Complex> matrix, std::size_t dim);

} // namespace qsim
