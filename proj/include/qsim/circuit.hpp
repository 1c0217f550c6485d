#pragma once

#include "qsim/gate.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace qsim {

/// Ordered gate list over a fixed qubit count.
class Circuit {
  public:
    explicit Circuit(int n_qubits);

    /// Appends a gate; rejects operands >= n_qubits().
    Circuit &add(Gate gate);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }

    bool operator==(const Circuit &) const = default;

  private:
    int n_qubits_;
    std::vector<Gate> gates_;
};

/// Malformed circuit or Pauli-sum text. line() is 1-based.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string &message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    [[nodiscard]] std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/**
 * Parses the line-oriented circuit format:
 *
 *     qubits 2
 *     H 0          # comment
 *     CNOT 0 1
 *
 * Gate lines: X/Y/Z/H/S/T t, RZ t theta, RK t k, CNOT c t, CRK c t k, SWAP a b,
 * U1Q t <8 reals>, CU1Q c t <8 reals>, DENSE m t_0..t_{m-1} <2*4^m reals>.
 * Matrices are row-major with interleaved real and imaginary parts.
 */
[[nodiscard]] Circuit parse_circuit(std::string_view text);

/// Inverse of parse_circuit; numbers use round-trip precision.
[[nodiscard]] std::string render_circuit(const Circuit &circuit);

[[nodiscard]] std::string render_gate(const Gate &gate);

[[nodiscard]] Circuit load_circuit(const std::string &path);

namespace detail {

/// Whitespace tokenizer shared by the text formats; strips '#' comments.
std::vector<std::string_view> tokenize_line(std::string_view line);
double parse_real(std::string_view token, std::size_t line);
int parse_int(std::string_view token, std::size_t line);
std::string format_real(double value);

} // namespace detail

} // namespace qsim
