#pragma once

#include "qsim/circuit.hpp"
#include "qsim/transport.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsim::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kPlanError = 3,
    kTransportError = 4,
};

struct RunOptions {
    std::string circuit_file;
    int ranks_log2 = 0;
    TransportMode transport = TransportMode::Simulated;
    /// probs:<q,q,...> | expval:<pauli file> | samples:<shots,seed> | state
    std::vector<std::string> outputs;
};

int cmd_run(const RunOptions &options, std::ostream &out, std::ostream &err);

struct BenchOptions {
    std::string gate = "X";
    int n_qubits = 16;
    int ranks_log2 = 0;
    std::vector<int> targets;   // empty: every qubit
    std::vector<int> controls;  // controlled gates only; empty: every qubit
    int reps = 5;
    TransportMode transport = TransportMode::Simulated;
};

struct BenchRow {
    std::string gate;
    int n_qubits;
    int ranks_log2;
    int target;
    std::optional<int> control;
    double wall_seconds;
    /// Exchanges and bytes for one application, per participating rank.
    std::uint64_t exchanges;
    std::uint64_t bytes;
};

/// Gate names accepted by the bench sweep.
[[nodiscard]] const std::vector<std::string> &bench_gates();
[[nodiscard]] bool bench_gate_is_controlled(const std::string &gate);
[[nodiscard]] Gate bench_gate(const std::string &gate, int target, std::optional<int> control);

/// Times one gate: one warm-up application, then the median of reps.
[[nodiscard]] BenchRow bench_point(const std::string &gate, int n_qubits, int ranks_log2,
                                   int target, std::optional<int> control, int reps,
                                   TransportMode transport = TransportMode::Simulated);

[[nodiscard]] std::string bench_csv_header();
[[nodiscard]] std::string bench_csv_row(const BenchRow &row);

int cmd_bench(const BenchOptions &options, std::ostream &out, std::ostream &err);

struct VerifyOptions {
    std::uint64_t seed = 1;
    int max_qubits = 12;
    int max_ranks_log2 = 4;
    int n_circuits = 50;
    std::size_t max_gates = 80;
    bool inject_fault = false;
    double tolerance = 1e-12;
};

int cmd_verify(const VerifyOptions &options, std::ostream &out, std::ostream &err);

/// Parses "0,1,5" / "0-3" / "0-3,7" into qubit indices.
[[nodiscard]] std::vector<int> parse_qubit_list(const std::string &text);

} // namespace qsim::cli
