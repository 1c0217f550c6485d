#include "qsim/topology.hpp"

#include <string>

namespace qsim {

namespace {

constexpr int kMaxQubits = 62;
constexpr int kMaxLogRanks = 30;

} // namespace

Topology::Topology(int n_qubits, int log_ranks, Rank rank)
    : n_qubits_(n_qubits), log_ranks_(log_ranks), rank_(rank) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw Error("qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                    std::to_string(n_qubits));
    }
    if (log_ranks < 0 || log_ranks > kMaxLogRanks) {
        throw Error("log2 rank count out of range: " + std::to_string(log_ranks));
    }
    if (log_ranks > n_qubits - 1) {
        throw Error("every rank must hold at least two amplitudes: p = " +
                    std::to_string(log_ranks) + " exceeds N - 1 = " + std::to_string(n_qubits - 1));
    }
    if (rank >= n_ranks()) {
        throw Error("rank " + std::to_string(rank) + " out of range for " +
                    std::to_string(n_ranks()) + " ranks");
    }
}

void Topology::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw Error("qubit " + std::to_string(qubit) + " out of range for " +
                    std::to_string(n_qubits_) + " qubits");
    }
}

Locality Topology::locality(int qubit) const {
    check_qubit(qubit);
    if (qubit < local_qubits()) {
        return Local{qubit};
    }
    return NonLocal{qubit - local_qubits()};
}

bool Topology::is_local(int qubit) const {
    check_qubit(qubit);
    return qubit < local_qubits();
}

int Topology::rank_bit_value(int qubit) const {
    if (is_local(qubit)) {
        throw Error("qubit " + std::to_string(qubit) + " is local; it has no rank bit");
    }
    return bit_of(rank_, qubit - local_qubits());
}

Rank Topology::pair_distance(int qubit) const {
    if (is_local(qubit)) {
        throw Error("qubit " + std::to_string(qubit) + " is local; no exchange partner");
    }
    return Rank{1} << (qubit - local_qubits());
}

Rank Topology::pair_rank(int qubit) const { return rank_ ^ pair_distance(qubit); }

std::uint64_t memory_bytes_per_rank(int n_qubits, int log_ranks, bool include_scratch) {
    const Topology topology(n_qubits, log_ranks, 0);
    if (topology.local_qubits() > 58) {
        throw Error("slice of 2^" + std::to_string(topology.local_qubits()) +
                    " amplitudes overflows a 64-bit byte count");
    }
    const std::uint64_t bytes = topology.local_size() * kBytesPerAmplitude;
    return include_scratch ? 2 * bytes : bytes;
}

} // namespace qsim
