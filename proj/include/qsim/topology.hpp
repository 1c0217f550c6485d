#pragma once

#include "qsim/types.hpp"

#include <variant>

namespace qsim {

/// Qubit whose index bit lives inside a rank's slice offset.
struct Local {
    int bit;
    bool operator==(const Local &) const = default;
};

/// Qubit whose index bit selects the owning rank.
struct NonLocal {
    int rank_bit;
    bool operator==(const NonLocal &) const = default;
};

using Locality = std::variant<Local, NonLocal>;

/**
 * Partitioning of a 2^N amplitude state over 2^p ranks.
 *
 * Qubit q maps to bit q of the global amplitude index, and the global index
 * decomposes as rank * 2^L + offset with L = N - p. Qubits below L are local,
 * the remaining p qubits are the rank bits.
 */
class Topology {
  public:
    Topology(int n_qubits, int log_ranks, Rank rank);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] int log_ranks() const { return log_ranks_; }
    [[nodiscard]] int local_qubits() const { return n_qubits_ - log_ranks_; }
    [[nodiscard]] Rank rank() const { return rank_; }
    [[nodiscard]] Rank n_ranks() const { return Rank{1} << log_ranks_; }
    [[nodiscard]] Index local_size() const { return pow2(local_qubits()); }

    [[nodiscard]] Locality locality(int qubit) const;
    [[nodiscard]] bool is_local(int qubit) const;

    /// Value of this rank's bit for a non-local qubit.
    [[nodiscard]] int rank_bit_value(int qubit) const;

    /// Exchange partner for a non-local target: rank XOR 2^(q - L).
    [[nodiscard]] Rank pair_rank(int qubit) const;

    /// Rank-id distance to the exchange partner, 2^(q - L).
    [[nodiscard]] Rank pair_distance(int qubit) const;

    [[nodiscard]] Index global_index(Index offset) const {
        return (Index{rank_} << local_qubits()) | offset;
    }

    [[nodiscard]] Topology with_rank(Rank rank) const { return {n_qubits_, log_ranks_, rank}; }

    bool operator==(const Topology &) const = default;

  private:
    void check_qubit(int qubit) const;

    int n_qubits_;
    int log_ranks_;
    Rank rank_;
};

/// Bytes needed for one rank's slice: 2^(N-p) * 16, doubled when the exchange
/// scratch buffer is counted.
[[nodiscard]] std::uint64_t memory_bytes_per_rank(int n_qubits, int log_ranks,
                                                  bool include_scratch = false);

} // namespace qsim
