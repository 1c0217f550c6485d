#pragma once

#include "qsim/circuit.hpp"
#include "qsim/gate.hpp"
#include "qsim/topology.hpp"
#include "qsim/transport.hpp"

#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace qsim {

/// Gate runs on every rank's slice without messages.
struct NoComm {
    bool operator==(const NoComm &) const = default;
};

/// Only ranks whose control rank bit is 1 act, locally and without messages.
struct SelectedRanksLocal {
    int control_rank_bit;
    bool operator==(const SelectedRanksLocal &) const = default;
};

/// Participating ranks swap full slices with rank XOR distance, then combine.
struct PairExchange {
    Rank distance;
    int target_rank_bit;
    /// Participation requires this rank bit to be 1; unset means every rank.
    std::optional<int> control_rank_bit;
    /// Combine touches only offsets with this local bit set.
    std::optional<int> local_control_bit;

    [[nodiscard]] bool participates(Rank rank) const {
        return !control_rank_bit || bit_of(rank, *control_rank_bit) == 1;
    }
    bool operator==(const PairExchange &) const = default;
};

/// A gate executed as a fixed sequence of simpler gates, each planned on its own.
struct Decomposed {
    std::vector<Gate> steps;
    bool operator==(const Decomposed &) const = default;
};

using CommPlan = std::variant<NoComm, SelectedRanksLocal, PairExchange, Decomposed>;

/**
 * Chooses the communication pattern for a gate from its kind and the
 * locality of its operands:
 *
 *  - diagonal kinds never communicate;
 *  - a non-diagonal single-qubit gate exchanges only when its target is non-local;
 *  - controlled gates follow the four control/target locality cases;
 *  - SWAP with a non-local operand becomes three CNOTs;
 *  - DENSE must be fully local.
 *
 * Throws PlanError for a DENSE gate with a non-local target.
 */
[[nodiscard]] CommPlan plan_gate(const Topology &topology, const Gate &gate);

struct EngineOptions {
    /// Test hook: corrupts the sign of one amplitude after every Hadamard.
    bool inject_sign_fault = false;
};

/**
 * One rank's share of a distributed state vector.
 *
 * Owns 2^L amplitudes plus a scratch buffer of the same length that receives
 * the partner's slice during an exchange. Gate application is collective:
 * every rank must apply the same gates in the same order.
 */
class DistState {
  public:
    /// |0...0>.
    DistState(const Topology &topology, Transport &transport, EngineOptions options = {});

    [[nodiscard]] static DistState basis(const Topology &topology, Transport &transport,
                                         Index basis_index, EngineOptions options = {});

    [[nodiscard]] const Topology &topology() const { return topology_; }
    [[nodiscard]] Transport &transport() const { return *transport_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return slice_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return slice_; }

    /// Gates applied so far; also the sequence number tagging transport traffic.
    [[nodiscard]] std::uint64_t gate_count() const { return gate_count_; }

    void set_basis(Index basis_index);

    void apply_gate(const Gate &gate);

    /// Applies gates in order. A failure is rethrown with the gate's index.
    void apply_circuit(const Circuit &circuit);

    /// Overwrites this state's amplitudes with other's (same topology).
    void copy_from(const DistState &other);

  private:
    void execute(const Gate &gate, const CommPlan &plan);
    void exchange_and_combine(const Gate &gate, const PairExchange &plan);

    Topology topology_;
    Transport *transport_;
    EngineOptions options_;
    std::vector<Complex> slice_;
    std::vector<Complex> scratch_;
    std::uint64_t gate_count_ = 0;
};

inline constexpr int kDefaultGatherLimit = 26;

/// Collective. Full state in global index order at rank 0; empty elsewhere.
[[nodiscard]] std::vector<Complex> gather_full_state(const DistState &state,
                                                     int max_qubits = kDefaultGatherLimit);

} // namespace qsim
