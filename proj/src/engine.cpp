#include "qsim/engine.hpp"

#include "qsim/kernels.hpp"

#include <string>

namespace qsim {

namespace {

std::string describe(const Gate &gate) { return render_gate(gate); }

CommPlan plan_controlled(const Topology &topology, const Gate &gate) {
    const int c = gate.control();
    const int t = gate.target();
    const bool c_local = topology.is_local(c);
    const bool t_local = topology.is_local(t);
    const int L = topology.local_qubits();

    if (c_local && t_local) {
        return NoComm{};
    }
    if (!c_local && t_local) {
        return SelectedRanksLocal{c - L};
    }
    PairExchange plan{Rank{1} << (t - L), t - L, std::nullopt, std::nullopt};
    if (c_local) {
        plan.local_control_bit = c;
    } else {
        plan.control_rank_bit = c - L;
    }
    return plan;
}

} // namespace

CommPlan plan_gate(const Topology &topology, const Gate &gate) {
    if (gate.min_qubits() > topology.n_qubits()) {
        throw Error(describe(gate) + ": operand out of range for " +
                    std::to_string(topology.n_qubits()) + " qubits");
    }
    const int L = topology.local_qubits();

    if (gate.is_diagonal()) {
        return NoComm{};
    }
    switch (gate.kind()) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::H:
    case GateKind::U1Q: {
        const int t = gate.target();
        if (topology.is_local(t)) {
            return NoComm{};
        }
        return PairExchange{Rank{1} << (t - L), t - L, std::nullopt, std::nullopt};
    }
    case GateKind::CNOT:
    case GateKind::CU1Q:
        return plan_controlled(topology, gate);
    case GateKind::SWAP: {
        const int a = gate.qubits()[0];
        const int b = gate.qubits()[1];
        if (topology.is_local(a) && topology.is_local(b)) {
            return NoComm{};
        }
        return Decomposed{{Gate::cnot(a, b), Gate::cnot(b, a), Gate::cnot(a, b)}};
    }
    case GateKind::DENSE:
        for (const int q : gate.qubits()) {
            if (!topology.is_local(q)) {
                throw PlanError(describe(gate) + ": dense gate target " + std::to_string(q) +
                                " is non-local (L = " + std::to_string(L) +
                                "); insert SWAPs to move it below L");
            }
        }
        return NoComm{};
    default:
        break;
    }
    throw PlanError(describe(gate) + ": no communication plan for this gate");
}

DistState::DistState(const Topology &topology, Transport &transport, EngineOptions options)
    : topology_(topology), transport_(&transport), options_(options),
      slice_(topology.local_size()) {
    if (transport.size() != topology.n_ranks() || transport.rank() != topology.rank()) {
        throw Error("topology (rank " + std::to_string(topology.rank()) + " of " +
                    std::to_string(topology.n_ranks()) + ") does not match transport (rank " +
                    std::to_string(transport.rank()) + " of " + std::to_string(transport.size()) +
                    ")");
    }
    if (topology.log_ranks() > 0) {
        scratch_.resize(topology.local_size());
    }
    set_basis(0);
}

DistState DistState::basis(const Topology &topology, Transport &transport, Index basis_index,
                           EngineOptions options) {
    DistState state(topology, transport, options);
    state.set_basis(basis_index);
    return state;
}

void DistState::set_basis(Index basis_index) {
    if (basis_index >= pow2(topology_.n_qubits())) {
        throw Error("basis index " + std::to_string(basis_index) + " out of range for " +
                    std::to_string(topology_.n_qubits()) + " qubits");
    }
    std::fill(slice_.begin(), slice_.end(), Complex{0.0, 0.0});
    const Index owner = basis_index >> topology_.local_qubits();
    if (owner == topology_.rank()) {
        slice_[basis_index & (topology_.local_size() - 1)] = 1.0;
    }
}

void DistState::copy_from(const DistState &other) {
    if (other.topology_ != topology_) {
        throw Error("copy_from: topologies differ");
    }
    slice_ = other.slice_;
}

void DistState::apply_gate(const Gate &gate) {
    const CommPlan plan = plan_gate(topology_, gate);
    transport_->set_gate_seq(gate_count_);
    execute(gate, plan);
    ++gate_count_;

    if (options_.inject_sign_fault && gate.kind() == GateKind::H && topology_.rank() == 0) {
        slice_[0] = -slice_[0];
    }
}

void DistState::execute(const Gate &gate, const CommPlan &plan) {
    if (const auto *steps = std::get_if<Decomposed>(&plan)) {
        for (const Gate &step : steps->steps) {
            execute(step, plan_gate(topology_, step));
        }
        return;
    }
    if (const auto *exchange = std::get_if<PairExchange>(&plan)) {
        exchange_and_combine(gate, *exchange);
        return;
    }
    if (const auto *selected = std::get_if<SelectedRanksLocal>(&plan)) {
        if (bit_of(topology_.rank(), selected->control_rank_bit) == 1) {
            kernels::apply_1q_pairs(slice_, gate.kind(), gate.matrix2(), gate.target());
        }
        return;
    }

    if (gate.is_diagonal()) {
        kernels::apply_diag(slice_, topology_, kernels::diagonal_phase(gate));
        return;
    }
    switch (gate.kind()) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::H:
    case GateKind::U1Q:
        kernels::apply_1q_pairs(slice_, gate.kind(), gate.matrix2(), gate.target());
        break;
    case GateKind::CNOT:
    case GateKind::CU1Q:
        kernels::apply_controlled_pairs(slice_, gate.kind(), gate.matrix2(), gate.control(),
                                        gate.target());
        break;
    case GateKind::SWAP:
        kernels::apply_swap_local(slice_, gate.qubits()[0], gate.qubits()[1]);
        break;
    case GateKind::DENSE:
        kernels::apply_dense_local(slice_, gate.matrix(), gate.qubits());
        break;
    default:
        throw PlanError(describe(gate) + ": unexpected local execution");
    }
}

void DistState::exchange_and_combine(const Gate &gate, const PairExchange &plan) {
    const Rank me = topology_.rank();
    if (!plan.participates(me)) {
        return;
    }
    const Rank partner = me ^ plan.distance;
    transport_->exchange(partner, slice_, scratch_);
    kernels::combine_after_exchange(slice_, scratch_, gate.kind(), gate.matrix2(),
                                    bit_of(me, plan.target_rank_bit), plan.local_control_bit);
}

void DistState::apply_circuit(const Circuit &circuit) {
    if (circuit.n_qubits() != topology_.n_qubits()) {
        throw Error("circuit has " + std::to_string(circuit.n_qubits()) +
                    " qubits but the state has " + std::to_string(topology_.n_qubits()));
    }
    for (std::size_t i = 0; i < circuit.size(); ++i) {
        const Gate &gate = circuit.gates()[i];
        try {
            apply_gate(gate);
        } catch (const PlanError &e) {
            throw PlanError("gate " + std::to_string(i) + ": " + e.what());
        } catch (const TransportError &) {
            throw;
        } catch (const Error &e) {
            throw Error("gate " + std::to_string(i) + ": " + e.what());
        }
    }
}

std::vector<Complex> gather_full_state(const DistState &state, int max_qubits) {
    if (state.topology().n_qubits() > max_qubits) {
        throw Error("refusing to gather 2^" + std::to_string(state.topology().n_qubits()) +
                    " amplitudes (limit 2^" + std::to_string(max_qubits) + ")");
    }
    return state.transport().gather_to_root(state.amplitudes());
}

} // namespace qsim
