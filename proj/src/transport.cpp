#include "qsim/transport.hpp"

#include "qsim/sim_transport.hpp"

#include <cstdlib>
#include <string>

#ifdef QSIM_HAVE_MPI
#include "qsim/mpi_transport.hpp"
#endif

namespace qsim {

void Transport::exchange(Rank partner, std::span<const Complex> send, std::span<Complex> receive) {
    if (partner == rank() || partner >= size()) {
        throw TransportError("rank " + std::to_string(rank()) + ": invalid exchange partner " +
                             std::to_string(partner));
    }
    if (send.size() != receive.size()) {
        throw TransportError("rank " + std::to_string(rank()) +
                             ": exchange send/receive length mismatch");
    }
    do_exchange(partner, send, receive);
    const std::uint64_t bytes = send.size() * kBytesPerAmplitude;
    stats_.exchanges += 1;
    stats_.bytes_sent += bytes;
    auto &traffic = stats_.per_gate[gate_seq_];
    traffic.exchanges += 1;
    traffic.bytes_sent += bytes;
    stats_.exchange_log.push_back({gate_seq_, partner, bytes});
}

std::vector<Complex> Transport::exchange(Rank partner, std::span<const Complex> send) {
    std::vector<Complex> receive(send.size());
    exchange(partner, send, receive);
    return receive;
}

std::vector<double> Transport::allreduce_sum(std::span<const double> local) {
    std::vector<double> result(local.size());
    if (size() == 1) {
        std::copy(local.begin(), local.end(), result.begin());
    } else {
        do_allreduce_sum(local, result);
    }
    stats_.allreduces += 1;
    return result;
}

std::vector<Complex> Transport::gather_to_root(std::span<const Complex> local) {
    std::vector<Complex> result =
        size() == 1 ? std::vector<Complex>(local.begin(), local.end()) : do_gather_to_root(local);
    stats_.gathers += 1;
    return result;
}

std::vector<double> tree_sum(std::vector<std::vector<double>> contributions) {
    if (contributions.empty()) {
        return {};
    }
    const std::size_t length = contributions.front().size();
    for (const auto &c : contributions) {
        if (c.size() != length) {
            throw TransportError("allreduce_sum: ranks contributed different lengths");
        }
    }
    const std::size_t n = contributions.size();
    for (std::size_t stride = 1; stride < n; stride *= 2) {
        for (std::size_t i = 0; i + stride < n; i += 2 * stride) {
            auto &into = contributions[i];
            const auto &from = contributions[i + stride];
            for (std::size_t j = 0; j < length; ++j) {
                into[j] += from[j];
            }
        }
    }
    return std::move(contributions.front());
}

TransportMode parse_transport_mode(std::string_view name) {
    if (name == "simulated") {
        return TransportMode::Simulated;
    }
    if (name == "external") {
        return TransportMode::External;
    }
    throw Error("unknown transport '" + std::string(name) + "' (expected simulated|external)");
}

std::string_view transport_mode_name(TransportMode mode) {
    return mode == TransportMode::Simulated ? "simulated" : "external";
}

TransportMode transport_mode_from_env() {
    const char *value = std::getenv("QSIM_TRANSPORT");
    if (value == nullptr || *value == '\0') {
        return TransportMode::Simulated;
    }
    return parse_transport_mode(value);
}

bool external_transport_available() {
#ifdef QSIM_HAVE_MPI
    return true;
#else
    return false;
#endif
}

int external_log_ranks() {
#ifdef QSIM_HAVE_MPI
    return mpi_log_ranks();
#else
    return 0;
#endif
}

int external_rank() {
#ifdef QSIM_HAVE_MPI
    return mpi_rank();
#else
    return 0;
#endif
}

void launch(TransportMode mode, int log_ranks, const RankBody &body) {
    if (mode == TransportMode::Simulated) {
        run_simulated(log_ranks < 0 ? 0 : log_ranks, body);
        return;
    }
#ifdef QSIM_HAVE_MPI
    run_mpi(log_ranks, body);
#else
    (void)log_ranks;
    (void)body;
    throw TransportError("external transport requested but this build has no MPI support");
#endif
}

} // namespace qsim
