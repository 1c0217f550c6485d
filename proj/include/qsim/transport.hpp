#pragma once

#include "qsim/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace qsim {

struct GateTraffic {
    std::uint64_t exchanges = 0;
    std::uint64_t bytes_sent = 0;
    bool operator==(const GateTraffic &) const = default;
};

struct ExchangeRecord {
    std::uint64_t gate_seq;
    Rank partner;
    std::uint64_t bytes;
    bool operator==(const ExchangeRecord &) const = default;
};

/// Per-rank communication counters. All counters only ever grow.
struct TransportStats {
    std::uint64_t exchanges = 0;
    std::uint64_t bytes_sent = 0;
    std::uint64_t allreduces = 0;
    std::uint64_t gathers = 0;
    /// Keyed by the gate sequence number active when the traffic happened.
    std::map<std::uint64_t, GateTraffic> per_gate;
    std::vector<ExchangeRecord> exchange_log;
};

/**
 * Message-passing contract between ranks.
 *
 * Every operation is collective in the MPI sense: exchange() pairs exactly two
 * ranks, the reductions involve all of them. Backends implement the protected
 * do_* hooks; the public wrappers keep the statistics.
 */
class Transport {
  public:
    virtual ~Transport() = default;

    [[nodiscard]] virtual Rank rank() const = 0;
    [[nodiscard]] virtual Rank size() const = 0;

    /// Swap buffers with partner. Blocks until both sides have the other's data.
    void exchange(Rank partner, std::span<const Complex> send, std::span<Complex> receive);
    [[nodiscard]] std::vector<Complex> exchange(Rank partner, std::span<const Complex> send);

    /// Element-wise sum over ranks, reduced in a fixed binary-tree order.
    [[nodiscard]] std::vector<double> allreduce_sum(std::span<const double> local);

    /// Rank-ordered concatenation at rank 0; empty on other ranks.
    [[nodiscard]] std::vector<Complex> gather_to_root(std::span<const Complex> local);

    [[nodiscard]] const TransportStats &stats() const { return stats_; }

    /// Tags subsequent traffic with a gate sequence number.
    void set_gate_seq(std::uint64_t seq) { gate_seq_ = seq; }
    [[nodiscard]] std::uint64_t gate_seq() const { return gate_seq_; }

  protected:
    virtual void do_exchange(Rank partner, std::span<const Complex> send,
                             std::span<Complex> receive) = 0;
    virtual void do_allreduce_sum(std::span<const double> local, std::span<double> result) = 0;
    virtual std::vector<Complex> do_gather_to_root(std::span<const Complex> local) = 0;

  private:
    TransportStats stats_;
    std::uint64_t gate_seq_ = 0;
};

/// Reduces per-rank contributions pairwise with doubling stride:
/// ((c0 + c1) + (c2 + c3)) + ... The result is independent of arrival order.
[[nodiscard]] std::vector<double> tree_sum(std::vector<std::vector<double>> contributions);

enum class TransportMode { Simulated, External };

[[nodiscard]] TransportMode parse_transport_mode(std::string_view name);
[[nodiscard]] std::string_view transport_mode_name(TransportMode mode);

/// Reads QSIM_TRANSPORT; unset means simulated.
[[nodiscard]] TransportMode transport_mode_from_env();

[[nodiscard]] bool external_transport_available();

using RankBody = std::function<void(Transport &)>;

/**
 * Runs body once per rank over 2^log_ranks ranks.
 *
 * Simulated: all ranks live in this process, one worker thread each; the
 * first failure on any rank aborts the others and is rethrown here.
 * External: this process is one rank of an MPI job whose size must equal
 * 2^log_ranks (pass log_ranks < 0 to accept the job size as is).
 */
void launch(TransportMode mode, int log_ranks, const RankBody &body);

/// Rank count of the external job, or 1 when not running under MPI.
[[nodiscard]] int external_log_ranks();

/// This process's rank in the external job, or 0 when not running under MPI.
[[nodiscard]] int external_rank();

} // namespace qsim
