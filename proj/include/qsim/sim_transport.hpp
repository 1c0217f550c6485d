#pragma once

#include "qsim/transport.hpp"

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace qsim {

/// Raised on ranks that are unblocked because a different rank failed.
class RankAborted : public TransportError {
  public:
    using TransportError::TransportError;
};

/**
 * Shared rendezvous state for an in-process group of simulated ranks.
 *
 * Exchanges pair through per-rank mailboxes: a rank posts a view of its send
 * buffer, copies the partner's posted buffer once it appears, then waits until
 * the partner has copied its own before returning. Reductions and gathers go
 * through a generation-counted barrier that also checks all ranks issued the
 * same collective for the same gate.
 */
class SimWorld {
  public:
    explicit SimWorld(Rank n_ranks);

    [[nodiscard]] Rank size() const { return n_ranks_; }

    void exchange(Rank me, Rank partner, std::uint64_t gate_seq, std::span<const Complex> send,
                  std::span<Complex> receive);
    void allreduce_sum(Rank me, std::uint64_t gate_seq, std::span<const double> local,
                       std::span<double> result);
    std::vector<Complex> gather_to_root(Rank me, std::uint64_t gate_seq,
                                        std::span<const Complex> local);

    /// Wakes every blocked rank with RankAborted.
    void abort();
    [[nodiscard]] bool aborted() const;

  private:
    struct Mailbox {
        const Complex *data = nullptr;
        std::size_t length = 0;
        Rank partner = 0;
        std::uint64_t gate_seq = 0;
        bool posted = false;
        bool consumed = false;
    };

    enum class Collective { AllReduce, Gather };

    struct Arrival {
        Collective op;
        std::uint64_t gate_seq;
        std::size_t length;
    };

    void check_abort_locked() const;
    void arrive_and_wait(std::unique_lock<std::mutex> &lock);
    void check_uniform_arrivals(Rank me) const;

    Rank n_ranks_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    bool aborted_ = false;

    std::vector<Mailbox> mailboxes_;

    std::uint64_t generation_ = 0;
    Rank waiting_ = 0;
    std::vector<std::optional<Arrival>> arrivals_;
    std::vector<std::vector<double>> reduce_slots_;
    std::vector<std::span<const Complex>> gather_slots_;
};

/// One rank's endpoint into a SimWorld.
class SimulatedTransport final : public Transport {
  public:
    SimulatedTransport(std::shared_ptr<SimWorld> world, Rank rank);

    [[nodiscard]] Rank rank() const override { return rank_; }
    [[nodiscard]] Rank size() const override { return world_->size(); }

  protected:
    void do_exchange(Rank partner, std::span<const Complex> send,
                     std::span<Complex> receive) override;
    void do_allreduce_sum(std::span<const double> local, std::span<double> result) override;
    std::vector<Complex> do_gather_to_root(std::span<const Complex> local) override;

  private:
    std::shared_ptr<SimWorld> world_;
    Rank rank_;
};

/// Runs body on 2^log_ranks simulated ranks, one thread per rank.
void run_simulated(int log_ranks, const RankBody &body);

} // namespace qsim
