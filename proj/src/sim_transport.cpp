#include "qsim/sim_transport.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

namespace qsim {

SimWorld::SimWorld(Rank n_ranks)
    : n_ranks_(n_ranks), mailboxes_(n_ranks), arrivals_(n_ranks), reduce_slots_(n_ranks),
      gather_slots_(n_ranks) {
    if (n_ranks == 0) {
        throw TransportError("simulated world needs at least one rank");
    }
}

void SimWorld::abort() {
    {
        const std::lock_guard lock(mutex_);
        aborted_ = true;
    }
    cv_.notify_all();
}

bool SimWorld::aborted() const {
    const std::lock_guard lock(mutex_);
    return aborted_;
}

void SimWorld::check_abort_locked() const {
    if (aborted_) {
        throw RankAborted("simulated transport aborted after a failure on another rank");
    }
}

void SimWorld::exchange(Rank me, Rank partner, std::uint64_t gate_seq,
                        std::span<const Complex> send, std::span<Complex> receive) {
    std::unique_lock lock(mutex_);
    check_abort_locked();

    mailboxes_[me] = Mailbox{send.data(), send.size(), partner, gate_seq, true, false};
    cv_.notify_all();

    Mailbox &theirs = mailboxes_[partner];
    cv_.wait(lock, [&] {
        return aborted_ || (theirs.posted && !theirs.consumed && theirs.partner == me);
    });
    check_abort_locked();

    if (theirs.length != send.size() || theirs.gate_seq != gate_seq) {
        aborted_ = true;
        cv_.notify_all();
        throw TransportError("rank " + std::to_string(me) + ": exchange with rank " +
                             std::to_string(partner) + " mismatched (" +
                             std::to_string(send.size()) + " vs " +
                             std::to_string(theirs.length) + " amplitudes, gate " +
                             std::to_string(gate_seq) + " vs " + std::to_string(theirs.gate_seq) +
                             ")");
    }

    // The partner's buffer stays untouched until we flag it consumed.
    const Complex *source = theirs.data;
    lock.unlock();
    std::copy(source, source + receive.size(), receive.begin());
    lock.lock();

    theirs.consumed = true;
    cv_.notify_all();

    Mailbox &mine = mailboxes_[me];
    cv_.wait(lock, [&] { return aborted_ || mine.consumed; });
    check_abort_locked();
    mine = Mailbox{};
    cv_.notify_all();
}

void SimWorld::arrive_and_wait(std::unique_lock<std::mutex> &lock) {
    const std::uint64_t generation = generation_;
    if (++waiting_ == n_ranks_) {
        waiting_ = 0;
        ++generation_;
        cv_.notify_all();
        return;
    }
    cv_.wait(lock, [&] { return aborted_ || generation_ != generation; });
    check_abort_locked();
}

void SimWorld::check_uniform_arrivals(Rank me) const {
    const Arrival &first = *arrivals_[0];
    for (Rank r = 1; r < n_ranks_; ++r) {
        const Arrival &other = *arrivals_[r];
        if (other.op != first.op || other.gate_seq != first.gate_seq ||
            other.length != first.length) {
            throw TransportError("rank " + std::to_string(me) +
                                 ": collective order violation between rank 0 and rank " +
                                 std::to_string(r));
        }
    }
}

void SimWorld::allreduce_sum(Rank me, std::uint64_t gate_seq, std::span<const double> local,
                             std::span<double> result) {
    std::unique_lock lock(mutex_);
    check_abort_locked();
    arrivals_[me] = Arrival{Collective::AllReduce, gate_seq, local.size()};
    reduce_slots_[me].assign(local.begin(), local.end());
    arrive_and_wait(lock);

    try {
        check_uniform_arrivals(me);
    } catch (...) {
        aborted_ = true;
        cv_.notify_all();
        throw;
    }
    const std::vector<double> sum = tree_sum(reduce_slots_);
    std::copy(sum.begin(), sum.end(), result.begin());

    arrive_and_wait(lock);
}

std::vector<Complex> SimWorld::gather_to_root(Rank me, std::uint64_t gate_seq,
                                              std::span<const Complex> local) {
    std::unique_lock lock(mutex_);
    check_abort_locked();
    arrivals_[me] = Arrival{Collective::Gather, gate_seq, local.size()};
    gather_slots_[me] = local;
    arrive_and_wait(lock);

    try {
        check_uniform_arrivals(me);
    } catch (...) {
        aborted_ = true;
        cv_.notify_all();
        throw;
    }
    std::vector<Complex> result;
    if (me == 0) {
        result.reserve(local.size() * n_ranks_);
        for (const auto &slot : gather_slots_) {
            result.insert(result.end(), slot.begin(), slot.end());
        }
    }

    arrive_and_wait(lock);
    return result;
}

SimulatedTransport::SimulatedTransport(std::shared_ptr<SimWorld> world, Rank rank)
    : world_(std::move(world)), rank_(rank) {
    if (rank_ >= world_->size()) {
        throw TransportError("rank " + std::to_string(rank) + " outside simulated world");
    }
}

void SimulatedTransport::do_exchange(Rank partner, std::span<const Complex> send,
                                     std::span<Complex> receive) {
    world_->exchange(rank_, partner, gate_seq(), send, receive);
}

void SimulatedTransport::do_allreduce_sum(std::span<const double> local, std::span<double> result) {
    world_->allreduce_sum(rank_, gate_seq(), local, result);
}

std::vector<Complex> SimulatedTransport::do_gather_to_root(std::span<const Complex> local) {
    return world_->gather_to_root(rank_, gate_seq(), local);
}

void run_simulated(int log_ranks, const RankBody &body) {
    if (log_ranks < 0 || log_ranks > 12) {
        throw TransportError("simulated transport supports 2^0..2^12 ranks, got 2^" +
                             std::to_string(log_ranks));
    }
    const Rank n_ranks = Rank{1} << log_ranks;
    auto world = std::make_shared<SimWorld>(n_ranks);

    if (n_ranks == 1) {
        SimulatedTransport transport(world, 0);
        body(transport);
        return;
    }

    std::mutex error_mutex;
    std::exception_ptr root_cause;
    std::exception_ptr secondary;

    std::vector<std::thread> workers;
    workers.reserve(n_ranks);
    for (Rank r = 0; r < n_ranks; ++r) {
        workers.emplace_back([&, r] {
            try {
                SimulatedTransport transport(world, r);
                body(transport);
            } catch (const RankAborted &) {
                const std::lock_guard lock(error_mutex);
                if (!secondary) {
                    secondary = std::current_exception();
                }
            } catch (...) {
                {
                    const std::lock_guard lock(error_mutex);
                    if (!root_cause) {
                        root_cause = std::current_exception();
                    }
                }
                world->abort();
            }
        });
    }
    for (auto &worker : workers) {
        worker.join();
    }
    if (root_cause) {
        std::rethrow_exception(root_cause);
    }
    if (secondary) {
        std::rethrow_exception(secondary);
    }
}

} // namespace qsim
