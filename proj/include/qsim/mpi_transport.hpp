#pragma once

#include "qsim/transport.hpp"

#include <mpi.h>

namespace qsim {

/// External backend over an MPI communicator. Rank count must be a power of two.
class MpiTransport final : public Transport {
  public:
    explicit MpiTransport(MPI_Comm comm = MPI_COMM_WORLD);

    [[nodiscard]] Rank rank() const override { return rank_; }
    [[nodiscard]] Rank size() const override { return size_; }

  protected:
    void do_exchange(Rank partner, std::span<const Complex> send,
                     std::span<Complex> receive) override;
    void do_allreduce_sum(std::span<const double> local, std::span<double> result) override;
    std::vector<Complex> do_gather_to_root(std::span<const Complex> local) override;

  private:
    MPI_Comm comm_;
    Rank rank_ = 0;
    Rank size_ = 1;
};

/// Initializes MPI on first use (finalized at exit) and returns log2 of the job size.
int mpi_log_ranks();
int mpi_rank();

void run_mpi(int log_ranks, const RankBody &body);

} // namespace qsim
