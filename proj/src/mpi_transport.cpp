#include "qsim/mpi_transport.hpp"

#include <bit>
#include <algorithm>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace qsim {

namespace {

void check(int code, const char *what, Rank rank) {
    if (code != MPI_SUCCESS) {
        char message[MPI_MAX_ERROR_STRING];
        int length = 0;
        MPI_Error_string(code, message, &length);
        throw TransportError("rank " + std::to_string(rank) + ": " + what + " failed: " +
                             std::string(message, static_cast<std::size_t>(length)));
    }
}

void ensure_initialized() {
    int initialized = 0;
    MPI_Initialized(&initialized);
    if (initialized == 0) {
        MPI_Init(nullptr, nullptr);
        MPI_Comm_set_errhandler(MPI_COMM_WORLD, MPI_ERRORS_RETURN);
        std::atexit([] {
            int finalized = 0;
            MPI_Finalized(&finalized);
            if (finalized == 0) {
                MPI_Finalize();
            }
        });
    }
}

// Chunking for counts above INT_MAX doubles.
constexpr std::size_t kMaxChunk = std::size_t{1} << 30;

} // namespace

MpiTransport::MpiTransport(MPI_Comm comm) : comm_(comm) {
    ensure_initialized();
    int rank = 0;
    int size = 0;
    MPI_Comm_rank(comm_, &rank);
    MPI_Comm_size(comm_, &size);
    rank_ = static_cast<Rank>(rank);
    size_ = static_cast<Rank>(size);
    if (!std::has_single_bit(size_)) {
        throw TransportError("external transport needs a power-of-two rank count, got " +
                             std::to_string(size));
    }
}

void MpiTransport::do_exchange(Rank partner, std::span<const Complex> send,
                               std::span<Complex> receive) {
    const auto peer = static_cast<int>(partner);
    for (std::size_t done = 0; done < send.size(); done += kMaxChunk) {
        const auto chunk = static_cast<int>(std::min(kMaxChunk, send.size() - done));
        check(MPI_Sendrecv(send.data() + done, chunk, MPI_CXX_DOUBLE_COMPLEX, peer, 0,
                           receive.data() + done, chunk, MPI_CXX_DOUBLE_COMPLEX, peer, 0, comm_,
                           MPI_STATUS_IGNORE),
              "MPI_Sendrecv", rank_);
    }
}

void MpiTransport::do_allreduce_sum(std::span<const double> local, std::span<double> result) {
    // Gather every contribution and reduce locally in the fixed tree order, so
    // the result does not depend on the MPI library's reduction algorithm.
    const auto count = static_cast<int>(local.size());
    std::vector<double> all(local.size() * size_);
    check(MPI_Allgather(local.data(), count, MPI_DOUBLE, all.data(), count, MPI_DOUBLE, comm_),
          "MPI_Allgather", rank_);
    std::vector<std::vector<double>> contributions(size_);
    for (Rank r = 0; r < size_; ++r) {
        contributions[r].assign(all.begin() + static_cast<std::ptrdiff_t>(r * local.size()),
                                all.begin() + static_cast<std::ptrdiff_t>((r + 1) * local.size()));
    }
    const auto sum = tree_sum(std::move(contributions));
    std::copy(sum.begin(), sum.end(), result.begin());
}

std::vector<Complex> MpiTransport::do_gather_to_root(std::span<const Complex> local) {
    std::vector<Complex> result;
    if (rank_ == 0) {
        result.resize(local.size() * size_);
    }
    if (local.size() > static_cast<std::size_t>(INT_MAX)) {
        throw TransportError("gather_to_root: slice too large for a single MPI_Gather");
    }
    const auto count = static_cast<int>(local.size());
    check(MPI_Gather(local.data(), count, MPI_CXX_DOUBLE_COMPLEX, result.data(), count,
                     MPI_CXX_DOUBLE_COMPLEX, 0, comm_),
          "MPI_Gather", rank_);
    return result;
}

int mpi_log_ranks() {
    ensure_initialized();
    int size = 1;
    MPI_Comm_size(MPI_COMM_WORLD, &size);
    return std::countr_zero(static_cast<unsigned>(size));
}

int mpi_rank() {
    ensure_initialized();
    int rank = 0;
    MPI_Comm_rank(MPI_COMM_WORLD, &rank);
    return rank;
}

void run_mpi(int log_ranks, const RankBody &body) {
    MpiTransport transport;
    if (log_ranks >= 0 && transport.size() != (Rank{1} << log_ranks)) {
        throw TransportError("external job has " + std::to_string(transport.size()) +
                             " ranks but 2^" + std::to_string(log_ranks) + " were requested");
    }
    try {
        body(transport);
    } catch (const TransportError &e) {
        // A failed rank leaves its partners blocked; take the whole job down.
        std::fprintf(stderr, "rank %u: %s\n", transport.rank(), e.what());
        MPI_Abort(MPI_COMM_WORLD, 4);
    }
}

} // namespace qsim
