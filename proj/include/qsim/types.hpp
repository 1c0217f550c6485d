#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qsim {

using Complex = std::complex<double>;
using Index = std::uint64_t;
using Rank = std::uint32_t;

constexpr std::size_t kBytesPerAmplitude = sizeof(Complex);
static_assert(kBytesPerAmplitude == 16);

constexpr Index pow2(int n) { return Index{1} << n; }
constexpr int bit_of(Index value, int bit) { return static_cast<int>((value >> bit) & 1U); }

/// Base class for every error the simulator reports.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Gate cannot be executed under the current partitioning (e.g. a dense gate
/// touching a rank-selecting qubit).
class PlanError : public Error {
  public:
    using Error::Error;
};

/// Failure in the message-passing layer. Always fatal for the collective.
class TransportError : public Error {
  public:
    using Error::Error;
};

} // namespace qsim
