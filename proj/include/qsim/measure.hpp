#pragma once

#include "qsim/engine.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qsim {

enum class Pauli { X, Y, Z };

/// coefficient * (tensor product of the listed factors; identity elsewhere).
struct PauliTerm {
    double coefficient = 0.0;
    std::map<int, Pauli> factors;
    bool operator==(const PauliTerm &) const = default;
};

using PauliSum = std::vector<PauliTerm>;

/// One term per line: `<coeff> <P q> [<P q> ...]`, e.g. `0.5 Z 0 Z 1`. '#' comments.
[[nodiscard]] PauliSum parse_pauli_sum(std::string_view text);
[[nodiscard]] std::string render_pauli_sum(const PauliSum &terms);
[[nodiscard]] PauliSum load_pauli_sum(const std::string &path);

inline constexpr double kNormalizationTolerance = 1e-6;
inline constexpr std::size_t kMaxProbabilityQubits = 20;

// All of the following are collective and return the same value on every rank.

[[nodiscard]] double norm_sq(const DistState &state);

/**
 * Marginal distribution over subset. Entry b sums |a_i|^2 over global indices
 * i whose subset bits read b, with bit j of b taken from qubit subset[j].
 */
[[nodiscard]] std::vector<double> probability(const DistState &state,
                                              std::span<const int> subset);

/// sum_s c_s <psi|P_s|psi>. Throws if the state is not normalized.
[[nodiscard]] double expval_pauli_sum(const DistState &state, std::span<const PauliTerm> terms);

/**
 * Draws shots basis indices. Shot k uses its own generator stream derived
 * from (seed, k): one uniform picks the owning rank from the rank-level
 * distribution, a second picks the offset by inverse CDF over that rank's
 * slice. Results are identical for a fixed seed and rank count.
 */
[[nodiscard]] std::vector<Index> sample(const DistState &state, std::size_t shots,
                                        std::uint64_t seed);

} // namespace qsim
