#include "qsim/measure.hpp"

#include "qsim/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace qsim {

PauliSum parse_pauli_sum(std::string_view text) {
    PauliSum terms;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto tokens = detail::tokenize_line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() % 2 != 1) {
            throw ParseError(line_no, "expected '<coeff> [<P> <qubit> ...]'");
        }
        PauliTerm term;
        term.coefficient = detail::parse_real(tokens[0], line_no);
        for (std::size_t i = 1; i < tokens.size(); i += 2) {
            Pauli p{};
            if (tokens[i] == "X") {
                p = Pauli::X;
            } else if (tokens[i] == "Y") {
                p = Pauli::Y;
            } else if (tokens[i] == "Z") {
                p = Pauli::Z;
            } else if (tokens[i] == "I") {
                (void)detail::parse_int(tokens[i + 1], line_no);
                continue;
            } else {
                throw ParseError(line_no, "unknown Pauli '" + std::string(tokens[i]) + "'");
            }
            const int q = detail::parse_int(tokens[i + 1], line_no);
            if (q < 0) {
                throw ParseError(line_no, "negative qubit index");
            }
            if (!term.factors.emplace(q, p).second) {
                throw ParseError(line_no, "qubit " + std::to_string(q) + " repeated in term");
            }
        }
        terms.push_back(std::move(term));
    }
    return terms;
}

std::string render_pauli_sum(const PauliSum &terms) {
    std::string out;
    for (const auto &term : terms) {
        out += detail::format_real(term.coefficient);
        for (const auto &[q, p] : term.factors) {
            out += p == Pauli::X ? " X " : p == Pauli::Y ? " Y " : " Z ";
            out += std::to_string(q);
        }
        out += '\n';
    }
    return out;
}

PauliSum load_pauli_sum(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open Pauli-sum file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_pauli_sum(buffer.str());
}

namespace {

double local_norm_sq(std::span<const Complex> slice) {
    double sum = 0.0;
    for (const Complex &a : slice) {
        sum += std::norm(a);
    }
    return sum;
}

void require_normalized(double norm, const char *what) {
    if (!(std::abs(norm - 1.0) <= kNormalizationTolerance)) {
        throw Error(std::string(what) + ": state is not normalized (norm^2 = " +
                    std::to_string(norm) + ")");
    }
}

/// sum_i |a_i|^2 (-1)^{popcount(i & mask)} over this rank's slice.
double local_parity(const DistState &state, Index mask) {
    const Topology &topology = state.topology();
    const Index local_mask = mask & (topology.local_size() - 1);
    const bool rank_odd = std::popcount(topology.global_index(0) & mask) % 2 == 1;
    double even = 0.0;
    double odd = 0.0;
    const auto slice = state.amplitudes();
    for (Index j = 0; j < slice.size(); ++j) {
        if (std::popcount(j & local_mask) % 2 == 0) {
            even += std::norm(slice[j]);
        } else {
            odd += std::norm(slice[j]);
        }
    }
    return rank_odd ? odd - even : even - odd;
}

} // namespace

double norm_sq(const DistState &state) {
    const double local = local_norm_sq(state.amplitudes());
    return state.transport().allreduce_sum(std::span(&local, 1))[0];
}

std::vector<double> probability(const DistState &state, std::span<const int> subset) {
    const Topology &topology = state.topology();
    if (subset.size() > kMaxProbabilityQubits) {
        throw Error("probability: at most " + std::to_string(kMaxProbabilityQubits) +
                    " qubits per table");
    }
    for (std::size_t i = 0; i < subset.size(); ++i) {
        (void)topology.locality(subset[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (subset[i] == subset[j]) {
                throw Error("probability: qubit " + std::to_string(subset[i]) + " repeated");
            }
        }
    }

    std::vector<double> table(std::size_t{1} << subset.size(), 0.0);
    // Rank bits contribute a constant part of every entry index.
    std::size_t rank_part = 0;
    std::vector<std::pair<int, int>> local_bits;
    for (std::size_t j = 0; j < subset.size(); ++j) {
        if (topology.is_local(subset[j])) {
            local_bits.emplace_back(subset[j], static_cast<int>(j));
        } else if (topology.rank_bit_value(subset[j]) == 1) {
            rank_part |= std::size_t{1} << j;
        }
    }
    const auto slice = state.amplitudes();
    for (Index offset = 0; offset < slice.size(); ++offset) {
        std::size_t entry = rank_part;
        for (const auto &[bit, slot] : local_bits) {
            entry |= static_cast<std::size_t>(bit_of(offset, bit)) << slot;
        }
        table[entry] += std::norm(slice[offset]);
    }
    return state.transport().allreduce_sum(table);
}

double expval_pauli_sum(const DistState &state, std::span<const PauliTerm> terms) {
    const Topology &topology = state.topology();
    require_normalized(norm_sq(state), "expval");

    std::optional<DistState> rotated;
    std::vector<double> parities(terms.size(), 0.0);
    for (std::size_t s = 0; s < terms.size(); ++s) {
        Index mask = 0;
        bool diagonal = true;
        for (const auto &[q, p] : terms[s].factors) {
            (void)topology.locality(q);
            mask |= pow2(q);
            diagonal = diagonal && p == Pauli::Z;
        }
        if (diagonal) {
            parities[s] = local_parity(state, mask);
            continue;
        }
        // Rotate X and Y factors onto the Z axis in a scratch copy.
        if (!rotated) {
            rotated.emplace(topology, state.transport());
        }
        rotated->copy_from(state);
        for (const auto &[q, p] : terms[s].factors) {
            if (p == Pauli::Y) {
                rotated->apply_gate(Gate::rz(q, -std::numbers::pi / 2.0));
            }
            if (p != Pauli::Z) {
                rotated->apply_gate(Gate::h(q));
            }
        }
        parities[s] = local_parity(*rotated, mask);
    }

    const auto reduced = state.transport().allreduce_sum(parities);
    double value = 0.0;
    for (std::size_t s = 0; s < terms.size(); ++s) {
        value += terms[s].coefficient * reduced[s];
    }
    return value;
}

std::vector<Index> sample(const DistState &state, std::size_t shots, std::uint64_t seed) {
    const Topology &topology = state.topology();
    if (shots == 0) {
        throw Error("sample: shots must be >= 1");
    }
    if (topology.n_qubits() > 53) {
        throw Error("sample: indices beyond 2^53 are not supported");
    }
    const Rank me = topology.rank();
    const auto slice = state.amplitudes();

    std::vector<double> rank_norms(topology.n_ranks(), 0.0);
    rank_norms[me] = local_norm_sq(slice);
    rank_norms = state.transport().allreduce_sum(rank_norms);
    double total = 0.0;
    for (const double w : rank_norms) {
        total += w;
    }
    require_normalized(total, "sample");

    std::vector<double> prefix;
    std::vector<double> drawn(shots, 0.0);
    const auto seed_lo = static_cast<std::uint32_t>(seed);
    const auto seed_hi = static_cast<std::uint32_t>(seed >> 32);
    for (std::size_t k = 0; k < shots; ++k) {
        std::seed_seq seq{seed_lo, seed_hi, static_cast<std::uint32_t>(k),
                          static_cast<std::uint32_t>(static_cast<std::uint64_t>(k) >> 32)};
        std::mt19937_64 gen(seq);
        const double u_rank = std::generate_canonical<double, 64>(gen);
        const double u_offset = std::generate_canonical<double, 64>(gen);

        Rank owner = 0;
        double cumulative = 0.0;
        const double target = u_rank * total;
        for (Rank r = 0; r < topology.n_ranks(); ++r) {
            if (rank_norms[r] <= 0.0) {
                continue;
            }
            owner = r;
            cumulative += rank_norms[r];
            if (target < cumulative) {
                break;
            }
        }
        if (owner != me) {
            continue;
        }

        if (prefix.empty()) {
            prefix.resize(slice.size());
            double running = 0.0;
            for (Index j = 0; j < slice.size(); ++j) {
                running += std::norm(slice[j]);
                prefix[j] = running;
            }
        }
        const double local_target = u_offset * prefix.back();
        auto it = std::upper_bound(prefix.begin(), prefix.end(), local_target);
        if (it == prefix.end()) {
            // Rounding at the top end: fall back to the last nonzero amplitude.
            it = std::lower_bound(prefix.begin(), prefix.end(), prefix.back());
        }
        const auto offset = static_cast<Index>(it - prefix.begin());
        drawn[k] = static_cast<double>(topology.global_index(offset));
    }

    const auto gathered = state.transport().allreduce_sum(drawn);
    std::vector<Index> result(shots);
    std::transform(gathered.begin(), gathered.end(), result.begin(),
                   [](double v) { return static_cast<Index>(v); });
    return result;
}

} // namespace qsim
