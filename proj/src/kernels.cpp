#include "qsim/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <string>

namespace qsim::kernels {

namespace {

thread_local std::uint64_t tl_multiplications = 0;

void count_mults(std::uint64_t n) { tl_multiplications += n; }

int local_bits(ConstSlice slice) {
    if (!std::has_single_bit(slice.size())) {
        throw Error("slice length " + std::to_string(slice.size()) + " is not a power of two");
    }
    return std::countr_zero(slice.size());
}

void require_local(ConstSlice slice, int bit, const char *what) {
    if (bit < 0 || bit >= local_bits(slice)) {
        throw Error(std::string(what) + ": bit " + std::to_string(bit) +
                    " is not local to a slice of " + std::to_string(slice.size()) +
                    " amplitudes");
    }
}

void require_distinct(int a, int b, const char *what) {
    if (a == b) {
        throw Error(std::string(what) + ": operand bits collide (" + std::to_string(a) + ")");
    }
}

Index insert_zero_bit(Index value, int bit) {
    const Index low = value & ((Index{1} << bit) - 1);
    return ((value >> bit) << (bit + 1)) | low;
}

Index insert_two_zero_bits(Index value, int bit_a, int bit_b) {
    const int lo = std::min(bit_a, bit_b);
    const int hi = std::max(bit_a, bit_b);
    return insert_zero_bit(insert_zero_bit(value, lo), hi);
}

/// Visits every (lower, upper) offset pair differing in t_bit, lower having bit 0.
template <typename F> void for_each_pair(Slice slice, int t_bit, F &&f) {
    const Index stride = pow2(t_bit);
    const Index n = slice.size();
    for (Index block = 0; block < n; block += 2 * stride) {
        for (Index j = block; j < block + stride; ++j) {
            f(slice[j], slice[j + stride]);
        }
    }
}

/// As for_each_pair, restricted to offsets with c_bit = 1.
template <typename F> void for_each_controlled_pair(Slice slice, int c_bit, int t_bit, F &&f) {
    const Index quarter = slice.size() / 4;
    const Index c_mask = pow2(c_bit);
    const Index t_mask = pow2(t_bit);
    for (Index k = 0; k < quarter; ++k) {
        const Index lower = insert_two_zero_bits(k, c_bit, t_bit) | c_mask;
        f(slice[lower], slice[lower | t_mask]);
    }
}

Complex times_i(Complex z) { return {-z.imag(), z.real()}; }
Complex times_minus_i(Complex z) { return {z.imag(), -z.real()}; }

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Multiplies by factor, treating +1 and -1 without arithmetic.
void scale(Complex &amplitude, Complex factor, std::uint64_t &mults) {
    if (factor == Complex{1.0, 0.0}) {
        return;
    }
    if (factor == Complex{-1.0, 0.0}) {
        amplitude = -amplitude;
        return;
    }
    amplitude *= factor;
    ++mults;
}

} // namespace

std::uint64_t multiplication_count() { return tl_multiplications; }
void reset_multiplication_count() { tl_multiplications = 0; }

void apply_pauli_x(Slice slice, int t_bit) {
    require_local(slice, t_bit, "X");
    for_each_pair(slice, t_bit, [](Complex &a0, Complex &a1) { std::swap(a0, a1); });
}

void apply_pauli_y(Slice slice, int t_bit) {
    require_local(slice, t_bit, "Y");
    for_each_pair(slice, t_bit, [](Complex &a0, Complex &a1) {
        const Complex lower = a0;
        a0 = times_minus_i(a1);
        a1 = times_i(lower);
    });
}

void apply_hadamard(Slice slice, int t_bit) {
    require_local(slice, t_bit, "H");
    for_each_pair(slice, t_bit, [](Complex &a0, Complex &a1) {
        const Complex sum = a0 + a1;
        const Complex diff = a0 - a1;
        a0 = kInvSqrt2 * sum;
        a1 = kInvSqrt2 * diff;
    });
    // Real scalings, counted as one multiplication each.
    count_mults(slice.size());
}

void apply_1q_general(Slice slice, const Matrix2 &m, int t_bit) {
    require_local(slice, t_bit, "U1Q");
    for_each_pair(slice, t_bit, [&m](Complex &a0, Complex &a1) {
        const Complex lower = a0;
        a0 = m[0] * lower + m[1] * a1;
        a1 = m[2] * lower + m[3] * a1;
    });
    count_mults(2 * slice.size());
}

void apply_1q_pairs(Slice slice, GateKind kind, const Matrix2 &matrix, int t_bit) {
    switch (kind) {
    case GateKind::X:
    case GateKind::CNOT:
        apply_pauli_x(slice, t_bit);
        return;
    case GateKind::Y:
        apply_pauli_y(slice, t_bit);
        return;
    case GateKind::H:
        apply_hadamard(slice, t_bit);
        return;
    default:
        apply_1q_general(slice, matrix, t_bit);
        return;
    }
}

void apply_controlled_x(Slice slice, int c_bit, int t_bit) {
    require_local(slice, c_bit, "CNOT control");
    require_local(slice, t_bit, "CNOT target");
    require_distinct(c_bit, t_bit, "CNOT");
    for_each_controlled_pair(slice, c_bit, t_bit,
                             [](Complex &a0, Complex &a1) { std::swap(a0, a1); });
}

void apply_controlled_general(Slice slice, const Matrix2 &m, int c_bit, int t_bit) {
    require_local(slice, c_bit, "CU1Q control");
    require_local(slice, t_bit, "CU1Q target");
    require_distinct(c_bit, t_bit, "CU1Q");
    for_each_controlled_pair(slice, c_bit, t_bit, [&m](Complex &a0, Complex &a1) {
        const Complex lower = a0;
        a0 = m[0] * lower + m[1] * a1;
        a1 = m[2] * lower + m[3] * a1;
    });
    count_mults(slice.size());
}

void apply_controlled_pairs(Slice slice, GateKind kind, const Matrix2 &matrix, int c_bit,
                            int t_bit) {
    if (kind == GateKind::CNOT || kind == GateKind::X) {
        apply_controlled_x(slice, c_bit, t_bit);
    } else {
        apply_controlled_general(slice, matrix, c_bit, t_bit);
    }
}

DiagonalPhase diagonal_phase(const Gate &gate) {
    if (!gate.is_diagonal()) {
        throw Error(std::string(gate_name(gate.kind())) + " is not a diagonal gate");
    }
    const Matrix2 m = gate.matrix2();
    DiagonalPhase phase{gate.target(), std::nullopt, m[0], m[3]};
    if (gate.is_controlled()) {
        phase.control = gate.control();
    }
    return phase;
}

void apply_diag(Slice slice, const Topology &topology, const DiagonalPhase &phase) {
    const int L = topology.local_qubits();
    if (slice.size() != topology.local_size()) {
        throw Error("diagonal: slice length does not match topology");
    }
    (void)topology.locality(phase.target);
    std::optional<int> local_control;
    if (phase.control) {
        if (*phase.control == phase.target) {
            throw Error("diagonal: control equals target");
        }
        if (!topology.is_local(*phase.control)) {
            if (topology.rank_bit_value(*phase.control) == 0) {
                return;
            }
        } else {
            local_control = *phase.control;
        }
    }

    std::uint64_t mults = 0;
    if (phase.target >= L) {
        const Complex factor =
            topology.rank_bit_value(phase.target) == 1 ? phase.phase1 : phase.phase0;
        if (factor == Complex{1.0, 0.0}) {
            return;
        }
        if (local_control) {
            const Index c_mask = pow2(*local_control);
            for (Index k = 0; k < slice.size() / 2; ++k) {
                scale(slice[insert_zero_bit(k, *local_control) | c_mask], factor, mults);
            }
        } else {
            for (Complex &amplitude : slice) {
                scale(amplitude, factor, mults);
            }
        }
    } else {
        const auto update = [&](Complex &a0, Complex &a1) {
            scale(a0, phase.phase0, mults);
            scale(a1, phase.phase1, mults);
        };
        if (local_control) {
            for_each_controlled_pair(slice, *local_control, phase.target, update);
        } else {
            for_each_pair(slice, phase.target, update);
        }
    }
    count_mults(mults);
}

void combine_after_exchange(Slice mine, ConstSlice theirs, GateKind kind, const Matrix2 &m,
                            int my_side_bit, std::optional<int> local_control_bit) {
    if (mine.size() != theirs.size()) {
        throw Error("combine: local and received slices differ in length");
    }
    if (my_side_bit != 0 && my_side_bit != 1) {
        throw Error("combine: side bit must be 0 or 1");
    }
    if (local_control_bit) {
        require_local(mine, *local_control_bit, "combine control");
    }

    const bool upper = my_side_bit == 1;
    std::uint64_t mults = 0;
    const auto for_each_offset = [&](auto &&f) {
        if (local_control_bit) {
            const Index c_mask = pow2(*local_control_bit);
            for (Index k = 0; k < mine.size() / 2; ++k) {
                const Index j = insert_zero_bit(k, *local_control_bit) | c_mask;
                f(mine[j], theirs[j]);
            }
        } else {
            for (Index j = 0; j < mine.size(); ++j) {
                f(mine[j], theirs[j]);
            }
        }
    };

    switch (kind) {
    case GateKind::X:
    case GateKind::CNOT:
        for_each_offset([](Complex &a, const Complex &b) { a = b; });
        break;
    case GateKind::Y:
        if (upper) {
            for_each_offset([](Complex &a, const Complex &b) { a = times_i(b); });
        } else {
            for_each_offset([](Complex &a, const Complex &b) { a = times_minus_i(b); });
        }
        break;
    case GateKind::H:
        if (upper) {
            for_each_offset([&](Complex &a, const Complex &b) {
                a = kInvSqrt2 * (b - a);
                ++mults;
            });
        } else {
            for_each_offset([&](Complex &a, const Complex &b) {
                a = kInvSqrt2 * (a + b);
                ++mults;
            });
        }
        break;
    default: {
        const Complex self = upper ? m[3] : m[0];
        const Complex other = upper ? m[2] : m[1];
        for_each_offset([&](Complex &a, const Complex &b) {
            a = self * a + other * b;
            mults += 2;
        });
        break;
    }
    }
    count_mults(mults);
}

void apply_dense_local(Slice slice, std::span<const Complex> matrix,
                       std::span<const int> target_bits) {
    const std::size_t m = target_bits.size();
    if (m == 0 || m > 3) {
        throw Error("dense: 1 to 3 targets supported");
    }
    const std::size_t dim = std::size_t{1} << m;
    if (matrix.size() != dim * dim) {
        throw Error("dense: matrix size does not match target count");
    }
    for (std::size_t i = 0; i < m; ++i) {
        require_local(slice, target_bits[i], "dense");
        for (std::size_t j = 0; j < i; ++j) {
            require_distinct(target_bits[i], target_bits[j], "dense");
        }
    }

    std::array<int, 3> sorted{};
    std::copy(target_bits.begin(), target_bits.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(m));

    std::array<Index, 8> offsets{};
    for (std::size_t s = 0; s < dim; ++s) {
        Index offset = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if ((s >> j) & 1U) {
                offset |= pow2(target_bits[j]);
            }
        }
        offsets[s] = offset;
    }

    std::array<Complex, 8> in{};
    const Index groups = slice.size() >> m;
    for (Index g = 0; g < groups; ++g) {
        Index base = g;
        for (std::size_t j = 0; j < m; ++j) {
            base = insert_zero_bit(base, sorted[j]);
        }
        for (std::size_t s = 0; s < dim; ++s) {
            in[s] = slice[base | offsets[s]];
        }
        for (std::size_t r = 0; r < dim; ++r) {
            Complex acc{0.0, 0.0};
            for (std::size_t c = 0; c < dim; ++c) {
                acc += matrix[r * dim + c] * in[c];
            }
            slice[base | offsets[r]] = acc;
        }
    }
    count_mults(groups * dim * dim);
}

void apply_swap_local(Slice slice, int a_bit, int b_bit) {
    require_local(slice, a_bit, "SWAP");
    require_local(slice, b_bit, "SWAP");
    require_distinct(a_bit, b_bit, "SWAP");
    const Index a_mask = pow2(a_bit);
    const Index b_mask = pow2(b_bit);
    for (Index k = 0; k < slice.size() / 4; ++k) {
        const Index base = insert_two_zero_bits(k, a_bit, b_bit);
        std::swap(slice[base | a_mask], slice[base | b_mask]);
    }
}

} // namespace qsim::kernels
