#include "qsim/circuit.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace qsim {

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) {
        throw Error("circuit needs at least one qubit, got " + std::to_string(n_qubits));
    }
}

Circuit &Circuit::add(Gate gate) {
    if (gate.min_qubits() > n_qubits_) {
        throw Error(std::string(gate_name(gate.kind())) + ": operand " +
                    std::to_string(gate.min_qubits() - 1) + " out of range for " +
                    std::to_string(n_qubits_) + " qubits");
    }
    gates_.push_back(std::move(gate));
    return *this;
}

namespace detail {

std::vector<std::string_view> tokenize_line(std::string_view line) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) {
            ++pos;
        }
        const std::size_t start = pos;
        while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) {
            ++pos;
        }
        if (pos > start) {
            tokens.push_back(line.substr(start, pos - start));
        }
    }
    return tokens;
}

double parse_real(std::string_view token, std::size_t line) {
    double value = 0.0;
    const auto *first = token.data();
    if (!token.empty() && token.front() == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
        throw ParseError(line, "expected a real number, got '" + std::string(token) + "'");
    }
    return value;
}

int parse_int(std::string_view token, std::size_t line) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
    }
    return value;
}

std::string format_real(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return {buffer, ptr};
}

} // namespace detail

namespace {

using detail::parse_int;
using detail::parse_real;

struct GateSyntax {
    GateKind kind;
    std::size_t qubit_operands;
};

const std::unordered_map<std::string_view, GateSyntax> &gate_table() {
    static const std::unordered_map<std::string_view, GateSyntax> table{
        {"X", {GateKind::X, 1}},       {"Y", {GateKind::Y, 1}},       {"Z", {GateKind::Z, 1}},
        {"H", {GateKind::H, 1}},       {"S", {GateKind::S, 1}},       {"T", {GateKind::T, 1}},
        {"RZ", {GateKind::RZ, 1}},     {"RK", {GateKind::RK, 1}},     {"U1Q", {GateKind::U1Q, 1}},
        {"CNOT", {GateKind::CNOT, 2}}, {"CRK", {GateKind::CRK, 2}},   {"CU1Q", {GateKind::CU1Q, 2}},
        {"SWAP", {GateKind::SWAP, 2}}, {"DENSE", {GateKind::DENSE, 0}},
    };
    return table;
}

std::size_t expected_params(GateKind kind) {
    switch (kind) {
    case GateKind::RZ:
    case GateKind::RK:
    case GateKind::CRK:
        return 1;
    case GateKind::U1Q:
    case GateKind::CU1Q:
        return 8;
    default:
        return 0;
    }
}

std::vector<Complex> parse_matrix(std::span<const std::string_view> tokens, std::size_t line) {
    std::vector<Complex> matrix;
    matrix.reserve(tokens.size() / 2);
    for (std::size_t i = 0; i + 1 < tokens.size(); i += 2) {
        matrix.emplace_back(parse_real(tokens[i], line), parse_real(tokens[i + 1], line));
    }
    return matrix;
}

Matrix2 to_matrix2(const std::vector<Complex> &entries) {
    return {entries[0], entries[1], entries[2], entries[3]};
}

Gate parse_gate(std::span<const std::string_view> tokens, std::size_t line) {
    const auto it = gate_table().find(tokens[0]);
    if (it == gate_table().end()) {
        throw ParseError(line, "unknown gate '" + std::string(tokens[0]) + "'");
    }
    const GateKind kind = it->second.kind;
    const auto args = tokens.subspan(1);

    if (kind == GateKind::DENSE) {
        if (args.empty()) {
            throw ParseError(line, "DENSE: missing target count");
        }
        const int m = parse_int(args[0], line);
        if (m < 1 || m > 3) {
            throw ParseError(line, "DENSE: target count must be 1..3");
        }
        const std::size_t dim = std::size_t{1} << m;
        const std::size_t want = 1 + static_cast<std::size_t>(m) + 2 * dim * dim;
        if (args.size() != want) {
            throw ParseError(line, "DENSE " + std::to_string(m) + ": expected " +
                                       std::to_string(want) + " arguments, got " +
                                       std::to_string(args.size()));
        }
        std::vector<int> targets;
        for (int j = 0; j < m; ++j) {
            targets.push_back(parse_int(args[1 + j], line));
        }
        return Gate::dense(std::move(targets), parse_matrix(args.subspan(1 + m), line));
    }

    const std::size_t n_qubit_args = it->second.qubit_operands;
    const std::size_t n_params = expected_params(kind);
    if (args.size() != n_qubit_args + n_params) {
        throw ParseError(line, std::string(tokens[0]) + ": expected " +
                                   std::to_string(n_qubit_args + n_params) + " arguments, got " +
                                   std::to_string(args.size()));
    }
    std::vector<int> q;
    for (std::size_t i = 0; i < n_qubit_args; ++i) {
        q.push_back(parse_int(args[i], line));
    }
    const auto params = args.subspan(n_qubit_args);

    switch (kind) {
    case GateKind::X: return Gate::x(q[0]);
    case GateKind::Y: return Gate::y(q[0]);
    case GateKind::Z: return Gate::z(q[0]);
    case GateKind::H: return Gate::h(q[0]);
    case GateKind::S: return Gate::s(q[0]);
    case GateKind::T: return Gate::t(q[0]);
    case GateKind::RZ: return Gate::rz(q[0], parse_real(params[0], line));
    case GateKind::RK: return Gate::rk(q[0], parse_int(params[0], line));
    case GateKind::U1Q: return Gate::u1q(q[0], to_matrix2(parse_matrix(params, line)));
    case GateKind::CNOT: return Gate::cnot(q[0], q[1]);
    case GateKind::CRK: return Gate::crk(q[0], q[1], parse_int(params[0], line));
    case GateKind::CU1Q: return Gate::cu1q(q[0], q[1], to_matrix2(parse_matrix(params, line)));
    case GateKind::SWAP: return Gate::swap(q[0], q[1]);
    case GateKind::DENSE: break;
    }
    throw ParseError(line, "unhandled gate");
}

} // namespace

Circuit parse_circuit(std::string_view text) {
    std::optional<Circuit> circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const auto tokens = detail::tokenize_line(line);
        if (tokens.empty()) {
            continue;
        }
        if (!circuit) {
            if (tokens[0] != "qubits" || tokens.size() != 2) {
                throw ParseError(line_no, "expected 'qubits <N>' header");
            }
            const int n = parse_int(tokens[1], line_no);
            if (n < 1) {
                throw ParseError(line_no, "qubit count must be >= 1");
            }
            circuit.emplace(n);
            continue;
        }
        try {
            circuit->add(parse_gate(tokens, line_no));
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!circuit) {
        throw ParseError(line_no, "missing 'qubits <N>' header");
    }
    return std::move(*circuit);
}

std::string render_gate(const Gate &gate) {
    std::string out(gate_name(gate.kind()));
    const auto append = [&out](const std::string &field) {
        out += ' ';
        out += field;
    };
    if (gate.kind() == GateKind::DENSE) {
        append(std::to_string(gate.qubits().size()));
    }
    for (const int q : gate.qubits()) {
        append(std::to_string(q));
    }
    switch (gate.kind()) {
    case GateKind::RZ:
        append(detail::format_real(gate.angle()));
        break;
    case GateKind::RK:
    case GateKind::CRK:
        append(std::to_string(gate.k()));
        break;
    case GateKind::U1Q:
    case GateKind::CU1Q:
    case GateKind::DENSE:
        for (const Complex &entry : gate.matrix()) {
            append(detail::format_real(entry.real()));
            append(detail::format_real(entry.imag()));
        }
        break;
    default:
        break;
    }
    return out;
}

std::string render_circuit(const Circuit &circuit) {
    std::string out = "qubits " + std::to_string(circuit.n_qubits()) + "\n";
    for (const Gate &gate : circuit.gates()) {
        out += render_gate(gate);
        out += '\n';
    }
    return out;
}

Circuit load_circuit(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open circuit file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_circuit(buffer.str());
}

} // namespace qsim
