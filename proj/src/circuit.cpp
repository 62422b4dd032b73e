#include "qdq/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "qdq/error.hpp"

namespace qdq {

namespace {

using namespace std::complex_literals;

// Bit position of qubit q in an n-qubit basis index (qubit 0 is the MSB).
std::size_t bit_of(std::size_t qubit, std::size_t n) { return n - 1 - qubit; }

// Sub-index of `index` restricted to `targets`, first target most significant.
std::size_t gather_bits(std::size_t index, const std::vector<std::size_t>& targets, std::size_t n) {
    std::size_t sub = 0;
    for (auto t : targets) sub = (sub << 1) | ((index >> bit_of(t, n)) & 1u);
    return sub;
}

std::size_t scatter_bits(std::size_t base, std::size_t sub, const std::vector<std::size_t>& targets, std::size_t n) {
    const std::size_t k = targets.size();
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t bit = (sub >> (k - 1 - i)) & 1u;
        const std::size_t mask = std::size_t{1} << bit_of(targets[i], n);
        base = bit ? (base | mask) : (base & ~mask);
    }
    return base;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

std::size_t parse_index(std::string_view token, std::size_t line) {
    std::size_t value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) throw ParseError(line, "expected a nonnegative integer, got '" + std::string(token) + "'");
    return value;
}

}  // namespace

std::string_view to_string(GateKind kind) {
    switch (kind) {
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::T: return "t";
        case GateKind::CNOT: return "cnot";
        case GateKind::CUSTOM: return "custom";
    }
    return "?";
}

std::size_t arity(GateKind kind) {
    switch (kind) {
        case GateKind::CNOT: return 2;
        case GateKind::CUSTOM: return 0;
        default: return 1;
    }
}

Eigen::MatrixXcd gate_matrix(GateKind kind) {
    Eigen::MatrixXcd m(2, 2);
    switch (kind) {
        case GateKind::X:
            m << 0, 1, 1, 0;
            return m;
        case GateKind::Y:
            m << 0, -1i, 1i, 0;
            return m;
        case GateKind::Z:
            m << 1, 0, 0, -1;
            return m;
        case GateKind::H:
            m << 1, 1, 1, -1;
            return m / std::numbers::sqrt2;
        case GateKind::T:
            m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4);
            return m;
        case GateKind::CNOT: {
            Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4, 4);
            c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1;
            return c;
        }
        case GateKind::CUSTOM: break;
    }
    throw DomainError("gate kind has no canonical matrix");
}

bool validate_unitary(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols()) throw DomainError("unitarity check needs a square matrix");
    const auto id = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    const double left = (m.adjoint() * m - id).cwiseAbs().maxCoeff();
    const double right = (m * m.adjoint() - id).cwiseAbs().maxCoeff();
    return left < tol && right < tol;
}

// --- Gate ---

Gate::Gate(GateKind kind, std::vector<std::size_t> targets)
    : Gate(kind, std::move(targets), gate_matrix(kind), std::string(to_string(kind))) {}

Gate::Gate(GateKind kind, std::vector<std::size_t> targets, Eigen::MatrixXcd matrix, std::string name)
    : kind_(kind), targets_(std::move(targets)), matrix_(std::move(matrix)), name_(std::move(name)) {
    if (targets_.empty()) throw DomainError("gate needs at least one target");
    if (kind_ != GateKind::CUSTOM && targets_.size() != arity(kind_)) {
        throw DomainError("gate '" + name_ + "' takes " + std::to_string(arity(kind_)) + " target(s)");
    }
    for (std::size_t i = 0; i < targets_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (targets_[i] == targets_[j]) throw DomainError("gate '" + name_ + "' has repeated target " + std::to_string(targets_[i]));
    if (targets_.size() >= 8 * sizeof(std::size_t)) throw DomainError("too many gate targets");
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << targets_.size());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw DomainError("gate '" + name_ + "' matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
    }
    if (!validate_unitary(matrix_, 1e-9)) throw InvariantViolation("gate '" + name_ + "' matrix is not unitary");
}

Gate Gate::custom(Eigen::MatrixXcd matrix, std::vector<std::size_t> targets, std::string name) {
    return Gate(GateKind::CUSTOM, std::move(targets), std::move(matrix), std::move(name));
}

// --- Circuit ---

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0) throw DomainError("circuit needs at least one qubit");
}

std::vector<std::size_t> Circuit::effective_measured_qubits() const {
    if (!measured_.empty()) return measured_;
    std::vector<std::size_t> all(n_qubits_);
    for (std::size_t q = 0; q < n_qubits_; ++q) all[q] = q;
    return all;
}

Circuit& Circuit::add(Gate gate) {
    for (auto t : gate.targets()) {
        if (t >= n_qubits_) {
            throw DomainError("qubit index " + std::to_string(t) + " out of range for " + std::to_string(n_qubits_) +
                              " qubit(s)");
        }
    }
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit& Circuit::measure(std::size_t qubit) {
    if (qubit >= n_qubits_) throw DomainError("measured qubit " + std::to_string(qubit) + " out of range");
    if (std::find(measured_.begin(), measured_.end(), qubit) != measured_.end()) {
        throw DomainError("qubit " + std::to_string(qubit) + " is already measured");
    }
    measured_.push_back(qubit);
    return *this;
}

// --- Text format ---

Circuit parse_circuit(std::string_view text) {
    std::optional<Circuit> circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto tokens = split_tokens(line);
        if (tokens.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        const std::string op = lower(tokens[0]);

        if (!circuit) {
            if (op != "qubits") throw ParseError(line_no, "missing 'qubits <n>' header");
            if (tokens.size() != 2) throw ParseError(line_no, "'qubits' takes exactly one argument");
            const std::size_t n = parse_index(tokens[1], line_no);
            if (n == 0) throw ParseError(line_no, "qubit count must be positive");
            circuit.emplace(n);
        } else if (op == "qubits") {
            throw ParseError(line_no, "duplicate 'qubits' header");
        } else {
            std::vector<std::size_t> targets;
            for (std::size_t i = 1; i < tokens.size(); ++i) targets.push_back(parse_index(tokens[i], line_no));
            try {
                if (op == "measure") {
                    if (targets.size() != 1) throw ParseError(line_no, "'measure' takes exactly one qubit");
                    circuit->measure(targets[0]);
                    continue;
                }
                GateKind kind;
                if (op == "x") kind = GateKind::X;
                else if (op == "y") kind = GateKind::Y;
                else if (op == "z") kind = GateKind::Z;
                else if (op == "h") kind = GateKind::H;
                else if (op == "t") kind = GateKind::T;
                else if (op == "cnot") kind = GateKind::CNOT;
                else throw ParseError(line_no, "unknown mnemonic '" + std::string(tokens[0]) + "'");
                circuit->add(Gate(kind, std::move(targets)));
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError(line_no, e.what());
            }
        }
        if (eol == text.size()) break;
    }
    if (!circuit) throw ParseError(line_no == 0 ? 1 : line_no, "missing 'qubits <n>' header");
    return *std::move(circuit);
}

std::string serialize_circuit(const Circuit& circuit) {
    std::ostringstream out;
    out << "qubits " << circuit.n_qubits() << '\n';
    for (const auto& g : circuit.gates()) {
        if (g.kind() == GateKind::CUSTOM) throw DomainError("custom gates have no text representation");
        out << to_string(g.kind());
        for (auto t : g.targets()) out << ' ' << t;
        out << '\n';
    }
    for (auto q : circuit.measured_qubits()) out << "measure " << q << '\n';
    return out.str();
}

// --- Dense operators ---

Eigen::MatrixXcd embed_operator(const Eigen::MatrixXcd& op, const std::vector<std::size_t>& targets,
                                std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t k = targets.size();
    if (op.rows() != static_cast<Eigen::Index>(std::size_t{1} << k) || op.cols() != op.rows()) {
        throw DomainError("operator size does not match its target count");
    }
    for (auto t : targets) if (t >= n_qubits) throw DomainError("operator target out of range");
    std::size_t target_mask = 0;
    for (auto t : targets) target_mask |= std::size_t{1} << bit_of(t, n_qubits);

    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~target_mask) != (c & ~target_mask)) continue;
            full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                op(static_cast<Eigen::Index>(gather_bits(r, targets, n_qubits)),
                   static_cast<Eigen::Index>(gather_bits(c, targets, n_qubits)));
        }
    }
    return full;
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
    const std::size_t n = circuit.n_qubits();
    if (n > kMaxUnitaryQubits) {
        throw ResourceLimit("circuit unitary limited to " + std::to_string(kMaxUnitaryQubits) + " qubits, got " +
                            std::to_string(n));
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : circuit.gates()) {
        const auto& targets = g.targets();
        const std::size_t sub_dim = std::size_t{1} << targets.size();
        Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(dim, dim);
        // Row r of (G_embedded * U) mixes the rows of U that differ from r only on the target bits.
        for (Eigen::Index r = 0; r < dim; ++r) {
            const auto row = static_cast<std::size_t>(r);
            const std::size_t sub_r = gather_bits(row, targets, n);
            for (std::size_t s = 0; s < sub_dim; ++s) {
                const Complex coeff = g.matrix()(static_cast<Eigen::Index>(sub_r), static_cast<Eigen::Index>(s));
                if (coeff == Complex{}) continue;
                next.row(r) += coeff * u.row(static_cast<Eigen::Index>(scatter_bits(row, s, targets, n)));
            }
        }
        u = std::move(next);
    }
    return u;
}

}  // namespace qdq
