#include "mdag/joint_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "mdag/error.hpp"

namespace mdag {

JointTable::JointTable(std::vector<std::string> variables, std::vector<int> cardinalities,
                       std::vector<double> values)
    : vars_(std::move(variables)), cards_(std::move(cardinalities)), values_(std::move(values)) {
    if (vars_.size() != cards_.size()) throw_input("variable/cardinality count mismatch");
    std::size_t cells = 1;
    for (int c : cards_) {
        if (c < 1) throw_input("cardinalities must be positive");
        cells *= static_cast<std::size_t>(c);
    }
    if (values_.size() != cells) throw_input("value count does not match the state space");
}

JointTable JointTable::constant(std::vector<std::string> variables, std::vector<int> cardinalities,
                                double value) {
    std::size_t cells = 1;
    for (int c : cardinalities) cells *= static_cast<std::size_t>(c);
    return JointTable(std::move(variables), std::move(cardinalities), std::vector<double>(cells, value));
}

int JointTable::index_of(const std::string& var) const {
    auto it = std::find(vars_.begin(), vars_.end(), var);
    if (it == vars_.end()) throw_input("unknown table variable '" + var + "'");
    return static_cast<int>(it - vars_.begin());
}

void JointTable::check_probability(double tol) const {
    for (double v : values_)
        if (v < -tol) throw_input("negative probability entry");
    if (std::abs(total_mass() - 1.0) > tol) throw_input("table mass differs from one");
}

double JointTable::total_mass() const {
    double sum = 0;
    for (double v : values_) sum += v;
    return sum;
}

bool JointTable::strictly_positive(double eps) const {
    for (double v : values_)
        if (v <= eps) return false;
    return true;
}

std::size_t JointTable::offset(const std::vector<int>& states) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) off = off * cards_[i] + states[i];
    return off;
}

std::vector<int> JointTable::assignment(std::size_t offset) const {
    std::vector<int> states(vars_.size());
    for (std::size_t i = vars_.size(); i-- > 0;) {
        states[i] = static_cast<int>(offset % cards_[i]);
        offset /= cards_[i];
    }
    return states;
}

JointTable JointTable::marginalize(const std::vector<std::string>& out_vars) const {
    std::vector<bool> drop(vars_.size(), false);
    for (const auto& v : out_vars) drop[index_of(v)] = true;

    std::vector<std::string> kept_vars;
    std::vector<int> kept_cards;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!drop[i]) {
            kept_vars.push_back(vars_[i]);
            kept_cards.push_back(cards_[i]);
        }
    }
    JointTable out = constant(kept_vars, kept_cards, 0.0);
    std::vector<int> kept_states(kept_vars.size());
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
        std::vector<int> st = assignment(cell);
        int k = 0;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (!drop[i]) kept_states[k++] = st[i];
        out.values_[out.offset(kept_states)] += values_[cell];
    }
    return out;
}

JointTable JointTable::margin_keeping(const std::vector<std::string>& kept) const {
    std::vector<std::string> out_vars;
    for (const auto& v : vars_)
        if (std::find(kept.begin(), kept.end(), v) == kept.end()) out_vars.push_back(v);
    return marginalize(out_vars);
}

JointTable JointTable::multiply(const JointTable& other) const {
    // Broadcast product over the union of the two variable sets.
    std::vector<std::string> union_vars = vars_;
    std::vector<int> union_cards = cards_;
    for (std::size_t i = 0; i < other.vars_.size(); ++i) {
        if (std::find(vars_.begin(), vars_.end(), other.vars_[i]) == vars_.end()) {
            union_vars.push_back(other.vars_[i]);
            union_cards.push_back(other.cards_[i]);
        }
    }
    JointTable out = constant(union_vars, union_cards, 0.0);
    std::vector<int> left_map(vars_.size()), right_map(other.vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) left_map[i] = out.index_of(vars_[i]);
    for (std::size_t i = 0; i < other.vars_.size(); ++i) right_map[i] = out.index_of(other.vars_[i]);
    std::vector<int> left(vars_.size()), right(other.vars_.size());
    for (std::size_t cell = 0; cell < out.values_.size(); ++cell) {
        std::vector<int> st = out.assignment(cell);
        for (std::size_t i = 0; i < left.size(); ++i) left[i] = st[left_map[i]];
        for (std::size_t i = 0; i < right.size(); ++i) right[i] = st[right_map[i]];
        out.values_[cell] = values_[offset(left)] * other.values_[other.offset(right)];
    }
    return out;
}

JointTable JointTable::divide(const JointTable& other, double eps) const {
    std::vector<int> map(other.vars_.size());
    for (std::size_t i = 0; i < other.vars_.size(); ++i) map[i] = index_of(other.vars_[i]);
    JointTable out = *this;
    std::vector<int> sub(other.vars_.size());
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
        std::vector<int> st = assignment(cell);
        for (std::size_t i = 0; i < map.size(); ++i) sub[i] = st[map[i]];
        double den = other.values_[other.offset(sub)];
        if (den <= eps) throw_degenerate("zero-probability conditioning cell");
        out.values_[cell] = values_[cell] / den;
    }
    return out;
}

double JointTable::max_abs_diff(const JointTable& other) const {
    if (vars_ != other.vars_ || cards_ != other.cards_) throw_input("table shape mismatch");
    double gap = 0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        gap = std::max(gap, std::abs(values_[i] - other.values_[i]));
    return gap;
}

double JointTable::invariance_gap(const std::vector<std::string>& invariant_vars) const {
    if (invariant_vars.empty()) return 0.0;
    std::vector<bool> inv(vars_.size(), false);
    for (const auto& v : invariant_vars) inv[index_of(v)] = true;

    // Group cells by the assignment of the non-invariant variables.
    std::vector<std::string> fixed_vars;
    std::vector<int> fixed_cards;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (!inv[i]) {
            fixed_vars.push_back(vars_[i]);
            fixed_cards.push_back(cards_[i]);
        }
    }
    JointTable lo = constant(fixed_vars, fixed_cards, std::numeric_limits<double>::infinity());
    JointTable hi = constant(fixed_vars, fixed_cards, -std::numeric_limits<double>::infinity());
    std::vector<int> fixed_states(fixed_vars.size());
    for (std::size_t cell = 0; cell < values_.size(); ++cell) {
        std::vector<int> st = assignment(cell);
        int k = 0;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (!inv[i]) fixed_states[k++] = st[i];
        std::size_t off = lo.offset(fixed_states);
        lo.values_[off] = std::min(lo.values_[off], values_[cell]);
        hi.values_[off] = std::max(hi.values_[off], values_[cell]);
    }
    double gap = 0;
    for (std::size_t i = 0; i < lo.values_.size(); ++i) gap = std::max(gap, hi.values_[i] - lo.values_[i]);
    return gap;
}

void JointTable::write_text(std::ostream& out) const {
    out << "joint 1\n";
    out << "vars:";
    for (const auto& v : vars_) out << ' ' << v;
    out << "\ncards:";
    for (int c : cards_) out << ' ' << c;
    out << "\nvalues:\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < values_.size(); ++i) out << values_[i] << '\n';
}

JointTable JointTable::read_text(std::istream& in) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "joint" || version != 1) throw_parse("bad joint table header");
    std::string tag;
    in >> tag;
    if (tag != "vars:") throw_parse("expected 'vars:' in joint table");
    std::vector<std::string> vars;
    std::string line;
    std::getline(in, line);
    {
        std::istringstream ls(line);
        std::string v;
        while (ls >> v) vars.push_back(v);
    }
    in >> tag;
    if (tag != "cards:") throw_parse("expected 'cards:' in joint table");
    std::vector<int> cards(vars.size());
    for (auto& c : cards)
        if (!(in >> c)) throw_parse("short cardinality list in joint table");
    in >> tag;
    if (tag != "values:") throw_parse("expected 'values:' in joint table");
    std::size_t cells = 1;
    for (int c : cards) cells *= static_cast<std::size_t>(c);
    std::vector<double> values(cells);
    for (auto& v : values)
        if (!(in >> v)) throw_parse("short value list in joint table");
    return JointTable(std::move(vars), std::move(cards), std::move(values));
}

void JointTable::write_binary(std::ostream& out) const {
    auto put_u32 = [&](std::uint32_t x) {
        unsigned char b[4] = {static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
                              static_cast<unsigned char>(x >> 16), static_cast<unsigned char>(x >> 24)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    out.write("MDJT", 4);
    put_u32(static_cast<std::uint32_t>(vars_.size()));
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        put_u32(static_cast<std::uint32_t>(vars_[i].size()));
        out.write(vars_[i].data(), static_cast<std::streamsize>(vars_[i].size()));
        put_u32(static_cast<std::uint32_t>(cards_[i]));
    }
    put_u32(static_cast<std::uint32_t>(values_.size()));
    for (double v : values_) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
        out.write(reinterpret_cast<const char*>(b), 8);
    }
}

JointTable JointTable::read_binary(std::istream& in) {
    auto get_u32 = [&]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        if (!in) throw_parse("truncated joint table");
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    };
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MDJT", 4) != 0) throw_parse("bad joint table magic");
    std::uint32_t n = get_u32();
    std::vector<std::string> vars(n);
    std::vector<int> cards(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t len = get_u32();
        vars[i].resize(len);
        in.read(vars[i].data(), len);
        cards[i] = static_cast<int>(get_u32());
    }
    std::uint32_t cells = get_u32();
    std::vector<double> values(cells);
    for (auto& v : values) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        if (!in) throw_parse("truncated joint table values");
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        std::memcpy(&v, &bits, 8);
    }
    return JointTable(std::move(vars), std::move(cards), std::move(values));
}

}  // namespace mdag
