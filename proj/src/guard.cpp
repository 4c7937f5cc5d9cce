#include "buchi/guard.hpp"

#include "buchi/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace buchi {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    Parser(std::string_view text, std::vector<Guard::Node>& nodes, std::vector<std::string>& names)
        : text_(text), nodes_(nodes), names_(names) {}

    std::size_t run() {
        const std::size_t root = parse_or();
        skip_space();
        if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(1, pos_ + 1, what); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::size_t push(Guard::Node node) {
        nodes_.push_back(node);
        return nodes_.size() - 1;
    }

    std::size_t parse_or() {
        std::size_t lhs = parse_and();
        while (accept('|')) {
            const std::size_t rhs = parse_and();
            lhs = push({Guard::Kind::disjunction, false, 0, lhs, rhs});
        }
        return lhs;
    }

    std::size_t parse_and() {
        std::size_t lhs = parse_unary();
        while (accept('&')) {
            const std::size_t rhs = parse_unary();
            lhs = push({Guard::Kind::conjunction, false, 0, lhs, rhs});
        }
        return lhs;
    }

    std::size_t parse_unary() {
        if (accept('!')) {
            const std::size_t inner = parse_unary();
            return push({Guard::Kind::negation, false, 0, inner, 0});
        }
        if (accept('(')) {
            const std::size_t inner = parse_or();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of guard");
        if (!is_ident_start(text_[pos_])) fail(std::string("unexpected '") + text_[pos_] + "'");
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string word(text_.substr(start, pos_ - start));
        if (word == "t") return push({Guard::Kind::constant, true, 0, 0, 0});
        if (word == "f") return push({Guard::Kind::constant, false, 0, 0, 0});
        auto it = std::find(names_.begin(), names_.end(), word);
        const std::size_t id = static_cast<std::size_t>(it - names_.begin());
        if (it == names_.end()) names_.push_back(word);
        return push({Guard::Kind::atom, false, id, 0, 0});
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Guard::Node>& nodes_;
    std::vector<std::string>& names_;
};

// Three-valued evaluation under a partial assignment: 0 false, 1 true, 2 unknown.
int eval3(const std::vector<Guard::Node>& nodes, std::size_t at, const std::vector<int>& assignment) {
    const auto& n = nodes[at];
    switch (n.kind) {
    case Guard::Kind::constant: return n.value ? 1 : 0;
    case Guard::Kind::atom: return assignment[n.atom];
    case Guard::Kind::negation: {
        const int v = eval3(nodes, n.lhs, assignment);
        return v == 2 ? 2 : 1 - v;
    }
    case Guard::Kind::conjunction: {
        const int a = eval3(nodes, n.lhs, assignment);
        if (a == 0) return 0;
        const int b = eval3(nodes, n.rhs, assignment);
        if (b == 0) return 0;
        return (a == 1 && b == 1) ? 1 : 2;
    }
    case Guard::Kind::disjunction: {
        const int a = eval3(nodes, n.lhs, assignment);
        if (a == 1) return 1;
        const int b = eval3(nodes, n.rhs, assignment);
        if (b == 1) return 1;
        return (a == 0 && b == 0) ? 0 : 2;
    }
    }
    return 2;
}

} // namespace

Guard Guard::parse(std::string_view text) {
    Guard g;
    g.text_ = std::string(text);
    Parser parser(text, g.nodes_, g.names_);
    g.root_ = parser.run();
    return g;
}

Guard Guard::constant(bool value) {
    Guard g;
    g.text_ = value ? "t" : "f";
    g.nodes_.push_back({Kind::constant, value, 0, 0, 0});
    g.bound_ = true;
    return g;
}

Guard Guard::bind(std::span<const std::string> atoms) const {
    if (bound_) return *this;
    Guard out = *this;
    std::vector<std::size_t> remap(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        auto it = std::find(atoms.begin(), atoms.end(), names_[i]);
        if (it == atoms.end()) throw UnknownAtom(names_[i]);
        remap[i] = static_cast<std::size_t>(it - atoms.begin());
    }
    for (auto& n : out.nodes_)
        if (n.kind == Kind::atom) n.atom = remap[n.atom];
    out.bound_ = true;
    return out;
}

bool Guard::eval(const Letter& letter) const {
    if (!bound_) throw Error("guard '" + text_ + "' evaluated before binding");
    const std::function<bool(std::size_t)> go = [&](std::size_t at) -> bool {
        const auto& n = nodes_[at];
        switch (n.kind) {
        case Kind::constant: return n.value;
        case Kind::atom: return n.atom < letter.size() && letter[n.atom];
        case Kind::negation: return !go(n.lhs);
        case Kind::conjunction: return go(n.lhs) && go(n.rhs);
        case Kind::disjunction: return go(n.lhs) || go(n.rhs);
        }
        return false;
    };
    return go(root_);
}

Guard Guard::combine(Kind kind, const Guard& a, const Guard& b) {
    if (!a.bound_ || !b.bound_) throw Error("guard combination requires bound guards");
    Guard out;
    out.bound_ = true;
    out.nodes_ = a.nodes_;
    const std::size_t offset = a.nodes_.size();
    for (auto n : b.nodes_) {
        if (n.kind == Kind::negation || n.kind == Kind::conjunction || n.kind == Kind::disjunction) {
            n.lhs += offset;
            n.rhs += offset;
        }
        out.nodes_.push_back(n);
    }
    out.nodes_.push_back({kind, false, 0, a.root_, b.root_ + offset});
    out.root_ = out.nodes_.size() - 1;
    out.text_ = "(" + a.text_ + (kind == Kind::conjunction ? ") & (" : ") | (") + b.text_ + ")";
    out.names_ = a.names_;
    for (const auto& name : b.names_)
        if (std::find(out.names_.begin(), out.names_.end(), name) == out.names_.end()) out.names_.push_back(name);
    return out;
}

Guard Guard::operator!() const {
    if (!bound_) throw Error("guard negation requires a bound guard");
    Guard out = *this;
    out.nodes_.push_back({Kind::negation, false, 0, root_, 0});
    out.root_ = out.nodes_.size() - 1;
    out.text_ = "!(" + text_ + ")";
    return out;
}

Guard operator&&(const Guard& a, const Guard& b) { return Guard::combine(Guard::Kind::conjunction, a, b); }
Guard operator||(const Guard& a, const Guard& b) { return Guard::combine(Guard::Kind::disjunction, a, b); }

std::optional<Letter> Guard::satisfying_letter(std::size_t atom_count) const {
    if (!bound_) throw Error("satisfiability check requires a bound guard");
    std::vector<std::size_t> referenced;
    for (const auto& n : nodes_)
        if (n.kind == Kind::atom && std::find(referenced.begin(), referenced.end(), n.atom) == referenced.end())
            referenced.push_back(n.atom);
    std::sort(referenced.begin(), referenced.end());

    std::vector<int> assignment(atom_count, 2);
    const std::function<bool(std::size_t)> search = [&](std::size_t next) -> bool {
        const int v = eval3(nodes_, root_, assignment);
        if (v != 2) return v == 1;
        if (next >= referenced.size()) return false;
        const std::size_t atom = referenced[next];
        for (int value : {0, 1}) {
            assignment[atom] = value;
            if (search(next + 1)) return true;
        }
        assignment[atom] = 2;
        return false;
    };
    if (!search(0)) return std::nullopt;
    Letter letter(atom_count, false);
    for (std::size_t i = 0; i < atom_count; ++i) letter[i] = assignment[i] == 1;
    return letter;
}

bool eval_guard(const Guard& g, const std::set<std::string>& letter, std::span<const std::string> atoms) {
    Letter bits(atoms.size(), false);
    for (const auto& name : letter) {
        auto it = std::find(atoms.begin(), atoms.end(), name);
        if (it == atoms.end()) throw UnknownAtom(name);
        bits[static_cast<std::size_t>(it - atoms.begin())] = true;
    }
    return g.bind(atoms).eval(bits);
}

std::string format_letter(const Letter& letter, std::span<const std::string> atoms) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < letter.size() && i < atoms.size(); ++i) {
        if (!letter[i]) continue;
        if (!first) out += ",";
        out += atoms[i];
        first = false;
    }
    return out + "}";
}

} // namespace buchi
