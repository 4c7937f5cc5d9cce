#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace buchi {

/// A letter of the alphabet 2^atoms, indexed by atom position.
using Letter = std::vector<bool>;

/// Boolean formula over atom names. Grammar, loosest binding first:
///
///     or   := and ('|' and)*
///     and  := unary ('&' unary)*
///     unary:= '!' unary | '(' or ')' | 't' | 'f' | atom
///
/// Atom names match [A-Za-z_][A-Za-z0-9_]*; 't' and 'f' are reserved.
class Guard {
public:
    enum class Kind { constant, atom, negation, conjunction, disjunction };

    struct Node {
        Kind kind = Kind::constant;
        bool value = false;       // constant
        std::size_t atom = 0;     // index into the name table (unbound) or atom list (bound)
        std::size_t lhs = 0;
        std::size_t rhs = 0;
    };

    /// Throws SyntaxError with line 1 and the 1-based column of the offending character.
    static Guard parse(std::string_view text);

    static Guard constant(bool value);

    const std::string& text() const noexcept { return text_; }

    /// Atom names referenced by the formula, in first-occurrence order.
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Resolves atom names to positions in `atoms`. Throws UnknownAtom.
    Guard bind(std::span<const std::string> atoms) const;

    bool is_bound() const noexcept { return bound_; }

    /// Evaluates a bound guard. Letter length must cover every referenced atom.
    bool eval(const Letter& letter) const;

    Guard operator!() const;
    friend Guard operator&&(const Guard& a, const Guard& b);
    friend Guard operator||(const Guard& a, const Guard& b);

    /// A letter over `atom_count` atoms satisfying a bound guard, if one exists.
    /// Shannon expansion on referenced atoms; unreferenced atoms are false.
    std::optional<Letter> satisfying_letter(std::size_t atom_count) const;

private:
    static Guard combine(Kind kind, const Guard& a, const Guard& b);

    std::string text_;
    std::vector<Node> nodes_;
    std::size_t root_ = 0;
    std::vector<std::string> names_;
    bool bound_ = false;
};

/// Evaluates `g` on the letter given as a set of atom names. Throws
/// UnknownAtom for names outside `atoms`, in the guard or in the letter.
bool eval_guard(const Guard& g, const std::set<std::string>& letter, std::span<const std::string> atoms);

/// "{a,b}" rendering of a letter.
std::string format_letter(const Letter& letter, std::span<const std::string> atoms);

} // namespace buchi
