#pragma once

#include "buchi/guard.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace buchi {

/// Probabilities must sum to one within this tolerance; they are never renormalized.
inline constexpr double kProbabilityTolerance = 1e-9;

struct Transition {
    std::size_t target = 0;
    double prob = 0.0;
    friend bool operator==(const Transition&, const Transition&) = default;
};

enum class ModelKind { mdp, product };

/// Labeled MDP with an optional Büchi acceptance set. Also the in-memory
/// shape of a product MDP (kind == product), so downstream analyses treat
/// both uniformly. Dense indices follow document order.
struct Mdp {
    ModelKind kind = ModelKind::mdp;
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<std::string> atoms;
    std::vector<Letter> labels;                                    // per state, |atoms| wide
    std::vector<std::vector<std::string>> actions;                 // A(s), nonempty
    std::vector<std::vector<std::vector<Transition>>> transitions; // [state][action index]
    std::vector<bool> accepting;                                   // B

    std::size_t size() const noexcept { return states.size(); }
    std::optional<std::size_t> find_state(std::string_view id) const;
    std::optional<std::size_t> find_action(std::size_t state, std::string_view action) const;

    friend bool operator==(const Mdp&, const Mdp&) = default;
};

using LabeledMDP = Mdp;

struct GuardedTransition {
    std::size_t from = 0;
    Guard guard;
    std::size_t to = 0;

    friend bool operator==(const GuardedTransition& a, const GuardedTransition& b) {
        return a.from == b.from && a.to == b.to && a.guard.text() == b.guard.text();
    }
};

/// Limit-deterministic Büchi automaton over the alphabet 2^atoms.
struct Ldba {
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<std::string> atoms;
    std::vector<bool> accepting;
    std::vector<GuardedTransition> transitions;      // guards bound to `atoms`
    std::vector<std::vector<std::size_t>> epsilon;   // per state
    std::vector<std::size_t> initial_component;      // Q_ini as listed
    std::vector<std::size_t> accepting_component;    // Q_acc as listed

    std::size_t size() const noexcept { return states.size(); }
    std::optional<std::size_t> find_state(std::string_view id) const;

    /// delta(q, letter): the target of the first enabled guard. Throws
    /// InvalidLDBA when no guard is enabled.
    std::size_t successor(std::size_t q, const Letter& letter) const;

    friend bool operator==(const Ldba&, const Ldba&) = default;
};

/// Deterministic memoryless policy: action index into Mdp::actions[s], or
/// nullopt where undefined.
struct Policy {
    std::vector<std::optional<std::size_t>> choice;

    bool is_total() const;
    friend bool operator==(const Policy&, const Policy&) = default;
};

/// Guard totality is checked by enumerating every letter when the automaton
/// has at most this many atoms; above it, by pairwise satisfiability of guard
/// conjunctions plus satisfiability of the negated disjunction.
inline constexpr std::size_t kExhaustiveLetterLimit = 16;

enum class LdbaCheck { strict, structural };

using Model = std::variant<Mdp, Ldba>;

/// Parses any model document ("mdp", "product" or "ldba"). Throws
/// SyntaxError, SchemaError, InvariantViolation or UnknownAtom.
Model parse_model(std::string_view text);
Mdp parse_mdp(std::string_view text);
/// `structural` skips the bipartition and totality checks (see validate_ldba).
Ldba parse_ldba(std::string_view text, LdbaCheck check = LdbaCheck::strict);

/// Empty iff the LDBA satisfies the bipartition conditions and its guards are
/// total and deterministic. Each entry names the offending state and letter.
std::vector<std::string> validate_ldba(const Ldba& a);

Policy parse_policy(std::string_view text, const Mdp& model);

std::string serialize(const Mdp& m);
std::string serialize(const Ldba& a);
std::string serialize(const Policy& p, const Mdp& model);

/// Reads a file, or a builtin document for names of the form "builtin:<name>".
std::string load_document(const std::string& location);

} // namespace buchi
