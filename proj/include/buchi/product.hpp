#pragma once

#include "buchi/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace buchi {

/// Epsilon actions of the product are named "eps:<target automaton state>".
inline constexpr std::string_view kEpsilonPrefix = "eps:";

/// Product of a labeled MDP with an LDBA. All |S|*|Q| pairs are materialized
/// in s-major order (index = s * |Q| + q); unreachable pairs are flagged.
struct ProductMDP {
    Mdp model;                          // kind == product, ids "s|q"
    std::vector<std::size_t> mdp_state; // per product state
    std::vector<std::size_t> aut_state; // per product state
    std::vector<bool> reachable;        // from <s_init, q0> under any actions
    std::size_t mdp_states = 0;
    std::size_t aut_states = 0;

    std::size_t index(std::size_t s, std::size_t q) const noexcept { return s * aut_states + q; }
};

/// Throws AtomMismatch when the LDBA uses an atom the MDP does not declare,
/// InvalidLDBA when validate_ldba reports violations.
ProductMDP build_product(const LabeledMDP& m, const Ldba& a);

/// Finite-memory controller on the original MDP whose memory is the automaton
/// state. At (memory, state) it either plays an MDP action or jumps the
/// memory along an epsilon edge without an MDP step.
class FiniteMemoryController {
public:
    struct Output {
        bool epsilon = false;
        std::size_t value = 0; // MDP action index, or epsilon target automaton state
        friend bool operator==(const Output&, const Output&) = default;
    };

    FiniteMemoryController(Ldba automaton, std::size_t mdp_states);

    std::size_t initial_memory() const noexcept { return automaton_.initial; }
    std::size_t memory_states() const noexcept { return automaton_.size(); }

    /// Throws PartialPolicy for (memory, state) pairs the product policy left undefined.
    Output output(std::size_t memory, std::size_t state) const;

    /// delta(memory, label of the state being left).
    std::size_t update(std::size_t memory, const Letter& label) const;

    void set_output(std::size_t memory, std::size_t state, Output out);
    const Ldba& automaton() const noexcept { return automaton_; }

    /// Letter of the automaton alphabet induced by an MDP label.
    Letter translate(const Letter& mdp_label) const;

    void set_atom_map(std::vector<std::size_t> ldba_to_mdp) { atom_map_ = std::move(ldba_to_mdp); }

private:
    Ldba automaton_;
    std::size_t mdp_states_;
    std::vector<std::optional<Output>> table_; // [memory * mdp_states + state]
    std::vector<std::size_t> atom_map_;        // LDBA atom -> MDP atom
};

/// Throws PartialPolicy when the policy is undefined at a reachable product state.
FiniteMemoryController project_policy(const ProductMDP& p, const Policy& pol, const LabeledMDP& m, const Ldba& a);

struct SimulationTrace {
    std::vector<std::string> actions;     // action names, epsilon moves as "eps:<q>"
    std::vector<std::size_t> mdp_states;  // MDP state before each step
    friend bool operator==(const SimulationTrace&, const SimulationTrace&) = default;
};

/// Runs `steps` product steps. Each non-epsilon step consumes one uniform
/// draw from CounterRng(seed, 0); epsilon steps consume none.
SimulationTrace simulate_product(const ProductMDP& p, const Policy& pol, std::size_t steps, std::uint64_t seed);
SimulationTrace simulate_controller(const FiniteMemoryController& c, const LabeledMDP& m, std::size_t steps,
                                    std::uint64_t seed);

/// Index of the transition chosen by uniform draw u over an outgoing row.
std::size_t sample_row(const std::vector<Transition>& row, double u) noexcept;

} // namespace buchi
