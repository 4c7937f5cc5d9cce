#include "buchi/product.hpp"

#include "buchi/errors.hpp"
#include "buchi/rng.hpp"

#include <algorithm>
#include <deque>

namespace buchi {

namespace {

std::vector<std::size_t> map_atoms(const LabeledMDP& m, const Ldba& a) {
    std::vector<std::size_t> out;
    for (const auto& name : a.atoms) {
        auto it = std::find(m.atoms.begin(), m.atoms.end(), name);
        if (it == m.atoms.end()) throw AtomMismatch("automaton atom '" + name + "' is not declared by the MDP");
        out.push_back(static_cast<std::size_t>(it - m.atoms.begin()));
    }
    return out;
}

Letter to_automaton_letter(const Letter& mdp_label, const std::vector<std::size_t>& atom_map) {
    Letter out(atom_map.size(), false);
    for (std::size_t i = 0; i < atom_map.size(); ++i) out[i] = mdp_label[atom_map[i]];
    return out;
}

} // namespace

std::size_t sample_row(const std::vector<Transition>& row, double u) noexcept {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        cumulative += row[i].prob;
        if (u < cumulative) return i;
    }
    return row.size() - 1;
}

ProductMDP build_product(const LabeledMDP& m, const Ldba& a) {
    const auto atom_map = map_atoms(m, a);
    if (const auto violations = validate_ldba(a); !violations.empty()) throw InvalidLDBA(violations.front());
    for (const auto& list : m.actions)
        for (const auto& action : list)
            if (action.starts_with(kEpsilonPrefix))
                throw InputError("MDP action '" + action + "' collides with the epsilon action namespace");

    ProductMDP p;
    p.mdp_states = m.size();
    p.aut_states = a.size();
    const std::size_t total = p.mdp_states * p.aut_states;
    Mdp& x = p.model;
    x.kind = ModelKind::product;
    x.atoms = m.atoms;
    x.states.reserve(total);
    x.labels.reserve(total);
    x.actions.resize(total);
    x.transitions.resize(total);
    x.accepting.resize(total);
    p.mdp_state.resize(total);
    p.aut_state.resize(total);

    // Successor automaton state for each (s, q): delta(q, L(s)).
    std::vector<std::size_t> next_q(total);
    for (std::size_t s = 0; s < m.size(); ++s) {
        const Letter letter = to_automaton_letter(m.labels[s], atom_map);
        for (std::size_t q = 0; q < a.size(); ++q) next_q[p.index(s, q)] = a.successor(q, letter);
    }

    for (std::size_t s = 0; s < m.size(); ++s)
        for (std::size_t q = 0; q < a.size(); ++q) {
            const std::size_t i = p.index(s, q);
            x.states.push_back(m.states[s] + "|" + a.states[q]);
            x.labels.push_back(m.labels[s]);
            x.accepting[i] = a.accepting[q];
            p.mdp_state[i] = s;
            p.aut_state[i] = q;
            x.actions[i] = m.actions[s];
            for (std::size_t act = 0; act < m.actions[s].size(); ++act) {
                std::vector<Transition> row;
                for (const auto& t : m.transitions[s][act]) row.push_back({p.index(t.target, next_q[i]), t.prob});
                x.transitions[i].push_back(std::move(row));
            }
            for (std::size_t target : a.epsilon[q]) {
                x.actions[i].push_back(std::string(kEpsilonPrefix) + a.states[target]);
                x.transitions[i].push_back({{p.index(s, target), 1.0}});
            }
        }
    x.initial = p.index(m.initial, a.initial);

    p.reachable.assign(total, false);
    std::deque<std::size_t> frontier{x.initial};
    p.reachable[x.initial] = true;
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop_front();
        for (const auto& row : x.transitions[i])
            for (const auto& t : row)
                if (!p.reachable[t.target]) {
                    p.reachable[t.target] = true;
                    frontier.push_back(t.target);
                }
    }
    return p;
}

FiniteMemoryController::FiniteMemoryController(Ldba automaton, std::size_t mdp_states)
    : automaton_(std::move(automaton)), mdp_states_(mdp_states), table_(automaton_.size() * mdp_states) {
    atom_map_.resize(automaton_.atoms.size());
    for (std::size_t i = 0; i < atom_map_.size(); ++i) atom_map_[i] = i;
}

FiniteMemoryController::Output FiniteMemoryController::output(std::size_t memory, std::size_t state) const {
    const auto& out = table_[memory * mdp_states_ + state];
    if (!out) throw PartialPolicy("state " + std::to_string(state) + " with memory " + automaton_.states[memory]);
    return *out;
}

void FiniteMemoryController::set_output(std::size_t memory, std::size_t state, Output out) {
    table_[memory * mdp_states_ + state] = out;
}

Letter FiniteMemoryController::translate(const Letter& mdp_label) const { return to_automaton_letter(mdp_label, atom_map_); }

std::size_t FiniteMemoryController::update(std::size_t memory, const Letter& label) const {
    return automaton_.successor(memory, translate(label));
}

FiniteMemoryController project_policy(const ProductMDP& p, const Policy& pol, const LabeledMDP& m, const Ldba& a) {
    FiniteMemoryController c(a, m.size());
    c.set_atom_map(map_atoms(m, a));
    for (std::size_t i = 0; i < p.model.size(); ++i) {
        const auto& choice = pol.choice.at(i);
        if (!choice) {
            if (p.reachable[i]) throw PartialPolicy(p.model.states[i]);
            continue;
        }
        const std::string& name = p.model.actions[i].at(*choice);
        FiniteMemoryController::Output out;
        if (*choice >= m.actions[p.mdp_state[i]].size()) {
            const auto target = a.find_state(std::string_view(name).substr(kEpsilonPrefix.size()));
            out = {true, *target};
        } else {
            out = {false, *choice};
        }
        c.set_output(p.aut_state[i], p.mdp_state[i], out);
    }
    return c;
}

SimulationTrace simulate_product(const ProductMDP& p, const Policy& pol, std::size_t steps, std::uint64_t seed) {
    SimulationTrace trace;
    CounterRng rng(seed, 0);
    std::size_t x = p.model.initial;
    for (std::size_t k = 0; k < steps; ++k) {
        const auto& choice = pol.choice.at(x);
        if (!choice) throw PartialPolicy(p.model.states[x]);
        const std::string& name = p.model.actions[x][*choice];
        trace.actions.push_back(name);
        trace.mdp_states.push_back(p.mdp_state[x]);
        const auto& row = p.model.transitions[x][*choice];
        if (name.starts_with(kEpsilonPrefix)) {
            x = row.front().target;
            continue;
        }
        x = row[sample_row(row, rng.uniform())].target;
    }
    return trace;
}

SimulationTrace simulate_controller(const FiniteMemoryController& c, const LabeledMDP& m, std::size_t steps,
                                    std::uint64_t seed) {
    SimulationTrace trace;
    CounterRng rng(seed, 0);
    std::size_t s = m.initial;
    std::size_t memory = c.initial_memory();
    for (std::size_t k = 0; k < steps; ++k) {
        const auto out = c.output(memory, s);
        trace.mdp_states.push_back(s);
        if (out.epsilon) {
            trace.actions.push_back(std::string(kEpsilonPrefix) + c.automaton().states[out.value]);
            memory = out.value;
            continue;
        }
        trace.actions.push_back(m.actions[s][out.value]);
        const auto& row = m.transitions[s][out.value];
        const std::size_t next = row[sample_row(row, rng.uniform())].target;
        memory = c.update(memory, m.labels[s]);
        s = next;
    }
    return trace;
}

} // namespace buchi
