#include "buchi/generator.hpp"

#include "buchi/errors.hpp"
#include "buchi/rng.hpp"

#include <algorithm>
#include <map>

namespace buchi {

namespace {

std::vector<Transition> normalize(const std::map<std::size_t, double>& weights) {
    double total = 0.0;
    for (const auto& [t, w] : weights) total += w;
    std::vector<Transition> row;
    for (const auto& [t, w] : weights) row.push_back({t, w / total});
    return row;
}

} // namespace

GeneratedChain generate_chain(const ChainSpec& spec) {
    const std::size_t bscc_count = spec.rejecting_bsccs + spec.accepting_bsccs;
    if (bscc_count == 0) throw InputError("at least one BSCC is required");
    if (spec.states < bscc_count)
        throw InputError(std::to_string(spec.states) + " states cannot host " + std::to_string(bscc_count) + " BSCCs");
    if (spec.max_bscc_size == 0) throw InputError("max BSCC size must be positive");
    if (spec.actions == 0) throw InputError("at least one action per state is required");

    CounterRng rng(spec.seed, 0);
    const std::size_t n = spec.states;

    // BSCC sizes, shrunk so that every BSCC keeps at least one state.
    std::vector<std::size_t> sizes(bscc_count);
    std::size_t budget = n;
    for (std::size_t k = 0; k < bscc_count; ++k) {
        const std::size_t reserve = bscc_count - k - 1;
        const std::size_t cap = std::min(spec.max_bscc_size, budget - reserve);
        sizes[k] = 1 + rng.below(cap);
        budget -= sizes[k];
    }
    const std::size_t transient = budget;

    // Layout before shuffling: transient states first, then BSCC blocks
    // (rejecting ones first).
    std::vector<std::map<std::size_t, double>> rows(n);
    std::vector<bool> accepting(n, false);
    std::size_t next = transient;
    for (std::size_t k = 0; k < bscc_count; ++k) {
        const bool acc = k >= spec.rejecting_bsccs;
        const std::size_t lo = next, len = sizes[k];
        for (std::size_t i = 0; i < len; ++i) {
            const std::size_t s = lo + i;
            rows[s][lo + (i + 1) % len] += 0.1 + rng.uniform();
            if (len > 1 && rng.uniform() < 0.5) rows[s][lo + rng.below(len)] += 0.1 + rng.uniform();
            if (acc && rng.uniform() < spec.accepting_fraction) accepting[s] = true;
        }
        if (acc) accepting[lo + rng.below(len)] = true;
        next += len;
    }
    for (std::size_t s = 0; s < transient; ++s) {
        rows[s][s + 1 + rng.below(n - s - 1)] += 0.1 + rng.uniform();
        const std::size_t extra = rng.below(3);
        for (std::size_t e = 0; e < extra; ++e) rows[s][rng.below(n)] += 0.1 + rng.uniform();
        if (rng.uniform() < spec.accepting_fraction) accepting[s] = true;
    }

    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(position[i - 1], position[rng.below(i)]);

    GeneratedChain g;
    g.rejecting_bsccs = spec.rejecting_bsccs;
    g.accepting_bsccs = spec.accepting_bsccs;
    Mdp& m = g.model;
    m.atoms = {"acc"};
    m.states.resize(n);
    m.labels.assign(n, Letter{false});
    m.accepting.assign(n, false);
    m.actions.resize(n);
    m.transitions.resize(n);
    for (std::size_t i = 0; i < n; ++i) m.states[i] = "x" + std::to_string(i);
    m.initial = position[0];

    for (std::size_t old = 0; old < n; ++old) {
        const std::size_t s = position[old];
        m.accepting[s] = accepting[old];
        m.labels[s][0] = accepting[old];
        std::map<std::size_t, double> mapped;
        for (const auto& [t, w] : rows[old]) mapped[position[t]] += w;
        m.actions[s].push_back("go");
        m.transitions[s].push_back(normalize(mapped));
        for (std::size_t a = 1; a < spec.actions; ++a) {
            std::map<std::size_t, double> random_row;
            const std::size_t fan = 1 + rng.below(3);
            for (std::size_t e = 0; e < fan; ++e) random_row[rng.below(n)] += 0.1 + rng.uniform();
            m.actions[s].push_back("a" + std::to_string(a));
            m.transitions[s].push_back(normalize(random_row));
        }
    }
    g.policy.choice.assign(n, std::size_t{0});
    return g;
}

} // namespace buchi
