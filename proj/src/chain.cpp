#include "buchi/chain.hpp"

#include "buchi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace buchi {

InducedChain induce_chain(const Mdp& model, const Policy& pol) {
    const std::size_t n = model.size();
    if (pol.choice.size() != n) throw InputError("policy does not match the model's state count");
    InducedChain c;
    c.states = model.states;
    c.initial = model.initial;
    c.accepting = model.accepting;
    c.p = Matrix(n, n);
    for (std::size_t s = 0; s < n; ++s) {
        if (!pol.choice[s]) throw PartialPolicy(model.states[s]);
        const std::size_t a = *pol.choice[s];
        if (a >= model.actions[s].size()) throw IllegalAction(model.states[s], "#" + std::to_string(a));
        for (const auto& t : model.transitions[s][a]) c.p(s, t.target) += t.prob;
    }
    return c;
}

InducedChain make_chain(Matrix p, std::vector<bool> accepting, std::size_t initial, std::vector<std::string> names) {
    const std::size_t n = p.rows();
    if (p.cols() != n) throw InvariantViolation("transition matrix is not square");
    if (accepting.size() != n) throw InvariantViolation("accepting mask does not match the state count");
    if (n > 0 && initial >= n) throw InvariantViolation("initial state out of range");
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (double x : p.row(i)) {
            if (x < 0.0) throw InvariantViolation("negative transition probability in row " + std::to_string(i));
            sum += x;
        }
        if (std::abs(sum - 1.0) > kProbabilityTolerance) {
            std::ostringstream os;
            os << "row " << i << " probabilities sum to " << sum;
            throw InvariantViolation(os.str());
        }
    }
    if (names.empty())
        for (std::size_t i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    return InducedChain{std::move(names), std::move(p), initial, std::move(accepting)};
}

std::string_view class_name(StateClass c) noexcept {
    switch (c) {
    case StateClass::accepting_recurrent: return "B_A";
    case StateClass::accepting_transient: return "B_T";
    case StateClass::rejecting_in_accepting: return "nB_A";
    case StateClass::rejecting_recurrent: return "nB_R";
    case StateClass::rejecting_transient: return "nB_T";
    }
    return "?";
}

std::size_t BsccPartition::rejecting_bscc_count() const noexcept {
    return static_cast<std::size_t>(std::count(bscc_accepting.begin(), bscc_accepting.end(), false));
}

std::vector<std::size_t> BsccPartition::states_of(StateClass c) const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < classes.size(); ++s)
        if (classes[s] == c) out.push_back(s);
    return out;
}

BsccPartition decompose(const InducedChain& chain) {
    const std::size_t n = chain.size();
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (chain.p(i, j) > 0.0) succ[i].push_back(j);

    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    BsccPartition out;
    out.scc_of.assign(n, 0);
    std::size_t counter = 0;

    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const std::size_t v = f.node;
            if (f.next_edge < succ[v].size()) {
                const std::size_t w = succ[v][f.next_edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    out.scc_of[w] = out.sccs.size();
                    component.push_back(w);
                } while (w != v);
                std::sort(component.begin(), component.end());
                out.sccs.push_back(std::move(component));
            }
            call.pop_back();
            if (!call.empty()) {
                const std::size_t parent = call.back().node;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }

    out.bscc_of.assign(n, BsccPartition::npos);
    for (std::size_t c = 0; c < out.sccs.size(); ++c) {
        bool bottom = true;
        bool accepting = false;
        for (std::size_t s : out.sccs[c]) {
            accepting = accepting || chain.accepting[s];
            for (std::size_t t : succ[s])
                if (out.scc_of[t] != c) bottom = false;
        }
        if (!bottom) continue;
        for (std::size_t s : out.sccs[c]) out.bscc_of[s] = out.bsccs.size();
        out.bsccs.push_back(c);
        out.bscc_accepting.push_back(accepting);
    }

    out.classes.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        const bool acc = chain.accepting[s];
        if (!out.in_bscc(s))
            out.classes[s] = acc ? StateClass::accepting_transient : StateClass::rejecting_transient;
        else if (out.bscc_accepting[out.bscc_of[s]])
            out.classes[s] = acc ? StateClass::accepting_recurrent : StateClass::rejecting_in_accepting;
        else
            out.classes[s] = StateClass::rejecting_recurrent;
    }

    out.reachable.assign(n, false);
    if (n > 0) {
        std::deque<std::size_t> frontier{chain.initial};
        out.reachable[chain.initial] = true;
        while (!frontier.empty()) {
            const std::size_t s = frontier.front();
            frontier.pop_front();
            for (std::size_t t : succ[s])
                if (!out.reachable[t]) {
                    out.reachable[t] = true;
                    frontier.push_back(t);
                }
        }
    }
    return out;
}

ClassCounts class_counts(const BsccPartition& p) {
    ClassCounts c;
    for (auto cls : p.classes) {
        switch (cls) {
        case StateClass::accepting_recurrent: ++c.accepting_recurrent; break;
        case StateClass::accepting_transient: ++c.accepting_transient; break;
        case StateClass::rejecting_in_accepting: ++c.rejecting_in_accepting; break;
        case StateClass::rejecting_recurrent: ++c.rejecting_recurrent; break;
        case StateClass::rejecting_transient: ++c.rejecting_transient; break;
        }
    }
    c.rejecting_bsccs = p.rejecting_bscc_count();
    c.accepting_bsccs = p.accepting_bscc_count();
    return c;
}

ChainSampler::ChainSampler(const InducedChain& chain) : targets_(chain.size()), cumulative_(chain.size()) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < chain.size(); ++j) {
            const double p = chain.p(i, j);
            if (p <= 0.0) continue;
            acc += p;
            targets_[i].push_back(j);
            cumulative_[i].push_back(acc);
        }
    }
}

std::size_t ChainSampler::next(std::size_t s, double u) const noexcept {
    const auto& cum = cumulative_[s];
    for (std::size_t k = 0; k + 1 < cum.size(); ++k)
        if (u < cum[k]) return targets_[s][k];
    return targets_[s].back();
}

} // namespace buchi
