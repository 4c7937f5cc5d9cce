#pragma once

#include "buchi/dense.hpp"
#include "buchi/model.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace buchi {

/// Markov chain induced by a memoryless policy: P(s, s') = P(s, pi(s), s').
struct InducedChain {
    std::vector<std::string> states;
    Matrix p;                   // dense, row-stochastic
    std::size_t initial = 0;
    std::vector<bool> accepting;

    std::size_t size() const noexcept { return states.size(); }
};

/// Throws PartialPolicy or IllegalAction.
InducedChain induce_chain(const Mdp& model, const Policy& pol);

/// Builds a chain from an explicit matrix. Names default to "s0", "s1", ...
/// Throws InvariantViolation when a row does not sum to one within 1e-9 or
/// holds a negative entry.
InducedChain make_chain(Matrix p, std::vector<bool> accepting, std::size_t initial = 0,
                        std::vector<std::string> names = {});

enum class StateClass {
    accepting_recurrent,     // B_A: accepting state inside a BSCC
    accepting_transient,     // B_T
    rejecting_in_accepting,  // nB_A: non-accepting state inside an accepting BSCC
    rejecting_recurrent,     // nB_R: state of a rejecting BSCC
    rejecting_transient,     // nB_T
};

std::string_view class_name(StateClass c) noexcept;

struct BsccPartition {
    /// SCCs in reverse topological order (Tarjan emission order).
    std::vector<std::vector<std::size_t>> sccs;
    std::vector<std::size_t> scc_of;
    /// Indices into sccs of the bottom components, in emission order.
    std::vector<std::size_t> bsccs;
    std::vector<bool> bscc_accepting; // aligned with bsccs
    std::vector<StateClass> classes;
    std::vector<bool> reachable;      // from the chain's initial state

    /// Position in `bsccs` of the BSCC containing s, or npos for transient states.
    std::vector<std::size_t> bscc_of;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    bool in_bscc(std::size_t s) const noexcept { return bscc_of[s] != npos; }
    std::size_t rejecting_bscc_count() const noexcept;
    std::size_t accepting_bscc_count() const noexcept { return bsccs.size() - rejecting_bscc_count(); }

    /// States of a given class in ascending index order.
    std::vector<std::size_t> states_of(StateClass c) const;
};

/// Iterative Tarjan over edges with P(s, s') > 0, rooted at index 0 and then
/// at the lowest unvisited index, successors in ascending order.
BsccPartition decompose(const InducedChain& chain);

struct ClassCounts {
    std::size_t accepting_recurrent = 0;
    std::size_t accepting_transient = 0;
    std::size_t rejecting_in_accepting = 0;
    std::size_t rejecting_recurrent = 0;
    std::size_t rejecting_transient = 0;
    std::size_t rejecting_bsccs = 0;
    std::size_t accepting_bsccs = 0;

    std::size_t total() const noexcept {
        return accepting_recurrent + accepting_transient + rejecting_in_accepting + rejecting_recurrent +
               rejecting_transient;
    }
    friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

ClassCounts class_counts(const BsccPartition& p);

/// Cumulative outgoing distributions for fast sampling of successor states.
class ChainSampler {
public:
    explicit ChainSampler(const InducedChain& chain);

    /// Successor of s for a uniform draw u in [0, 1).
    std::size_t next(std::size_t s, double u) const noexcept;

private:
    std::vector<std::vector<std::size_t>> targets_;
    std::vector<std::vector<double>> cumulative_;
};

} // namespace buchi
