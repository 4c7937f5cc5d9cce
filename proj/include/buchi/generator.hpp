#pragma once

#include "buchi/model.hpp"

#include <cstddef>
#include <cstdint>

namespace buchi {

/// Random chain with a planted BSCC structure. Transient states each get a
/// forward edge toward the BSCCs plus a few random edges; BSCCs are closed
/// cycles (self-loops when of size one) with extra internal edges. Every
/// accepting BSCC holds at least one accepting state, rejecting ones none.
struct ChainSpec {
    std::size_t states = 12;
    std::size_t rejecting_bsccs = 1;
    std::size_t accepting_bsccs = 1;
    double accepting_fraction = 0.3;
    std::size_t max_bscc_size = 3;
    /// Actions per state. Action "go" carries the planted structure; any
    /// further actions get unconstrained random rows.
    std::size_t actions = 1;
    std::uint64_t seed = 0;
};

struct GeneratedChain {
    Mdp model;     // ids "x0", "x1", ...; atom "acc" labels the accepting states
    Policy policy; // "go" everywhere
    std::size_t rejecting_bsccs = 0;
    std::size_t accepting_bsccs = 0;
};

/// Bit-stable in the spec. Throws InputError when the states cannot host the
/// requested BSCCs.
GeneratedChain generate_chain(const ChainSpec& spec);

} // namespace buchi
