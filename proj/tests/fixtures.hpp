#pragma once

#include "buchi/builtin.hpp"
#include "buchi/chain.hpp"
#include "buchi/model.hpp"

#include <string>

namespace fixtures {

inline buchi::Mdp builtin_mdp(const std::string& name) { return buchi::parse_mdp(buchi::builtin_document(name)); }

inline buchi::InducedChain builtin_chain(const std::string& model, const std::string& policy = "") {
    const buchi::Mdp m = builtin_mdp(model);
    buchi::Policy pol;
    if (policy.empty())
        pol.choice.assign(m.size(), std::size_t{0});
    else
        pol = buchi::parse_policy(buchi::builtin_document(policy), m);
    return buchi::induce_chain(m, pol);
}

inline buchi::InducedChain ex1(const std::string& action = "alpha") { return builtin_chain("ex1", "ex1-" + action); }

} // namespace fixtures
