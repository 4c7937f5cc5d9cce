#pragma once

#include "buchi/bellman.hpp"
#include "buchi/chain.hpp"
#include "buchi/model.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace buchi {

struct TdConfig {
    enum class Init { zeros, constant, per_state };

    std::size_t episodes = 50000;
    std::size_t max_steps = 100;
    double a0 = 0.5;
    double tau = 10000.0;
    std::uint64_t seed = 0;
    Init init = Init::zeros;
    double init_constant = 0.0;
    Vector init_values;                     // per_state
    std::map<std::size_t, double> pinned;   // state -> frozen value

    /// Step size for the t-th update (t counts updates across all episodes).
    double step_size(std::size_t t) const noexcept { return a0 / (1.0 + static_cast<double>(t) / tau); }

    /// Throws InputError unless 0 < a0 <= 1, tau > 0 and the initializer fits `states`.
    void validate(std::size_t states) const;
};

struct TdResult {
    Vector value;
    /// Per episode: ||V - reference||_inf when a reference is given, else the
    /// largest absolute update applied during the episode.
    std::vector<double> trace;
    std::size_t updates = 0;
};

/// Tabular TD(0) with target R(s) + Gamma(s) V(s'). Each episode starts at a
/// uniformly drawn state (stream = episode index of cfg.seed). An episode that
/// starts outside every BSCC ends on the transition that enters one; an
/// episode that starts inside a BSCC runs for max_steps. Pinned states are
/// never updated.
TdResult td_evaluate(const InducedChain& chain, const BsccPartition& partition, const SurrogateReward& r,
                     const TdConfig& cfg, const Vector* reference = nullptr);

/// argmax over A(s) of sum_{s'} P(s, a, s') V(s'); ties go to the
/// lexicographically smallest action id. Returns the action index.
std::size_t greedy_action(const Mdp& model, const Vector& v, std::size_t s);

struct PathologyReport {
    double gamma_b = 0.5;
    double spurious_c = 2.0;
    std::uint64_t seed = 0;
    bool unique = true;
    std::size_t null_space_dim = 0;
    Vector null_direction;
    struct FamilyMember {
        double c;
        Vector value;
        double residual;
    };
    std::vector<FamilyMember> family; // (1, 1, c) for c in {0, spurious_c}
    Vector constrained_value;
    double constrained_residual = 0.0;
    std::string greedy_with_spurious;
    std::string greedy_with_constrained;
    Vector td_final;        // unpinned, every state initialized to spurious_c
    Vector td_pinned_final; // s3 pinned at 0, zeros elsewhere
    std::size_t td_episodes = 0;
    std::vector<std::string> states;
};

/// Runs the three-state example (policy alpha, gamma = 1) end to end. Throws
/// PreconditionError when spurious_c == 0.
PathologyReport pathology_demo(double gamma_b, double spurious_c, std::uint64_t seed, std::size_t episodes = 50000);

} // namespace buchi
