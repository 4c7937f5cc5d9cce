#include "buchi/td.hpp"

#include "buchi/builtin.hpp"
#include "buchi/errors.hpp"
#include "buchi/rng.hpp"

#include <algorithm>
#include <cmath>

namespace buchi {

void TdConfig::validate(std::size_t states) const {
    if (!(a0 > 0.0 && a0 <= 1.0)) throw InputError("a0 must lie in (0, 1]");
    if (!(tau > 0.0)) throw InputError("tau must be positive");
    if (init == Init::per_state && init_values.size() != states)
        throw InputError("per-state initializer has " + std::to_string(init_values.size()) + " entries, expected " +
                         std::to_string(states));
    for (const auto& [s, v] : pinned) {
        (void)v;
        if (s >= states) throw InputError("pinned state index out of range");
    }
}

TdResult td_evaluate(const InducedChain& chain, const BsccPartition& partition, const SurrogateReward& r,
                     const TdConfig& cfg, const Vector* reference) {
    const std::size_t n = chain.size();
    cfg.validate(n);
    TdResult out;
    switch (cfg.init) {
    case TdConfig::Init::zeros: out.value.assign(n, 0.0); break;
    case TdConfig::Init::constant: out.value.assign(n, cfg.init_constant); break;
    case TdConfig::Init::per_state: out.value = cfg.init_values; break;
    }
    std::vector<bool> frozen(n, false);
    for (const auto& [s, v] : cfg.pinned) {
        out.value[s] = v;
        frozen[s] = true;
    }
    if (n == 0) return out;

    const ChainSampler sampler(chain);
    const Vector reward = r.rewards(chain.accepting);
    const Vector discount = r.discounts(chain.accepting);
    Vector& v = out.value;
    out.trace.reserve(cfg.episodes);

    for (std::size_t e = 0; e < cfg.episodes; ++e) {
        CounterRng rng(cfg.seed, e);
        std::size_t s = rng.below(n);
        const bool started_transient = !partition.in_bscc(s);
        double largest = 0.0;
        for (std::size_t step = 0; step < cfg.max_steps; ++step) {
            const std::size_t next = sampler.next(s, rng.uniform());
            if (!frozen[s]) {
                const double delta = cfg.step_size(out.updates) * (reward[s] + discount[s] * v[next] - v[s]);
                v[s] += delta;
                largest = std::max(largest, std::abs(delta));
                ++out.updates;
            }
            s = next;
            if (started_transient && partition.in_bscc(s)) break;
        }
        if (reference) {
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(v[i] - (*reference)[i]));
            out.trace.push_back(err);
        } else {
            out.trace.push_back(largest);
        }
    }
    return out;
}

std::size_t greedy_action(const Mdp& model, const Vector& v, std::size_t s) {
    const auto& actions = model.actions.at(s);
    std::size_t best = 0;
    double best_value = 0.0;
    for (std::size_t a = 0; a < actions.size(); ++a) {
        double q = 0.0;
        for (const auto& t : model.transitions[s][a]) q += t.prob * v.at(t.target);
        if (a == 0 || q > best_value || (q == best_value && actions[a] < actions[best])) {
            best = a;
            best_value = q;
        }
    }
    return best;
}

PathologyReport pathology_demo(double gamma_b, double spurious_c, std::uint64_t seed, std::size_t episodes) {
    if (spurious_c == 0.0) throw PreconditionError("the spurious constant must be nonzero");
    const SurrogateReward r(1.0, gamma_b);
    const Mdp model = parse_mdp(builtin_document("ex1"));
    const Policy pol = parse_policy(builtin_document("ex1-alpha"), model);
    const InducedChain chain = induce_chain(model, pol);
    const BsccPartition partition = decompose(chain);
    const std::size_t s1 = *model.find_state("s1");
    const std::size_t s3 = *model.find_state("s3");

    PathologyReport rep;
    rep.gamma_b = gamma_b;
    rep.spurious_c = spurious_c;
    rep.seed = seed;
    rep.states = chain.states;
    rep.td_episodes = episodes;

    const UniquenessCertificate cert = certify(chain, partition, r);
    rep.unique = cert.unique;
    rep.null_space_dim = cert.null_space_dim;
    if (!cert.null_basis.empty()) rep.null_direction = cert.null_basis.front();
    rep.constrained_value = cert.value.value;
    rep.constrained_residual = cert.value.residual;

    for (double c : {0.0, spurious_c}) {
        Vector member = rep.constrained_value;
        member[s3] = c;
        rep.family.push_back({c, member, bellman_residual(chain, r, member)});
    }
    rep.greedy_with_constrained = model.actions[s1][greedy_action(model, rep.constrained_value, s1)];
    rep.greedy_with_spurious = model.actions[s1][greedy_action(model, rep.family.back().value, s1)];

    TdConfig cfg;
    cfg.episodes = episodes;
    cfg.seed = seed;
    cfg.init = TdConfig::Init::constant;
    cfg.init_constant = spurious_c;
    rep.td_final = td_evaluate(chain, partition, r, cfg).value;

    TdConfig pinned;
    pinned.episodes = episodes;
    pinned.seed = seed;
    pinned.pinned[s3] = 0.0;
    rep.td_pinned_final = td_evaluate(chain, partition, r, pinned).value;
    return rep;
}

} // namespace buchi
