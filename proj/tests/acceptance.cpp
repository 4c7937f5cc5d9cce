// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "buchi/bellman.hpp"
#include "buchi/builtin.hpp"
#include "buchi/chain.hpp"
#include "buchi/generator.hpp"
#include "buchi/oracles.hpp"
#include "buchi/product.hpp"
#include "buchi/rng.hpp"
#include "buchi/td.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace buchi;

namespace {

constexpr std::uint64_t kSeed = 20240917;
constexpr std::size_t kSuiteSize = 100;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

struct Sample {
    InducedChain chain;
    BsccPartition partition;
    std::size_t rejecting = 0;
};

Sample make_sample(const ChainSpec& spec) {
    const auto g = generate_chain(spec);
    Sample s{induce_chain(g.model, g.policy), {}, g.rejecting_bsccs};
    s.partition = decompose(s.chain);
    return s;
}

// Suite 2: any BSCC mix. Suite 3: accepting BSCCs only. Suite 5: both kinds.
ChainSpec suite_spec(int suite, std::size_t i) {
    CounterRng rng(kSeed + static_cast<std::uint64_t>(suite), i);
    ChainSpec spec;
    spec.seed = kSeed * 31 + static_cast<std::uint64_t>(suite) * 1000 + i;
    spec.accepting_bsccs = 1 + rng.below(2);
    spec.rejecting_bsccs = suite == 3 ? 0 : suite == 5 ? 1 + rng.below(3) : rng.below(3);
    const std::size_t floor = spec.accepting_bsccs + spec.rejecting_bsccs + 1;
    spec.states = floor + rng.below(20 - floor + 1);
    spec.accepting_fraction = 0.2 + 0.4 * rng.uniform();
    return spec;
}

Vector ex1_operator_null() { return {0.0, 0.0, 1.0}; }

double max_diff(const Vector& a, const Vector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

InducedChain ex1_chain(const char* policy) {
    const Mdp m = parse_mdp(builtin_document("ex1"));
    return induce_chain(m, parse_policy(builtin_document(policy), m));
}

void criterion1(Outcome& o) {
    const Mdp m = parse_mdp(builtin_document("ex1"));
    const InducedChain c = ex1_chain("ex1-alpha");
    const BsccPartition p = decompose(c);
    const SurrogateReward r(1.0, 0.5);
    const auto cert = certify(c, p, r);
    o.require(!cert.unique, "certificate reports unique");
    o.require(cert.null_space_dim == 1, "null_space_dim != 1");
    o.require(cert.null_basis.size() == 1 && cert.null_basis[0] == ex1_operator_null(), "null direction not supported on {s3}");
    o.require(cert.value.value == Vector{1.0, 1.0, 0.0}, "constrained value != (1,1,0)");
    o.require(bellman_residual(c, r, cert.value.value) <= 1e-9, "residual > 1e-9");
    const std::size_t s1 = *m.find_state("s1");
    o.require(m.actions[s1][greedy_action(m, cert.value.value, s1)] == "alpha", "greedy under constrained value is not alpha");
    o.require(m.actions[s1][greedy_action(m, {cert.value.value[0], 1.0, 2.0}, s1)] == "beta",
              "greedy with V(s3)=2 is not beta");
    o.detail << "null_space_dim=" << cert.null_space_dim << ", V=(1,1,0), residual=" << cert.value.residual;
}

void criterion2(Outcome& o) {
    std::size_t checks = 0;
    double worst_residual = 0.0, worst_z = 0.0;
    for (std::size_t i = 0; i < kSuiteSize; ++i) {
        const Sample s = make_sample(suite_spec(2, i));
        for (double gamma : {0.5, 0.9, 0.99}) {
            const SurrogateReward r(gamma, gamma / 2);
            const Solution sol = solve_discounted(build_system(s.chain, r));
            const double residual = bellman_residual(s.chain, r, sol.value);
            worst_residual = std::max(worst_residual, residual);
            o.require(residual <= 1e-9, "residual > 1e-9");
            const auto k = static_cast<std::size_t>(std::ceil(std::log(1e-4) / std::log(gamma)));
            const std::size_t start = s.chain.initial;
            const auto est = mc_return(s.chain, s.partition, r, start, 100000, kSeed + i,
                                       EstimatorMode{EstimatorMode::Kind::cap, k});
            const double gap = std::abs(est.mean - sol.value[start]);
            const double tol = 4 * est.std_error + 1e-4;
            o.require(gap <= tol, "chain " + std::to_string(i) + " gamma " + std::to_string(gamma) + ": |mc - solve| = " +
                                      std::to_string(gap) + " > " + std::to_string(tol));
            worst_z = std::max(worst_z, gap / tol);
            ++checks;
        }
    }
    o.detail << checks << " (chain, gamma) pairs, max residual " << worst_residual << ", max |mc-solve|/tol "
             << worst_z;
}

void criterion3(Outcome& o) {
    double worst = 0.0;
    for (std::size_t i = 0; i < kSuiteSize; ++i) {
        const Sample s = make_sample(suite_spec(3, i));
        for (double gb : {0.5, 0.9}) {
            const SurrogateReward r(1.0, gb);
            const Solution sol = solve_accepting(s.chain, s.partition, gb);
            const double ones = max_diff(sol.value, Vector(s.chain.size(), 1.0));
            const double residual = bellman_residual(s.chain, r, sol.value);
            worst = std::max({worst, ones, residual});
            o.require(ones <= 1e-9, "solve_accepting differs from all-ones");
            o.require(residual <= 1e-9, "full Bellman residual > 1e-9");
        }
    }
    o.detail << kSuiteSize << " chains x 2 gamma_B, max deviation " << worst;
}

void criterion4(Outcome& o) {
    double worst = 0.0;
    for (std::size_t i = 0; i < kSuiteSize; ++i) {
        const Sample s = make_sample(suite_spec(3, i));
        const AcceptingChain ac = first_return_matrix(s.chain, s.partition);
        for (const Matrix* m : {&ac.p_b, &ac.p_init})
            for (std::size_t r = 0; r < m->rows(); ++r) {
                double sum = 0.0;
                for (double x : m->row(r)) sum += x;
                worst = std::max(worst, std::abs(sum - 1.0));
                o.require(std::abs(sum - 1.0) <= 1e-9, "row sum off by more than 1e-9");
            }
    }
    const Mdp loop = parse_mdp(builtin_document("loop2"));
    Policy go;
    go.choice.assign(loop.size(), std::size_t{0});
    const AcceptingChain ac = first_return_matrix(induce_chain(loop, go));
    o.require(ac.p_b.rows() == 1 && std::abs(ac.p_b(0, 0) - 1.0) <= 1e-12, "LOOP2 P_B != [1]");
    o.detail << "max |row sum - 1| " << worst << ", LOOP2 P_B = [" << ac.p_b(0, 0) << "]";
}

void criterion5(Outcome& o) {
    std::size_t states = 0;
    double worst_residual = 0.0, worst_z = 0.0;
    for (std::size_t i = 0; i < kSuiteSize; ++i) {
        const Sample s = make_sample(suite_spec(5, i));
        const SurrogateReward r(1.0, 0.9);
        const auto cert = certify(s.chain, s.partition, r);
        o.require(cert.null_space_dim == s.rejecting, "chain " + std::to_string(i) + ": null_space_dim " +
                                                         std::to_string(cert.null_space_dim) + " != planted " +
                                                         std::to_string(s.rejecting));
        const Solution sol = solve_constrained(s.chain, s.partition, 0.9);
        const double residual = bellman_residual(s.chain, r, sol.value);
        worst_residual = std::max(worst_residual, residual);
        o.require(residual <= 1e-9, "residual > 1e-9");
        for (std::size_t st = 0; st < s.chain.size(); ++st) {
            const auto est = mc_return(s.chain, s.partition, r, st, 100000, kSeed ^ (i * 7919 + st), EstimatorMode{});
            const double gap = std::abs(est.mean - sol.value[st]);
            // Zero-variance estimates are exact up to floating-point summation.
            const double tol = est.std_error > 0.0 ? 4 * est.std_error : 1e-9;
            o.require(gap <= tol, "chain " + std::to_string(i) + " state " + std::to_string(st) + ": |mc - solve| = " +
                                      std::to_string(gap) + " > " + std::to_string(tol));
            if (est.std_error > 0.0) worst_z = std::max(worst_z, gap / est.std_error);
            ++states;
        }
    }
    o.detail << kSuiteSize << " chains, " << states << " states, max residual " << worst_residual
             << ", max |mc-solve|/stderr " << worst_z;
}

void criterion6(Outcome& o) {
    std::size_t gapped = 0;
    for (std::size_t i = 0; i < kSuiteSize; ++i) {
        const Sample s = make_sample(suite_spec(5, i));
        const Vector reach = reachability_probability(s.chain, s.partition);
        const Vector v90 = solve_constrained(s.chain, s.partition, 0.9).value;
        const Vector v99 = solve_constrained(s.chain, s.partition, 0.99).value;
        const Vector v999 = solve_constrained(s.chain, s.partition, 0.999).value;
        for (std::size_t st = 0; st < s.chain.size(); ++st) {
            o.require(v99[st] <= v90[st] + 1e-12 && v999[st] <= v99[st] + 1e-12, "values increase with gamma_B");
            for (const Vector* v : {&v90, &v99, &v999}) o.require((*v)[st] >= reach[st] - 1e-9, "value below reachability");
            const double gap99 = v99[st] - reach[st];
            const double gap999 = v999[st] - reach[st];
            if (gap99 > 1e-12) {
                ++gapped;
                o.require(gap999 < gap99, "gap at 0.999 not below gap at 0.99");
            } else {
                o.require(gap999 <= 1e-12, "gap appears at 0.999 where 0.99 has none");
            }
        }
    }
    o.detail << gapped << " states with a nonzero gap, all shrinking";
}

void criterion7(Outcome& o) {
    const InducedChain c = ex1_chain("ex1-alpha");
    const BsccPartition p = decompose(c);
    TdConfig cfg;
    cfg.episodes = 50000;
    cfg.seed = kSeed;

    const SurrogateReward discounted(0.9, 0.5);
    const Vector oracle90 = solve_discounted(build_system(c, discounted)).value;
    const double err90 = max_diff(td_evaluate(c, p, discounted, cfg).value, oracle90);
    o.require(err90 <= 0.05, "gamma=0.9 TD error > 0.05");

    const SurrogateReward undiscounted(1.0, 0.5);
    TdConfig pinned = cfg;
    pinned.pinned[*parse_mdp(builtin_document("ex1")).find_state("s3")] = 0.0;
    const Vector oracle1 = solve_constrained(c, p, 0.5).value;
    const double err1 = max_diff(td_evaluate(c, p, undiscounted, pinned).value, oracle1);
    o.require(err1 <= 0.05, "gamma=1 pinned TD error > 0.05");

    TdConfig spurious = cfg;
    spurious.init = TdConfig::Init::per_state;
    spurious.init_values = {0.0, 0.0, 2.0};
    const Vector v = td_evaluate(c, p, undiscounted, spurious).value;
    o.require(v[2] == 2.0, "V(s3) moved away from 2.0");
    o.detail << "seed " << kSeed << ", err(gamma=0.9) " << err90 << ", err(gamma=1, pinned) " << err1
             << ", V(s3) = " << v[2];
}

void criterion8(Outcome& o) {
    const Mdp m = parse_mdp(builtin_document("ex1"));
    const Ldba a = parse_ldba(builtin_document("gf_ldba"));
    const ProductMDP p = build_product(m, a);
    o.require(p.model.size() == 6, "product does not have 6 states");
    for (std::size_t i = 0; i < p.model.size(); ++i)
        for (const auto& row : p.model.transitions[i]) {
            double sum = 0.0;
            for (const auto& t : row) sum += t.prob;
            o.require(std::abs(sum - 1.0) <= 1e-9, "product row not stochastic");
        }
    std::size_t identical = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        CounterRng pick(kSeed, seed);
        Policy pol;
        for (std::size_t i = 0; i < p.model.size(); ++i) pol.choice.push_back(pick.below(p.model.actions[i].size()));
        const auto controller = project_policy(p, pol, m, a);
        if (simulate_controller(controller, m, 20, seed) == simulate_product(p, pol, 20, seed)) ++identical;
    }
    o.require(identical == 100, "traces differ");
    o.detail << p.model.size() << " states, " << identical << "/100 identical 20-step traces";
}

void criterion9(Outcome& o) {
    std::size_t models = 0;
    const Mdp ex1 = parse_mdp(builtin_document("ex1"));
    for (const auto& name : builtin_names()) {
        const std::string doc(builtin_document(name));
        if (doc.find("\"policy\"") != std::string::npos) {
            const Mdp& target = name.starts_with("ex1") ? ex1 : parse_mdp(builtin_document("split"));
            const Policy pol = parse_policy(doc, target);
            o.require(parse_policy(serialize(pol, target), target) == pol, "policy round trip: " + name);
        } else {
            const Model m = parse_model(doc);
            if (const auto* mdp = std::get_if<Mdp>(&m)) o.require(parse_mdp(serialize(*mdp)) == *mdp, "MDP round trip: " + name);
            if (const auto* ldba = std::get_if<Ldba>(&m)) o.require(parse_ldba(serialize(*ldba)) == *ldba, "LDBA round trip: " + name);
        }
        ++models;
    }
    const ProductMDP product = build_product(ex1, parse_ldba(builtin_document("fg_ldba")));
    o.require(parse_mdp(serialize(product.model)) == product.model, "product round trip");
    for (std::size_t i = 0; i < kSuiteSize; ++i) {
        ChainSpec spec = suite_spec(2, i);
        spec.actions = 1 + i % 3;
        const auto g = generate_chain(spec);
        o.require(parse_mdp(serialize(g.model)) == g.model, "generated model round trip");
        o.require(parse_policy(serialize(g.policy, g.model), g.model) == g.policy, "generated policy round trip");
        ++models;
    }
    o.detail << models << " documents plus one product";
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"ex1 spurious fixed point and constrained solve", criterion1},
        {"discounted solve vs capped Monte Carlo", criterion2},
        {"accepting-only chains evaluate to one", criterion3},
        {"first-return structure", criterion4},
        {"null space and constrained solve vs BSCC-aware Monte Carlo", criterion5},
        {"limit behaviour in gamma_B", criterion6},
        {"TD evaluation and the spurious fixed point", criterion7},
        {"product construction and controller co-simulation", criterion8},
        {"format round trip", criterion9},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s [%zu] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
