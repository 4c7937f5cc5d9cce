#include "buchi/cli.hpp"

#include "buchi/bellman.hpp"
#include "buchi/chain.hpp"
#include "buchi/errors.hpp"
#include "buchi/generator.hpp"
#include "buchi/model.hpp"
#include "buchi/oracles.hpp"
#include "buchi/product.hpp"
#include "buchi/td.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

namespace buchi::cli {

namespace {

using json = nlohmann::ordered_json;

struct Loaded {
    Mdp model;
    Policy policy;
    InducedChain chain;
    BsccPartition partition;
};

Mdp load_mdp(const std::string& location) {
    Model m = parse_model(load_document(location));
    if (auto* mdp = std::get_if<Mdp>(&m)) return std::move(*mdp);
    throw SchemaError("$.kind", "expected an MDP or product document, got an LDBA");
}

Loaded load_chain(const std::string& model_location, const std::string& policy_location) {
    Loaded l;
    l.model = load_mdp(model_location);
    if (policy_location.empty()) {
        const bool single = std::all_of(l.model.actions.begin(), l.model.actions.end(),
                                        [](const auto& a) { return a.size() == 1; });
        if (!single) throw InputError("--policy is required when some state has more than one action");
        l.policy.choice.assign(l.model.size(), std::size_t{0});
    } else {
        l.policy = parse_policy(load_document(policy_location), l.model);
    }
    l.chain = induce_chain(l.model, l.policy);
    l.partition = decompose(l.chain);
    return l;
}

std::size_t state_index(const Mdp& m, const std::string& id) {
    if (id.empty()) return m.initial;
    if (auto s = m.find_state(id)) return *s;
    throw InputError("unknown state '" + id + "'");
}

json vector_json(const Vector& v) { return json(v); }

json by_state(const InducedChain& c, const Vector& v) {
    json o = json::object();
    for (std::size_t i = 0; i < c.size(); ++i) o[c.states[i]] = v[i];
    return o;
}

json counts_json(const ClassCounts& k) {
    return {{"B_A", k.accepting_recurrent},      {"B_T", k.accepting_transient},
            {"nB_A", k.rejecting_in_accepting},  {"nB_R", k.rejecting_recurrent},
            {"nB_T", k.rejecting_transient},     {"rejecting_bsccs", k.rejecting_bsccs},
            {"accepting_bsccs", k.accepting_bsccs}};
}

struct Sink {
    std::string out = "-";
    std::string format; // json | csv, empty = infer

    std::string resolved_format() const {
        if (!format.empty()) return format;
        if (out == "csv") return "csv";
        if (out == "json" || out == "-") return "json";
        return out.size() >= 4 && out.substr(out.size() - 4) == ".csv" ? "csv" : "json";
    }
    bool to_stdout() const { return out == "-" || out == "json" || out == "csv"; }
};

void emit(const Sink& sink, const std::string& text, std::ostream& out) {
    if (sink.to_stdout()) {
        out << text;
        return;
    }
    std::ofstream f(sink.out, std::ios::binary);
    if (!f) throw InputError("cannot write '" + sink.out + "'");
    f << text;
}

std::string values_csv(const InducedChain& c, const BsccPartition& p, const Vector& v) {
    std::ostringstream os;
    os << std::setprecision(17) << "state,id,class,value\n";
    for (std::size_t i = 0; i < c.size(); ++i) os << i << ',' << c.states[i] << ',' << class_name(p.classes[i]) << ',' << v[i] << '\n';
    return os.str();
}

class Command {
public:
    Command(CLI::App* app, std::string name) : app_(app), name_(std::move(name)) {}
    virtual ~Command() = default;
    CLI::App* app() const { return app_; }
    const std::string& name() const { return name_; }
    virtual void execute(std::ostream& out, std::ostream& err) = 0;

    json config() const {
        json options = json::object();
        for (const CLI::Option* opt : app_->get_options()) {
            if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
            std::string key = opt->get_name();
            key.erase(0, key.find_first_not_of('-'));
            if (opt->count() > 0) {
                const auto& results = opt->results();
                options[key] = results.size() == 1 && !opt->get_expected_max() ? json(true)
                             : results.size() == 1 ? json(results.front()) : json(results);
            } else if (!opt->get_default_str().empty()) {
                options[key] = opt->get_default_str();
            }
        }
        return {{"command", name_}, {"options", options}};
    }

    json report(json result) const {
        json r;
        r["tool"] = {{"name", kToolName}, {"version", kVersion}};
        r["command"] = name_;
        r["config"] = config();
        if (seed_used_) r["config"]["seed"] = seed_;
        r["result"] = std::move(result);
        return r;
    }

protected:
    void use_seed(std::uint64_t seed) {
        seed_used_ = true;
        seed_ = seed;
    }

    CLI::App* app_;
    std::string name_;
    bool seed_used_ = false;
    std::uint64_t seed_ = 0;
};

std::uint64_t resolve_seed(const CLI::Option* flag, std::uint64_t flag_value) {
    if (flag->count() > 0) return flag_value;
    if (const char* env = std::getenv(kSeedVariable); env && *env) {
        std::uint64_t v = 0;
        const std::string_view text(env);
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw InputError(std::string(kSeedVariable) + " is not an unsigned integer: '" + env + "'");
        return v;
    }
    return 0;
}

void add_sink(CLI::App* app, Sink& sink) {
    app->add_option("--out", sink.out, "json, csv, - (stdout) or a file path; .csv files get CSV")
        ->capture_default_str();
    app->add_option("--format", sink.format, "Force the output format")->check(CLI::IsMember({"json", "csv"}));
}

struct Discounts {
    double gamma = 1.0;
    double gamma_b = 0.5;
};

void add_discounts(CLI::App* app, Discounts& d) {
    app->add_option("--gamma", d.gamma, "Discount off the accepting set, in (0, 1]")->capture_default_str();
    app->add_option("--gamma-b", d.gamma_b, "Discount on the accepting set, in (0, gamma)")->capture_default_str();
}

struct ChainInputs {
    std::string model;
    std::string policy;
};

void add_chain_inputs(CLI::App* app, ChainInputs& in) {
    app->add_option("--model", in.model, "Model document (file or builtin:<name>)")->required();
    app->add_option("--policy", in.policy, "Policy document; optional when every state has one action");
}

class ProductCommand : public Command {
public:
    explicit ProductCommand(CLI::App& root) : Command(root.add_subcommand("product", "Build the product of an MDP and an LDBA"), "product") {
        app_->add_option("--mdp", mdp_, "Labeled MDP document")->required();
        app_->add_option("--ldba", ldba_, "LDBA document")->required();
        app_->add_option("--model-out", model_out_, "Also write the bare product document here");
        add_sink(app_, sink_);
    }

    void execute(std::ostream& out, std::ostream& err) override {
        const Mdp m = load_mdp(mdp_);
        const Ldba a = parse_ldba(load_document(ldba_));
        const ProductMDP p = build_product(m, a);
        const std::string doc = serialize(p.model);
        if (!model_out_.empty()) {
            std::ofstream f(model_out_, std::ios::binary);
            if (!f) throw InputError("cannot write '" + model_out_ + "'");
            f << doc << '\n';
        }
        std::size_t reachable = static_cast<std::size_t>(std::count(p.reachable.begin(), p.reachable.end(), true));
        std::size_t accepting = static_cast<std::size_t>(std::count(p.model.accepting.begin(), p.model.accepting.end(), true));
        json unreachable = json::array();
        for (std::size_t i = 0; i < p.model.size(); ++i)
            if (!p.reachable[i]) unreachable.push_back(p.model.states[i]);
        json result = {{"states", p.model.size()},
                       {"accepting", accepting},
                       {"reachable", reachable},
                       {"unreachable_states", unreachable},
                       {"model", json::parse(doc)}};
        err << "product: " << p.model.size() << " states, " << accepting << " accepting, " << reachable
            << " reachable\n";
        if (sink_.resolved_format() != "json") throw InputError("product supports JSON output only");
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

private:
    std::string mdp_, ldba_, model_out_;
    Sink sink_;
};

class BsccCommand : public Command {
public:
    explicit BsccCommand(CLI::App& root) : Command(root.add_subcommand("bscc", "Decompose the induced chain into SCCs and classes"), "bscc") {
        add_chain_inputs(app_, in_);
        add_sink(app_, sink_);
    }

    void execute(std::ostream& out, std::ostream& err) override {
        const Loaded l = load_chain(in_.model, in_.policy);
        const auto& c = l.chain;
        const auto& p = l.partition;
        if (sink_.resolved_format() == "csv") {
            std::ostringstream os;
            os << "state,id,class,scc,bscc\n";
            for (std::size_t i = 0; i < c.size(); ++i)
                os << i << ',' << c.states[i] << ',' << class_name(p.classes[i]) << ',' << p.scc_of[i] << ','
                   << (p.in_bscc(i) ? std::to_string(p.bscc_of[i]) : std::string()) << '\n';
            emit(sink_, os.str(), out);
        }
        json states = json::array();
        for (std::size_t i = 0; i < c.size(); ++i) {
            states.push_back({{"index", i},
                              {"id", c.states[i]},
                              {"class", class_name(p.classes[i])},
                              {"scc", p.scc_of[i]},
                              {"bscc", p.in_bscc(i) ? json(p.bscc_of[i]) : json(nullptr)},
                              {"accepting", static_cast<bool>(c.accepting[i])},
                              {"reachable", static_cast<bool>(p.reachable[i])}});
        }
        json sccs = json::array();
        for (const auto& scc : p.sccs) {
            json ids = json::array();
            for (std::size_t s : scc) ids.push_back(c.states[s]);
            sccs.push_back(ids);
        }
        json bsccs = json::array();
        for (std::size_t k = 0; k < p.bsccs.size(); ++k)
            bsccs.push_back({{"members", sccs[p.bsccs[k]]}, {"accepting", static_cast<bool>(p.bscc_accepting[k])}});

        err << std::left << std::setw(6) << "index" << std::setw(16) << "id" << std::setw(7) << "class"
            << std::setw(6) << "scc" << "bscc\n";
        for (std::size_t i = 0; i < c.size(); ++i) {
            std::string bscc = "-";
            if (p.in_bscc(i)) bscc = std::to_string(p.bscc_of[i]) + (p.bscc_accepting[p.bscc_of[i]] ? " (accepting)" : " (rejecting)");
            err << std::left << std::setw(6) << i << std::setw(16) << c.states[i] << std::setw(7)
                << class_name(p.classes[i]) << std::setw(6) << p.scc_of[i] << bscc << '\n';
        }
        if (sink_.resolved_format() == "csv") return;
        json result = {{"states", states}, {"sccs", sccs}, {"bsccs", bsccs}, {"counts", counts_json(class_counts(p))}};
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

private:
    ChainInputs in_;
    Sink sink_;
};

class EvaluateCommand : public Command {
public:
    explicit EvaluateCommand(CLI::App& root) : Command(root.add_subcommand("evaluate", "Solve the surrogate-reward Bellman equation"), "evaluate") {
        add_chain_inputs(app_, in_);
        add_discounts(app_, d_);
        app_->add_option("--method", method_, "Solver")
            ->check(CLI::IsMember({"auto", "discounted", "accepting", "constrained"}))
            ->capture_default_str();
        add_sink(app_, sink_);
    }

    void execute(std::ostream& out, std::ostream& err) override {
        const Loaded l = load_chain(in_.model, in_.policy);
        const SurrogateReward r(d_.gamma, d_.gamma_b);
        std::string method = method_;
        if (method == "auto")
            method = d_.gamma < 1.0 ? "discounted" : l.partition.rejecting_bscc_count() == 0 ? "accepting" : "constrained";
        Solution sol;
        if (method == "discounted") {
            sol = solve_discounted(build_system(l.chain, r));
        } else {
            if (d_.gamma != 1.0) throw PreconditionError("method '" + method + "' requires gamma = 1");
            sol = method == "accepting" ? solve_accepting(l.chain, l.partition, d_.gamma_b)
                                        : solve_constrained(l.chain, l.partition, d_.gamma_b);
        }
        // Residuals are reported against the full equation, independent of the solver path.
        sol.residual = bellman_residual(l.chain, r, sol.value);
        err << "evaluate: method " << method_name(sol.method) << ", residual " << sol.residual << '\n';
        if (sink_.resolved_format() == "csv") {
            emit(sink_, values_csv(l.chain, l.partition, sol.value), out);
            return;
        }
        json result = {{"method", method_name(sol.method)},
                       {"residual", sol.residual},
                       {"states", l.chain.states},
                       {"value", vector_json(sol.value)},
                       {"value_by_state", by_state(l.chain, sol.value)},
                       {"counts", counts_json(class_counts(l.partition))}};
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

private:
    ChainInputs in_;
    Discounts d_;
    std::string method_ = "auto";
    Sink sink_;
};

class CertifyCommand : public Command {
public:
    explicit CertifyCommand(CLI::App& root) : Command(root.add_subcommand("certify", "Decide uniqueness of the Bellman solution"), "certify") {
        add_chain_inputs(app_, in_);
        add_discounts(app_, d_);
        add_sink(app_, sink_);
    }

    void execute(std::ostream& out, std::ostream& err) override {
        const Loaded l = load_chain(in_.model, in_.policy);
        const SurrogateReward r(d_.gamma, d_.gamma_b);
        const UniquenessCertificate cert = certify(l.chain, l.partition, r);
        err << "certify: " << (cert.unique ? "unique" : "not unique") << ", null space dimension "
            << cert.null_space_dim << ", " << cert.rejecting_bscc_count << " rejecting BSCC(s)\n";
        if (sink_.resolved_format() == "csv") {
            emit(sink_, values_csv(l.chain, l.partition, cert.value.value), out);
            return;
        }
        json basis = json::array();
        for (const auto& v : cert.null_basis) basis.push_back(vector_json(v));
        json result = {{"gamma", cert.gamma},
                       {"gamma_b", cert.gamma_b},
                       {"unique", cert.unique},
                       {"unique_under_condition", cert.unique_under_condition},
                       {"null_space_dim", cert.null_space_dim},
                       {"null_basis", basis},
                       {"condition_applied", cert.condition_applied},
                       {"rejecting_bscc_count", cert.rejecting_bscc_count},
                       {"gershgorin_bound", cert.gershgorin},
                       {"method", method_name(cert.value.method)},
                       {"residual", cert.value.residual},
                       {"states", l.chain.states},
                       {"value", vector_json(cert.value.value)},
                       {"value_by_state", by_state(l.chain, cert.value.value)},
                       {"counts", counts_json(class_counts(l.partition))}};
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

private:
    ChainInputs in_;
    Discounts d_;
    Sink sink_;
};

class McReturnCommand : public Command {
public:
    explicit McReturnCommand(CLI::App& root) : Command(root.add_subcommand("mc-return", "Monte Carlo estimate of the return"), "mc-return") {
        add_chain_inputs(app_, in_);
        add_discounts(app_, d_);
        app_->add_option("--samples", samples_, "Number of sampled paths")->capture_default_str();
        seed_flag_ = app_->add_option("--seed", seed_value_, "Random seed (default: $BUCHI_SEED, else 0)");
        app_->add_option("--mode", mode_, "bscc-aware or cap:<K>")->capture_default_str();
        app_->add_option("--state", state_, "Start state id (default: initial state)");
        add_sink(app_, sink_);
    }

    void execute(std::ostream& out, std::ostream& err) override {
        const std::uint64_t seed = resolve_seed(seed_flag_, seed_value_);
        use_seed(seed);
        const EstimatorMode mode = EstimatorMode::parse(mode_);
        const Loaded l = load_chain(in_.model, in_.policy);
        const SurrogateReward r(d_.gamma, d_.gamma_b);
        const std::size_t s = state_index(l.model, state_);
        const ReturnEstimate est = mc_return(l.chain, l.partition, r, s, samples_, seed, mode);
        err << "mc-return: mean " << est.mean << " +- " << est.std_error << " over " << est.samples << " samples\n";
        if (sink_.resolved_format() != "json") throw InputError("mc-return supports JSON output only");
        json result = {{"state", l.chain.states[s]},
                       {"mean", est.mean},
                       {"stderr", est.std_error},
                       {"samples", est.samples},
                       {"seed", est.seed},
                       {"mode", est.mode.str()}};
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

private:
    ChainInputs in_;
    Discounts d_;
    std::size_t samples_ = 100000;
    std::uint64_t seed_value_ = 0;
    CLI::Option* seed_flag_ = nullptr;
    std::string mode_ = "bscc-aware";
    std::string state_;
    Sink sink_;
};

double parse_double(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw InputError("invalid number '" + std::string(text) + "' in " + what);
    return v;
}

std::pair<std::string, double> parse_assignment(std::string_view text, const std::string& what) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw InputError("expected <state>=<value> in " + what + ", got '" + std::string(text) + "'");
    return {std::string(text.substr(0, eq)), parse_double(text.substr(eq + 1), what)};
}

class TdCommand : public Command {
public:
    explicit TdCommand(CLI::App& root) : Command(root.add_subcommand("td", "Tabular TD(0) policy evaluation"), "td") {
        add_chain_inputs(app_, in_);
        add_discounts(app_, d_);
        app_->add_option("--episodes", cfg_.episodes, "Number of episodes")->capture_default_str();
        app_->add_option("--max-steps", cfg_.max_steps, "Step cap per episode")->capture_default_str();
        app_->add_option("--a0", cfg_.a0, "Initial step size, in (0, 1]")->capture_default_str();
        app_->add_option("--tau", cfg_.tau, "Step-size decay scale: a0 / (1 + t / tau)")->capture_default_str();
        seed_flag_ = app_->add_option("--seed", seed_value_, "Random seed (default: $BUCHI_SEED, else 0)");
        app_->add_option("--init", init_, "zeros, constant:<c> or values:<state>=<v>,...")->capture_default_str();
        app_->add_option("--pin", pins_, "Freeze a state's value: <state>=<value> (repeatable)");
        app_->add_flag("--trace", trace_, "Include the per-episode trace");
        add_sink(app_, sink_);
    }

    void execute(std::ostream& out, std::ostream& err) override {
        cfg_.seed = resolve_seed(seed_flag_, seed_value_);
        use_seed(cfg_.seed);
        const Loaded l = load_chain(in_.model, in_.policy);
        const SurrogateReward r(d_.gamma, d_.gamma_b);
        const std::size_t n = l.chain.size();

        if (init_ == "zeros") {
            cfg_.init = TdConfig::Init::zeros;
        } else if (init_.starts_with("constant:")) {
            cfg_.init = TdConfig::Init::constant;
            cfg_.init_constant = parse_double(std::string_view(init_).substr(9), "--init");
        } else if (init_.starts_with("values:")) {
            cfg_.init = TdConfig::Init::per_state;
            cfg_.init_values.assign(n, 0.0);
            std::string_view rest = std::string_view(init_).substr(7);
            while (!rest.empty()) {
                const auto comma = rest.find(',');
                const auto [id, v] = parse_assignment(rest.substr(0, comma), "--init");
                cfg_.init_values[state_index(l.model, id)] = v;
                rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            }
        } else {
            throw InputError("unknown --init '" + init_ + "'");
        }
        for (const auto& pin : pins_) {
            const auto [id, v] = parse_assignment(pin, "--pin");
            cfg_.pinned[state_index(l.model, id)] = v;
        }

        Solution reference = d_.gamma < 1.0 ? solve_discounted(build_system(l.chain, r))
                                            : solve_constrained(l.chain, l.partition, d_.gamma_b);
        const TdResult td = td_evaluate(l.chain, l.partition, r, cfg_, &reference.value);
        const double error = td.trace.empty() ? norm_inf(reference.value) : td.trace.back();
        err << "td: " << cfg_.episodes << " episodes, " << td.updates << " updates, ||V - reference||_inf = " << error
            << '\n';
        if (sink_.resolved_format() == "csv") {
            emit(sink_, values_csv(l.chain, l.partition, td.value), out);
            return;
        }
        json result = {{"states", l.chain.states},
                       {"value", vector_json(td.value)},
                       {"value_by_state", by_state(l.chain, td.value)},
                       {"updates", td.updates},
                       {"reference_method", method_name(reference.method)},
                       {"reference", vector_json(reference.value)},
                       {"error_inf", error}};
        if (trace_) result["trace"] = td.trace;
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

private:
    ChainInputs in_;
    Discounts d_;
    TdConfig cfg_;
    std::uint64_t seed_value_ = 0;
    CLI::Option* seed_flag_ = nullptr;
    std::string init_ = "zeros";
    std::vector<std::string> pins_;
    bool trace_ = false;
    Sink sink_;
};

class DemoCommand : public Command {
public:
    explicit DemoCommand(CLI::App& root) : Command(root.add_subcommand("demo", "Scripted demonstrations"), "demo example1") {
        app_->require_subcommand(1);
        sub_ = app_->add_subcommand("example1", "Multiple fixed points of the three-state example at gamma = 1");
        sub_->add_option("--gamma-b", gamma_b_, "Discount on the accepting set")->capture_default_str();
        sub_->add_option("--c", c_, "Spurious constant placed on the rejecting self-loop")->capture_default_str();
        sub_->add_option("--episodes", episodes_, "TD episodes")->capture_default_str();
        seed_flag_ = sub_->add_option("--seed", seed_value_, "Random seed (default: $BUCHI_SEED, else 0)");
        add_sink(sub_, sink_);
        app_ = sub_;
    }

    void execute(std::ostream& out, std::ostream& err) override {
        const std::uint64_t seed = resolve_seed(seed_flag_, seed_value_);
        use_seed(seed);
        const PathologyReport rep = pathology_demo(gamma_b_, c_, seed, episodes_);
        const auto fmt = [](const Vector& v) {
            std::ostringstream os;
            os << '(';
            for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
            return os.str() + ')';
        };
        err << "gamma = 1, gamma_B = " << rep.gamma_b << ", policy alpha\n"
            << "  unique: " << (rep.unique ? "yes" : "no") << ", null space dimension " << rep.null_space_dim
            << ", direction " << fmt(rep.null_direction) << '\n';
        for (const auto& f : rep.family)
            err << "  V = " << fmt(f.value) << " has residual " << f.residual << '\n';
        err << "  greedy action at s1: " << rep.greedy_with_constrained << " under the constrained value, "
            << rep.greedy_with_spurious << " under V(s3) = " << rep.spurious_c << '\n'
            << "  TD from V = " << rep.spurious_c << ": " << fmt(rep.td_final) << '\n'
            << "  TD with s3 pinned to 0: " << fmt(rep.td_pinned_final) << '\n';
        if (sink_.resolved_format() != "json") throw InputError("demo supports JSON output only");
        json family = json::array();
        for (const auto& f : rep.family) family.push_back({{"c", f.c}, {"value", vector_json(f.value)}, {"residual", f.residual}});
        json result = {{"states", rep.states},
                       {"gamma", 1.0},
                       {"gamma_b", rep.gamma_b},
                       {"spurious_c", rep.spurious_c},
                       {"unique", rep.unique},
                       {"null_space_dim", rep.null_space_dim},
                       {"null_direction", vector_json(rep.null_direction)},
                       {"family", family},
                       {"constrained_value", vector_json(rep.constrained_value)},
                       {"constrained_residual", rep.constrained_residual},
                       {"greedy_with_spurious", rep.greedy_with_spurious},
                       {"greedy_with_constrained", rep.greedy_with_constrained},
                       {"td_episodes", rep.td_episodes},
                       {"td_final", vector_json(rep.td_final)},
                       {"td_pinned_final", vector_json(rep.td_pinned_final)}};
        emit(sink_, report(std::move(result)).dump(2) + "\n", out);
    }

    bool selected() const { return sub_->parsed(); }

private:
    CLI::App* sub_;
    double gamma_b_ = 0.5;
    double c_ = 2.0;
    std::size_t episodes_ = 50000;
    std::uint64_t seed_value_ = 0;
    CLI::Option* seed_flag_ = nullptr;
    Sink sink_;
};

class GenCommand : public Command {
public:
    explicit GenCommand(CLI::App& root) : Command(root.add_subcommand("gen", "Generators"), "gen random") {
        app_->require_subcommand(1);
        sub_ = app_->add_subcommand("random", "Random chain with planted accepting and rejecting BSCCs");
        sub_->add_option("--states", spec_.states, "Number of states")->capture_default_str();
        sub_->add_option("--rejecting-bsccs", spec_.rejecting_bsccs, "Planted rejecting BSCCs")->capture_default_str();
        sub_->add_option("--accepting-bsccs", spec_.accepting_bsccs, "Planted accepting BSCCs")->capture_default_str();
        sub_->add_option("--accepting-fraction", spec_.accepting_fraction, "Chance a free state is accepting")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
        sub_->add_option("--max-bscc-size", spec_.max_bscc_size, "Largest planted BSCC")->capture_default_str();
        sub_->add_option("--actions", spec_.actions, "Actions per state")->capture_default_str();
        seed_flag_ = sub_->add_option("--seed", seed_value_, "Random seed (default: $BUCHI_SEED, else 0)");
        sub_->add_option("--policy-out", policy_out_, "Also write the planted policy here");
        add_sink(sub_, sink_);
        app_ = sub_;
    }

    void execute(std::ostream& out, std::ostream& err) override {
        spec_.seed = resolve_seed(seed_flag_, seed_value_);
        const GeneratedChain g = generate_chain(spec_);
        if (!policy_out_.empty()) {
            std::ofstream f(policy_out_, std::ios::binary);
            if (!f) throw InputError("cannot write '" + policy_out_ + "'");
            f << serialize(g.policy, g.model) << '\n';
        }
        err << "gen random: " << g.model.size() << " states, " << g.rejecting_bsccs << " rejecting and "
            << g.accepting_bsccs << " accepting BSCC(s), seed " << spec_.seed << '\n';
        if (sink_.resolved_format() != "json") throw InputError("gen random emits JSON model documents only");
        emit(sink_, serialize(g.model) + "\n", out);
    }

    bool selected() const { return sub_->parsed(); }

private:
    CLI::App* sub_;
    ChainSpec spec_;
    std::uint64_t seed_value_ = 0;
    CLI::Option* seed_flag_ = nullptr;
    std::string policy_out_;
    Sink sink_;
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Büchi surrogate-reward policy evaluation", std::string(kToolName)};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    commands.push_back(std::make_unique<ProductCommand>(app));
    commands.push_back(std::make_unique<BsccCommand>(app));
    commands.push_back(std::make_unique<EvaluateCommand>(app));
    commands.push_back(std::make_unique<CertifyCommand>(app));
    commands.push_back(std::make_unique<McReturnCommand>(app));
    commands.push_back(std::make_unique<TdCommand>(app));
    commands.push_back(std::make_unique<DemoCommand>(app));
    commands.push_back(std::make_unique<GenCommand>(app));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        for (auto& c : commands)
            if (c->app()->parsed()) {
                c->execute(out, err);
                return 0;
            }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        err << "internal error: " << e.what() << '\n';
        return 4;
    }
    err << "no command given\n";
    return 1;
}

} // namespace buchi::cli
