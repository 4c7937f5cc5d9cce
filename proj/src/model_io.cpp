#include "buchi/model.hpp"

#include "buchi/builtin.hpp"
#include "buchi/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace buchi {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is the 1-based offset of the last character read.
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        if (auto pos = what.find("syntax error while parsing value - "); pos != std::string::npos)
            what = what.substr(pos + 35);
        throw SyntaxError(line, column, what);
    }
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
    return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array");
    return j;
}

const json& as_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    return j;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
    std::vector<std::string> out;
    as_array(j, path);
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string format_number(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

std::vector<std::string> unique_ids(const json& j, const std::string& path, const char* what) {
    auto ids = string_list(j, path);
    std::set<std::string> seen;
    for (const auto& id : ids)
        if (!seen.insert(id).second) throw InvariantViolation(std::string("duplicate ") + what + " '" + id + "'");
    return ids;
}

std::size_t index_of(const std::vector<std::string>& ids, const std::string& id, const char* what) {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw InvariantViolation(std::string("unknown ") + what + " '" + id + "'");
    return static_cast<std::size_t>(it - ids.begin());
}

Letter parse_label(const json& j, const std::string& path, const std::vector<std::string>& atoms) {
    Letter letter(atoms.size(), false);
    for (const auto& name : string_list(j, path)) {
        auto it = std::find(atoms.begin(), atoms.end(), name);
        if (it == atoms.end()) throw InvariantViolation("label at " + path + " references undeclared atom '" + name + "'");
        letter[static_cast<std::size_t>(it - atoms.begin())] = true;
    }
    return letter;
}

std::string kind_of(const json& doc) { return as_string(field(doc, "kind", "$"), "$.kind"); }

Mdp mdp_from_json(const json& doc) {
    Mdp m;
    const std::string kind = kind_of(doc);
    if (kind == "mdp") m.kind = ModelKind::mdp;
    else if (kind == "product") m.kind = ModelKind::product;
    else throw SchemaError("$.kind", "expected \"mdp\" or \"product\", got \"" + kind + "\"");

    m.states = unique_ids(field(doc, "states", "$"), "$.states", "state");
    if (m.states.empty()) throw InvariantViolation("model has no states");
    const std::string initial = as_string(field(doc, "initial", "$"), "$.initial");
    m.initial = index_of(m.states, initial, "initial state");

    if (const json* atoms = optional_field(doc, "atoms")) m.atoms = unique_ids(*atoms, "$.atoms", "atom");
    for (const auto& a : m.atoms)
        if (a == "t" || a == "f") throw InvariantViolation("atom name '" + a + "' is reserved");

    const std::size_t n = m.states.size();
    m.labels.assign(n, Letter(m.atoms.size(), false));
    if (const json* labels = optional_field(doc, "labels")) {
        as_object(*labels, "$.labels");
        for (const auto& [state, atoms] : labels->items()) {
            const std::size_t s = index_of(m.states, state, "state in labels");
            m.labels[s] = parse_label(atoms, "$.labels." + state, m.atoms);
        }
    }

    const json& actions = as_object(field(doc, "actions", "$"), "$.actions");
    m.actions.resize(n);
    for (const auto& [state, list] : actions.items()) {
        const std::size_t s = index_of(m.states, state, "state in actions");
        m.actions[s] = unique_ids(list, "$.actions." + state, "action");
    }
    for (std::size_t s = 0; s < n; ++s)
        if (m.actions[s].empty()) throw InvariantViolation("state '" + m.states[s] + "' has no actions");

    m.transitions.resize(n);
    for (std::size_t s = 0; s < n; ++s) m.transitions[s].resize(m.actions[s].size());
    const json& transitions = as_array(field(doc, "transitions", "$"), "$.transitions");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const std::string path = "$.transitions[" + std::to_string(i) + "]";
        const json& t = as_object(transitions[i], path);
        const std::size_t from = index_of(m.states, as_string(field(t, "from", path), path + ".from"), "state");
        const std::string action = as_string(field(t, "action", path), path + ".action");
        const std::size_t to = index_of(m.states, as_string(field(t, "to", path), path + ".to"), "state");
        const double prob = as_number(field(t, "prob", path), path + ".prob");
        auto a = m.find_action(from, action);
        if (!a) throw InvariantViolation("action '" + action + "' is not allowed at state '" + m.states[from] + "'");
        if (!(prob > 0.0) || prob > 1.0)
            throw InvariantViolation("probability " + format_number(prob) + " at " + path + " is outside (0, 1]");
        auto& row = m.transitions[from][*a];
        if (std::any_of(row.begin(), row.end(), [&](const Transition& x) { return x.target == to; }))
            throw InvariantViolation("duplicate transition (" + m.states[from] + ", " + action + ", " + m.states[to] + ")");
        row.push_back({to, prob});
    }
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t a = 0; a < m.actions[s].size(); ++a) {
            double sum = 0.0;
            for (const auto& t : m.transitions[s][a]) sum += t.prob;
            if (std::abs(sum - 1.0) > kProbabilityTolerance)
                throw InvariantViolation("probabilities sum to " + format_number(sum) + " at (" + m.states[s] + ", " +
                                         m.actions[s][a] + ")");
        }

    m.accepting.assign(n, false);
    if (const json* acc = optional_field(doc, "accepting"))
        for (const auto& id : string_list(*acc, "$.accepting")) m.accepting[index_of(m.states, id, "accepting state")] = true;
    return m;
}

Ldba ldba_from_json(const json& doc) {
    Ldba a;
    if (kind_of(doc) != "ldba") throw SchemaError("$.kind", "expected \"ldba\"");
    a.states = unique_ids(field(doc, "states", "$"), "$.states", "automaton state");
    if (a.states.empty()) throw InvariantViolation("automaton has no states");
    a.initial = index_of(a.states, as_string(field(doc, "initial", "$"), "$.initial"), "initial state");
    if (const json* atoms = optional_field(doc, "atoms")) a.atoms = unique_ids(*atoms, "$.atoms", "atom");
    for (const auto& name : a.atoms)
        if (name == "t" || name == "f") throw InvariantViolation("atom name '" + name + "' is reserved");

    const std::size_t n = a.states.size();
    a.accepting.assign(n, false);
    if (const json* acc = optional_field(doc, "accepting"))
        for (const auto& id : string_list(*acc, "$.accepting")) a.accepting[index_of(a.states, id, "accepting state")] = true;

    const json& transitions = as_array(field(doc, "transitions", "$"), "$.transitions");
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const std::string path = "$.transitions[" + std::to_string(i) + "]";
        const json& t = as_object(transitions[i], path);
        GuardedTransition gt;
        gt.from = index_of(a.states, as_string(field(t, "from", path), path + ".from"), "automaton state");
        gt.to = index_of(a.states, as_string(field(t, "to", path), path + ".to"), "automaton state");
        gt.guard = Guard::parse(as_string(field(t, "guard", path), path + ".guard")).bind(a.atoms);
        a.transitions.push_back(std::move(gt));
    }

    a.epsilon.resize(n);
    if (const json* eps = optional_field(doc, "epsilon")) {
        as_object(*eps, "$.epsilon");
        for (const auto& [state, targets] : eps->items()) {
            const std::size_t q = index_of(a.states, state, "automaton state in epsilon");
            for (const auto& target : string_list(targets, "$.epsilon." + state)) {
                const std::size_t to = index_of(a.states, target, "epsilon target");
                if (std::find(a.epsilon[q].begin(), a.epsilon[q].end(), to) == a.epsilon[q].end()) a.epsilon[q].push_back(to);
            }
        }
    }

    const json& components = as_object(field(doc, "components", "$"), "$.components");
    for (const auto& id : string_list(field(components, "ini", "$.components"), "$.components.ini"))
        a.initial_component.push_back(index_of(a.states, id, "automaton state in components.ini"));
    for (const auto& id : string_list(field(components, "acc", "$.components"), "$.components.acc"))
        a.accepting_component.push_back(index_of(a.states, id, "automaton state in components.acc"));
    return a;
}

ordered_json mdp_to_json(const Mdp& m) {
    ordered_json doc;
    doc["kind"] = m.kind == ModelKind::product ? "product" : "mdp";
    doc["states"] = m.states;
    doc["initial"] = m.states[m.initial];
    doc["atoms"] = m.atoms;
    ordered_json labels = ordered_json::object();
    for (std::size_t s = 0; s < m.size(); ++s) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < m.atoms.size(); ++i)
            if (m.labels[s][i]) names.push_back(m.atoms[i]);
        if (!names.empty()) labels[m.states[s]] = names;
    }
    doc["labels"] = labels;
    ordered_json actions = ordered_json::object();
    for (std::size_t s = 0; s < m.size(); ++s) actions[m.states[s]] = m.actions[s];
    doc["actions"] = actions;
    ordered_json transitions = ordered_json::array();
    for (std::size_t s = 0; s < m.size(); ++s)
        for (std::size_t a = 0; a < m.actions[s].size(); ++a)
            for (const auto& t : m.transitions[s][a])
                transitions.push_back({{"from", m.states[s]}, {"action", m.actions[s][a]}, {"to", m.states[t.target]}, {"prob", t.prob}});
    doc["transitions"] = transitions;
    std::vector<std::string> accepting;
    for (std::size_t s = 0; s < m.size(); ++s)
        if (m.accepting[s]) accepting.push_back(m.states[s]);
    doc["accepting"] = accepting;
    return doc;
}

} // namespace

std::optional<std::size_t> Mdp::find_state(std::string_view id) const {
    auto it = std::find(states.begin(), states.end(), id);
    if (it == states.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
}

std::optional<std::size_t> Mdp::find_action(std::size_t state, std::string_view action) const {
    const auto& list = actions[state];
    auto it = std::find(list.begin(), list.end(), action);
    if (it == list.end()) return std::nullopt;
    return static_cast<std::size_t>(it - list.begin());
}

std::optional<std::size_t> Ldba::find_state(std::string_view id) const {
    auto it = std::find(states.begin(), states.end(), id);
    if (it == states.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states.begin());
}

std::size_t Ldba::successor(std::size_t q, const Letter& letter) const {
    for (const auto& t : transitions)
        if (t.from == q && t.guard.eval(letter)) return t.to;
    throw InvalidLDBA("no guard enabled at " + states[q] + " on " + format_letter(letter, atoms));
}

bool Policy::is_total() const {
    return std::all_of(choice.begin(), choice.end(), [](const auto& c) { return c.has_value(); });
}

std::vector<std::string> validate_ldba(const Ldba& a) {
    std::vector<std::string> out;
    const std::size_t n = a.size();
    std::vector<int> membership(n, 0); // bit 1: ini, bit 2: acc
    for (auto q : a.initial_component) membership[q] |= 1;
    for (auto q : a.accepting_component) membership[q] |= 2;
    for (std::size_t q = 0; q < n; ++q) {
        if (membership[q] == 0) out.push_back("state " + a.states[q] + " is in neither component");
        if (membership[q] == 3) out.push_back("state " + a.states[q] + " is in both components");
    }
    const auto in_acc = [&](std::size_t q) { return (membership[q] & 2) != 0; };
    const auto in_ini = [&](std::size_t q) { return (membership[q] & 1) != 0; };

    for (const auto& t : a.transitions)
        if (in_acc(t.from) && in_ini(t.to) && !in_acc(t.to) && t.guard.satisfying_letter(a.atoms.size()))
            out.push_back("transition from accepting component to initial component at " + a.states[t.from] +
                          " (guard " + t.guard.text() + " -> " + a.states[t.to] + ")");
    for (std::size_t q = 0; q < n; ++q)
        if (a.accepting[q] && !in_acc(q)) out.push_back("accepting state " + a.states[q] + " is outside the accepting component");
    for (std::size_t q = 0; q < n; ++q)
        if (in_acc(q) && !a.epsilon[q].empty()) out.push_back("epsilon from accepting component at " + a.states[q]);

    constexpr std::size_t kMaxLetterReports = 8;
    const std::size_t k = a.atoms.size();
    for (std::size_t q = 0; q < n; ++q) {
        std::vector<const Guard*> guards;
        for (const auto& t : a.transitions)
            if (t.from == q) guards.push_back(&t.guard);
        if (k <= kExhaustiveLetterLimit) {
            std::size_t reported = 0;
            std::size_t suppressed = 0;
            const std::size_t letters = std::size_t{1} << k;
            for (std::size_t bits = 0; bits < letters; ++bits) {
                Letter letter(k);
                for (std::size_t i = 0; i < k; ++i) letter[i] = ((bits >> i) & 1U) != 0;
                std::size_t enabled = 0;
                for (const Guard* g : guards) enabled += g->eval(letter) ? 1 : 0;
                if (enabled == 1) continue;
                if (reported == kMaxLetterReports) {
                    ++suppressed;
                    continue;
                }
                ++reported;
                out.push_back(std::string(enabled == 0 ? "no guard enabled at " : "nondeterministic guards at ") +
                              a.states[q] + " on " + format_letter(letter, a.atoms));
            }
            if (suppressed > 0)
                out.push_back("... " + std::to_string(suppressed) + " more letters violate determinism or totality at " + a.states[q]);
        } else {
            for (std::size_t i = 0; i < guards.size(); ++i)
                for (std::size_t j = i + 1; j < guards.size(); ++j)
                    if (auto w = (*guards[i] && *guards[j]).satisfying_letter(k))
                        out.push_back("nondeterministic guards at " + a.states[q] + " on " + format_letter(*w, a.atoms));
            Guard cover = Guard::constant(false);
            for (const Guard* g : guards) cover = cover || *g;
            if (auto w = (!cover).satisfying_letter(k))
                out.push_back("no guard enabled at " + a.states[q] + " on " + format_letter(*w, a.atoms));
        }
    }
    return out;
}

Model parse_model(std::string_view text) {
    const json doc = parse_json(text);
    const std::string kind = kind_of(doc);
    if (kind == "ldba") return parse_ldba(text);
    if (kind == "mdp" || kind == "product") return mdp_from_json(doc);
    throw SchemaError("$.kind", "unknown model kind \"" + kind + "\"");
}

Mdp parse_mdp(std::string_view text) { return mdp_from_json(parse_json(text)); }

Ldba parse_ldba(std::string_view text, LdbaCheck check) {
    Ldba a = ldba_from_json(parse_json(text));
    if (check == LdbaCheck::strict) {
        const auto violations = validate_ldba(a);
        if (!violations.empty()) {
            std::string msg = violations.front();
            if (violations.size() > 1) msg += " (and " + std::to_string(violations.size() - 1) + " more)";
            throw InvariantViolation(msg);
        }
    }
    return a;
}

Policy parse_policy(std::string_view text, const Mdp& model) {
    const json doc = parse_json(text);
    if (kind_of(doc) != "policy") throw SchemaError("$.kind", "expected \"policy\"");
    const json& choice = as_object(field(doc, "choice", "$"), "$.choice");
    Policy p;
    p.choice.resize(model.size());
    for (const auto& [state, action] : choice.items()) {
        auto s = model.find_state(state);
        if (!s) throw SchemaError("$.choice." + state, "unknown state");
        const std::string name = as_string(action, "$.choice." + state);
        auto a = model.find_action(*s, name);
        if (!a) throw IllegalAction(state, name);
        p.choice[*s] = *a;
    }
    for (std::size_t s = 0; s < model.size(); ++s)
        if (!p.choice[s]) throw MissingState(model.states[s]);
    return p;
}

std::string serialize(const Mdp& m) { return mdp_to_json(m).dump(2); }

std::string serialize(const Ldba& a) {
    ordered_json doc;
    doc["kind"] = "ldba";
    doc["states"] = a.states;
    doc["initial"] = a.states[a.initial];
    doc["atoms"] = a.atoms;
    std::vector<std::string> accepting;
    for (std::size_t q = 0; q < a.size(); ++q)
        if (a.accepting[q]) accepting.push_back(a.states[q]);
    doc["accepting"] = accepting;
    ordered_json transitions = ordered_json::array();
    for (const auto& t : a.transitions)
        transitions.push_back({{"from", a.states[t.from]}, {"guard", t.guard.text()}, {"to", a.states[t.to]}});
    doc["transitions"] = transitions;
    ordered_json eps = ordered_json::object();
    for (std::size_t q = 0; q < a.size(); ++q) {
        if (a.epsilon[q].empty()) continue;
        std::vector<std::string> targets;
        for (auto t : a.epsilon[q]) targets.push_back(a.states[t]);
        eps[a.states[q]] = targets;
    }
    doc["epsilon"] = eps;
    std::vector<std::string> ini, acc;
    for (auto q : a.initial_component) ini.push_back(a.states[q]);
    for (auto q : a.accepting_component) acc.push_back(a.states[q]);
    doc["components"] = {{"ini", ini}, {"acc", acc}};
    return doc.dump(2);
}

std::string serialize(const Policy& p, const Mdp& model) {
    ordered_json doc;
    doc["kind"] = "policy";
    ordered_json choice = ordered_json::object();
    for (std::size_t s = 0; s < model.size(); ++s)
        if (p.choice[s]) choice[model.states[s]] = model.actions[s][*p.choice[s]];
    doc["choice"] = choice;
    return doc.dump(2);
}

std::string load_document(const std::string& location) {
    constexpr std::string_view prefix = "builtin:";
    if (location.starts_with(prefix)) return std::string(builtin_document(location.substr(prefix.size())));
    std::ifstream in(location, std::ios::binary);
    if (!in) throw InputError("cannot open '" + location + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace buchi
