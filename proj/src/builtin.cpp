#include "buchi/builtin.hpp"

#include "buchi/errors.hpp"

#include <array>
#include <utility>

namespace buchi {

namespace {

constexpr std::string_view kEx1 = R"({
  "kind": "mdp",
  "states": ["s1", "s2", "s3"],
  "initial": "s1",
  "atoms": ["b"],
  "labels": {"s2": ["b"]},
  "actions": {"s1": ["alpha", "beta"], "s2": ["tau"], "s3": ["tau"]},
  "transitions": [
    {"from": "s1", "action": "alpha", "to": "s2", "prob": 1.0},
    {"from": "s1", "action": "beta", "to": "s3", "prob": 1.0},
    {"from": "s2", "action": "tau", "to": "s2", "prob": 1.0},
    {"from": "s3", "action": "tau", "to": "s3", "prob": 1.0}
  ],
  "accepting": ["s2"]
})";

constexpr std::string_view kEx1Alpha = R"({"kind": "policy", "choice": {"s1": "alpha", "s2": "tau", "s3": "tau"}})";
constexpr std::string_view kEx1Beta = R"({"kind": "policy", "choice": {"s1": "beta", "s2": "tau", "s3": "tau"}})";

constexpr std::string_view kGfLdba = R"({
  "kind": "ldba",
  "states": ["q0", "q1"],
  "initial": "q0",
  "atoms": ["b"],
  "accepting": ["q1"],
  "transitions": [
    {"from": "q0", "guard": "b", "to": "q1"},
    {"from": "q0", "guard": "!b", "to": "q0"},
    {"from": "q1", "guard": "b", "to": "q1"},
    {"from": "q1", "guard": "!b", "to": "q0"}
  ],
  "epsilon": {},
  "components": {"ini": [], "acc": ["q0", "q1"]}
})";

constexpr std::string_view kFgLdba = R"({
  "kind": "ldba",
  "states": ["q0", "q1", "q2"],
  "initial": "q0",
  "atoms": ["b"],
  "accepting": ["q1"],
  "transitions": [
    {"from": "q0", "guard": "t", "to": "q0"},
    {"from": "q1", "guard": "b", "to": "q1"},
    {"from": "q1", "guard": "!b", "to": "q2"},
    {"from": "q2", "guard": "t", "to": "q2"}
  ],
  "epsilon": {"q0": ["q1"]},
  "components": {"ini": ["q0"], "acc": ["q1", "q2"]}
})";

constexpr std::string_view kSplit = R"({
  "kind": "mdp",
  "states": ["s0", "a", "r"],
  "initial": "s0",
  "atoms": ["b"],
  "labels": {"a": ["b"]},
  "actions": {"s0": ["go"], "a": ["go"], "r": ["go"]},
  "transitions": [
    {"from": "s0", "action": "go", "to": "a", "prob": 0.5},
    {"from": "s0", "action": "go", "to": "r", "prob": 0.5},
    {"from": "a", "action": "go", "to": "a", "prob": 1.0},
    {"from": "r", "action": "go", "to": "r", "prob": 1.0}
  ],
  "accepting": ["a"]
})";

constexpr std::string_view kLoop2 = R"({
  "kind": "mdp",
  "states": ["b1", "r1"],
  "initial": "b1",
  "atoms": ["b"],
  "labels": {"b1": ["b"]},
  "actions": {"b1": ["go"], "r1": ["go"]},
  "transitions": [
    {"from": "b1", "action": "go", "to": "r1", "prob": 1.0},
    {"from": "r1", "action": "go", "to": "b1", "prob": 0.5},
    {"from": "r1", "action": "go", "to": "r1", "prob": 0.5}
  ],
  "accepting": ["b1"]
})";

constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kBuiltins{{
    {"ex1", kEx1},
    {"ex1-alpha", kEx1Alpha},
    {"ex1-beta", kEx1Beta},
    {"gf_ldba", kGfLdba},
    {"fg_ldba", kFgLdba},
    {"split", kSplit},
    {"loop2", kLoop2},
    {"split-go", R"({"kind": "policy", "choice": {"s0": "go", "a": "go", "r": "go"}})"},
}};

} // namespace

std::string_view builtin_document(std::string_view name) {
    for (const auto& [key, doc] : kBuiltins)
        if (key == name) return doc;
    throw InputError("unknown builtin '" + std::string(name) + "'");
}

std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto& [key, doc] : kBuiltins) out.emplace_back(key);
    return out;
}

} // namespace buchi
