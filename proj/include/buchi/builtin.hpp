#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace buchi {

/// Embedded model and policy documents, addressable as "builtin:<name>":
///
///   ex1        three-state MDP: alpha leads s1 to the accepting self-loop s2,
///              beta to the non-accepting self-loop s3
///   ex1-alpha  policy choosing alpha at s1
///   ex1-beta   policy choosing beta at s1
///   gf_ldba    deterministic Büchi automaton for "infinitely often b"
///   fg_ldba    limit-deterministic automaton for "eventually always b" (uses epsilon)
///   split      s0 branches 1/2 : 1/2 into an accepting and a rejecting self-loop
///   loop2      b1 -> r1, r1 -> {b1, r1} with probability 1/2 each; B = {b1}
std::string_view builtin_document(std::string_view name);

std::vector<std::string> builtin_names();

} // namespace buchi
