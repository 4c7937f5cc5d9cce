#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace buchi::cli {

inline constexpr std::string_view kToolName = "buchi";
inline constexpr std::string_view kVersion = "0.1.0";

/// Default seed when --seed is absent; --seed always wins.
inline constexpr const char* kSeedVariable = "BUCHI_SEED";

/// Runs one command. `args` excludes the program name. Returns 0 on success,
/// 2 on input errors, 3 on precondition errors and another nonzero code on
/// usage errors. JSON reports go to the --out destination (stdout by
/// default); human-readable summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace buchi::cli
