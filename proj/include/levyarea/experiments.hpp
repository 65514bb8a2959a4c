#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "levyarea/errors.hpp"

namespace levyarea {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 12345;

/// Covariance convention recorded in every result document.
inline constexpr const char* kBEtaConvention =
    "B(eta)_t = 2 Re Gamma(t + i eta/2); Cov[B'(eta)_x, B'(eta)_y] = kprime_real(eta; x, y)";

using Json = nlohmann::ordered_json;

struct RunResult {
    int exit_code = 0; // 0 pass, 2 failed assertion (errors are thrown)
    Json document;
    std::map<std::string, std::string> csv_files; // path -> contents
};

/// Parses, validates (strict: unknown keys rejected) and runs one experiment
/// configuration. The worker budget comes from the caller, never from the
/// config, so result bodies are byte-identical across budgets.
/// Throws ConfigError for invalid configurations; downstream errors
/// propagate with their own types.
RunResult run_experiment(const Json& config, int workers);

/// Per-experiment config key whitelists (exposed for the CLI help text).
const std::map<std::string, std::vector<std::string>>& experiment_schemas();

/// Deny-list check: alpha must not be within 1e-9 of a small-denominator
/// rational q*alpha = integer (q <= 48), which would put the connection
/// formulas at a degenerate parameter combination.
void validate_alpha_regular(double alpha);

} // namespace levyarea
