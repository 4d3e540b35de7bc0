#pragma once

#include <string>
#include <vector>

#include "liq/config.hpp"

namespace liq {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentOutcome {
    std::string name;
    bool passed = true;        // verification verdict; informational runs always pass
    std::string detail;        // one-line summary for the console
    std::vector<std::string> files_written;
};

// Runs one named experiment (solve, simulate, verify-bounds, certificate,
// asymptotics, compare-strategies) and writes its CSV artifacts plus a
// manifest into out_dir. Throws on configuration or solver errors; a failed
// verification is an outcome, not an exception.
ExperimentOutcome run_experiment(const std::string& name, const ExperimentConfig& config,
                                 std::uint64_t config_hash, const std::string& out_dir);

std::vector<std::string> known_experiments();

}  // namespace liq
