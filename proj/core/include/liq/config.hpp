#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "liq/bounds.hpp"
#include "liq/grid.hpp"
#include "liq/model.hpp"
#include "liq/pde.hpp"

namespace liq {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Key/value configuration with nested [section.subsection] headers, '#' or
// ';' comments, and comma-separated numeric lists. Keys are flattened to
// "section.sub.key". Parse and lookup errors carry line references.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long integer(const std::string& key) const;
    long integer_or(const std::string& key, long fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<std::string> words(const std::string& key) const;

    // FNV-1a of the raw file bytes; recorded in run manifests
    std::uint64_t content_hash() const { return hash_; }
    const std::string& origin() const { return origin_; }

    // override a scalar (command-line flags taking precedence over the file)
    void override_value(const std::string& key, const std::string& value);

private:
    struct Entry {
        std::string value;
        int line = 0;
    };
    std::map<std::string, Entry> entries_;
    std::string origin_;
    std::uint64_t hash_ = 0;

    const Entry& lookup(const std::string& key) const;
};

struct SimSpec {
    long n_paths = 10000;
    std::uint64_t seed = 20177;
    int steps = 512;
    std::string strategy = "feedback";
    int dump_paths = 0;
};

struct ExperimentConfig {
    ProblemInputs inputs;
    GridSpec grid;
    SolveOptions solve;
    SimSpec sim;
    std::vector<Probe> probes;
    std::vector<std::string> experiments;            // optional run list from the file
    std::map<std::string, std::string> output_names;  // experiment -> primary CSV name
};

ExperimentConfig load_experiment_config(const ConfigFile& cfg);

}  // namespace liq
