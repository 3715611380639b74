#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace interweave {

enum class Command { Verify, Entropy, Hyperbound, Hardy, Warmup, Sample, Cutoff };

std::string command_name(Command c);
std::optional<Command> parse_command(std::string_view name);
std::vector<std::string> command_names();

enum class ParamKind { Real, Integer, Text, RealList, IntegerList };

struct ParamSpec {
    std::string key;
    ParamKind kind;
    std::string default_value;
    std::string help;
    std::vector<std::string> choices;  // allowed values for Text parameters, if any
    std::optional<double> lower;       // numeric bound applied to every value
    bool lower_strict = false;
};

// Parameters accepted by a command besides the common keys
// (command, seed, output, format, timing).
const std::vector<ParamSpec>& command_parameters(Command c);

struct ConfigError {
    int line = 0;    // 1-based; 0 when the error is not tied to a line
    int column = 0;  // 1-based
    std::string key;
    std::string message;
};

std::string to_string(const ConfigError& e);

struct ExperimentConfig {
    Command command = Command::Verify;
    std::uint64_t seed = 0;
    std::string output = ".";
    std::string format = "json";
    bool timing = false;
    std::map<std::string, std::string> params;  // every command parameter, defaults filled in

    double real(const std::string& key) const;
    long integer(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::vector<double> reals(const std::string& key) const;
    std::vector<long> integers(const std::string& key) const;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigError> errors;  // all problems found, in line order

    bool ok() const { return config.has_value(); }
};

// Lines of `key = value`; `#` starts a comment. A repeated key takes its last value.
ParseResult parse_config(std::string_view text);

}  // namespace interweave
