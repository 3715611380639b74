#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "interweave/config.hpp"

namespace interweave {

struct Check {
    std::string name;
    std::string anchor;    // identity or experiment the check belongs to
    std::string relation;  // "<=" or ">="
    double value = 0;
    double threshold = 0;
    double margin = 0;     // positive when passing
    bool pass = false;
};

Check check_at_most(std::string name, std::string anchor, double value, double threshold);
Check check_at_least(std::string name, std::string anchor, double value, double threshold);
Check check_true(std::string name, std::string anchor, bool ok);

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, double> constants;
    std::vector<Check> checks;
    std::vector<Table> tables;
    double runtime_seconds = 0;

    bool passed() const;
    std::vector<std::string> failures() const;
};

Report run(const ExperimentConfig& config);

// Keys are sorted and doubles printed in shortest round-trip form, so equal
// reports serialize to identical bytes. Runtime is included only when timing is set.
std::string report_json(const Report& report, bool timing);
std::string checks_csv(const Report& report, bool timing);
std::string table_csv(const Table& table);

// Writes report.json or report.csv plus one CSV per table into config.output.
// Returns the exit status: 0 when every check passed, 1 otherwise.
int write_report(const Report& report, const ExperimentConfig& config);

}  // namespace interweave
