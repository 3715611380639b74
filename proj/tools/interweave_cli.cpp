#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "interweave/config.hpp"
#include "interweave/errors.hpp"
#include "interweave/runner.hpp"

namespace iw = interweave;

namespace {

struct Overrides {
    std::string config_path;
    std::string seed, out, format;
    bool timing = false;
    std::map<std::string, std::string> params;
};

int config_error(const std::string& msg) {
    std::cerr << "configuration error: " << msg << '\n';
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interweaving relations: verification and experiment runner"};
    app.require_subcommand(1);

    std::map<std::string, Overrides> overrides;
    for (const auto& name : iw::command_names()) {
        auto command = *iw::parse_command(name);
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        Overrides& o = overrides[name];
        sub->add_option("--config", o.config_path, "key = value configuration file");
        sub->add_option("--seed", o.seed, "64-bit seed");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--timing", o.timing, "include wall-clock runtime in the report");
        for (const auto& p : iw::command_parameters(command)) {
            o.params[p.key];
            sub->add_option("--" + p.key, o.params[p.key], p.help + " (default " + p.default_value + ")");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    const Overrides& o = overrides[name];

    std::ostringstream text;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path, std::ios::binary);
        if (!in) return config_error("cannot read " + o.config_path);
        text << in.rdbuf() << '\n';
    }
    text << "command = " << name << '\n';
    if (!o.seed.empty()) text << "seed = " << o.seed << '\n';
    if (!o.out.empty()) text << "output = " << o.out << '\n';
    if (!o.format.empty()) text << "format = " << o.format << '\n';
    if (o.timing) text << "timing = true\n";
    for (const auto& [k, v] : o.params)
        if (!v.empty()) text << k << " = " << v << '\n';

    iw::ParseResult parsed = iw::parse_config(text.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) std::cerr << "configuration error: " << iw::to_string(e) << '\n';
        return 2;
    }

    try {
        iw::Report report = iw::run(*parsed.config);
        int status = iw::write_report(report, *parsed.config);
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << c.value << ' ' << c.relation << ' '
                      << c.threshold << '\n';
        if (status != 0) {
            std::cerr << "failed checks:";
            for (const auto& f : report.failures()) std::cerr << ' ' << f;
            std::cerr << '\n';
        }
        return status;
    } catch (const iw::DomainError& e) {
        return config_error(e.what());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
