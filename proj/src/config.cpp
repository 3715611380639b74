#include "interweave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

namespace interweave {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    int key_col = 0;
    int value_col = 0;
};

const std::vector<std::pair<Command, std::string>>& command_table() {
    static const std::vector<std::pair<Command, std::string>> t = {
        {Command::Verify, "verify"},   {Command::Entropy, "entropy"}, {Command::Hyperbound, "hyperbound"},
        {Command::Hardy, "hardy"},     {Command::Warmup, "warmup"},   {Command::Sample, "sample"},
        {Command::Cutoff, "cutoff"},
    };
    return t;
}

ParamSpec real(std::string key, std::string def, std::string help, std::optional<double> lower = std::nullopt,
               bool strict = false) {
    return {std::move(key), ParamKind::Real, std::move(def), std::move(help), {}, lower, strict};
}
ParamSpec positive(std::string key, std::string def, std::string help) {
    return real(std::move(key), std::move(def), std::move(help), 0.0, true);
}
ParamSpec integer(std::string key, std::string def, std::string help, double lower) {
    return {std::move(key), ParamKind::Integer, std::move(def), std::move(help), {}, lower, false};
}
ParamSpec reals(std::string key, std::string def, std::string help, double lower, bool strict) {
    return {std::move(key), ParamKind::RealList, std::move(def), std::move(help), {}, lower, strict};
}
ParamSpec integers(std::string key, std::string def, std::string help, double lower) {
    return {std::move(key), ParamKind::IntegerList, std::move(def), std::move(help), {}, lower, false};
}
ParamSpec choice(std::string key, std::string def, std::string help, std::vector<std::string> choices) {
    return {std::move(key), ParamKind::Text, std::move(def), std::move(help), std::move(choices), std::nullopt, false};
}

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, ',')) out.push_back(trim(item));
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    if (ec == std::errc() && p == end) return true;
    // Accept integral values written in scientific notation, e.g. 1e6.
    double d;
    if (parse_double(s, d) && d == std::floor(d) && std::abs(d) < 9e18) {
        out = static_cast<long>(d);
        return true;
    }
    return false;
}

bool valid_key(const std::string& k) {
    if (k.empty() || !(std::isalpha(static_cast<unsigned char>(k[0])) || k[0] == '_')) return false;
    return std::all_of(k.begin(), k.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Type and bound checks for one parameter value; returns the error message or "".
std::string check_value(const ParamSpec& spec, const std::string& value) {
    auto bound_ok = [&](double v) {
        if (!spec.lower) return true;
        return spec.lower_strict ? v > *spec.lower : v >= *spec.lower;
    };
    std::ostringstream bound_msg;
    if (spec.lower) bound_msg << "must be " << (spec.lower_strict ? "> " : ">= ") << *spec.lower;
    switch (spec.kind) {
        case ParamKind::Real: {
            double v;
            if (!parse_double(value, v)) return "expected a real number, got '" + value + "'";
            if (!bound_ok(v)) return bound_msg.str() + ", got " + value;
            return "";
        }
        case ParamKind::Integer: {
            long v;
            if (!parse_long(value, v)) return "expected an integer, got '" + value + "'";
            if (!bound_ok(static_cast<double>(v))) return bound_msg.str() + ", got " + value;
            return "";
        }
        case ParamKind::Text:
            if (!spec.choices.empty() && std::find(spec.choices.begin(), spec.choices.end(), value) == spec.choices.end()) {
                std::string all;
                for (const auto& c : spec.choices) all += (all.empty() ? "" : "|") + c;
                return "expected one of " + all + ", got '" + value + "'";
            }
            return "";
        case ParamKind::RealList:
        case ParamKind::IntegerList: {
            auto items = split_list(value);
            if (items.empty()) return "expected a comma-separated list";
            for (const auto& it : items) {
                double v;
                long iv;
                if (spec.kind == ParamKind::RealList ? !parse_double(it, v) : !parse_long(it, iv))
                    return std::string("expected a list of ") +
                           (spec.kind == ParamKind::RealList ? "real numbers" : "integers") + ", got '" + it + "'";
                double x = spec.kind == ParamKind::RealList ? v : static_cast<double>(iv);
                if (!bound_ok(x)) return "every entry " + bound_msg.str() + ", got " + it;
            }
            return "";
        }
    }
    return "";
}

const std::set<std::string>& common_keys() {
    static const std::set<std::string> k = {"command", "seed", "output", "format", "timing"};
    return k;
}

}  // namespace

std::string command_name(Command c) {
    for (const auto& [cmd, name] : command_table())
        if (cmd == c) return name;
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [cmd, n] : command_table())
        if (n == name) return cmd;
    return std::nullopt;
}

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& entry : command_table()) out.push_back(entry.second);
    return out;
}

const std::vector<ParamSpec>& command_parameters(Command c) {
    static const std::map<Command, std::vector<ParamSpec>> table = {
        {Command::Verify,
         {
             choice("suite", "all", "check family to run", {"all", "two_point", "laguerre", "ou"}),
             integer("N", "20", "polynomial degree of the truncated algebras", 1),
             positive("tol", "1e-9", "residual threshold for polynomial identities"),
             integer("trials", "100", "random two-point triples", 1),
         }},
        {Command::Entropy,
         {
             positive("beta", "1", "shape of the birth-death chain"),
             positive("sigma", "1", "rate parameter of the birth-death chain"),
             integer("N", "200", "truncation level", 10),
             integers("starts", "0,50", "initial states of the point-mass starts", 0),
             positive("t_max", "10", "end of the time grid"),
             integer("points", "50", "number of grid points", 2),
             positive("prefactor", "2", "prefactor of the transferred entropy bound"),
             real("rate", "1", "exponential rate of the transferred bound", 0.0),
             real("warmup", "0", "delay of the transferred bound", 0.0),
         }},
        {Command::Hyperbound,
         {
             positive("beta", "1", "shape of the birth-death chain"),
             positive("sigma", "1", "rate parameter of the birth-death chain"),
             integer("N", "200", "truncation level", 10),
             reals("times", "0.5,1", "times t; the norm is taken at t + ln(1 + 1/sigma) into L^(1+e^t)", 0.0, false),
             integer("restarts", "20", "random restarts of the ascent", 0),
             positive("tol", "1e-6", "allowed excess over 1"),
         }},
        {Command::Hardy,
         {
             reals("beta", "0.5,1,2", "shapes, paired with sigma", 0.0, true),
             reals("sigma", "1,1,0.5", "rate parameters, paired with beta", 0.0, true),
             integer("Ncap", "2000", "lattice truncation", 10),
         }},
        {Command::Warmup,
         {
             choice("law", "neg_log_beta", "warm-up law", {"neg_log_beta", "jacobi"}),
             positive("eps", "0.5", "first beta shape of the log-beta law"),
             positive("beta", "1.5", "second shape (log-beta) or Jacobi parameter"),
             positive("lambda1", "4", "Jacobi spectral gap"),
             integer("samples", "1000000", "Monte Carlo draws", 2),
             reals("points", "0.5,1,2", "Laplace arguments for the Monte Carlo check", 0.0, false),
             integer("order", "6", "complete-monotonicity order", 1),
             positive("u_max", "10", "end of the monotonicity grid"),
             integer("grid_points", "101", "points of the monotonicity grid", 3),
         }},
        {Command::Sample,
         {
             positive("beta", "1", "shape of the diffusion"),
             positive("scale", "1", "scale of the diffusion"),
             positive("sigma", "2", "intensity of the Poisson kernel"),
             real("t", "0.5", "time after the warm-up", 0.0),
             real("x", "3", "starting point", 0.0),
             integer("draws", "100000", "draws for the moment comparison", 10),
             integer("ks_draws", "10000", "draws per sample in each two-sample test", 10),
             integer("seeds", "3", "independent two-sample tests", 1),
         }},
        {Command::Cutoff,
         {
             choice("family", "kinetic", "tensorized family", {"kinetic", "scalar", "transfer"}),
             integers("sizes", "1,4,16,64,256", "tensor sizes n", 1),
             real("c", "3", "start scale"),
             integer("samples", "200000", "Monte Carlo draws per cell", 2),
             reals("r_grid", "0.25,0.5,0.75,1,1.5,2,3", "multiples of the critical time", 0.0, true),
             positive("time_scale", "1", "factor applied to the critical time"),
             positive("b", "1", "rate of the scalar family"),
             positive("memory_cap_mb", "1024", "cap on dense covariance size"),
         }},
    };
    return table.at(c);
}

std::string to_string(const ConfigError& e) {
    std::ostringstream os;
    if (e.line > 0) os << "line " << e.line << ", column " << e.column << ": ";
    if (!e.key.empty()) os << e.key << ": ";
    os << e.message;
    return os.str();
}

double ExperimentConfig::real(const std::string& key) const {
    double v = 0;
    parse_double(params.at(key), v);
    return v;
}

long ExperimentConfig::integer(const std::string& key) const {
    long v = 0;
    parse_long(params.at(key), v);
    return v;
}

const std::string& ExperimentConfig::text(const std::string& key) const { return params.at(key); }

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& it : split_list(params.at(key))) {
        double v = 0;
        parse_double(it, v);
        out.push_back(v);
    }
    return out;
}

std::vector<long> ExperimentConfig::integers(const std::string& key) const {
    std::vector<long> out;
    for (const auto& it : split_list(params.at(key))) {
        long v = 0;
        parse_long(it, v);
        out.push_back(v);
    }
    return out;
}

ParseResult parse_config(std::string_view text) {
    ParseResult result;
    auto& errors = result.errors;
    std::map<std::string, Entry> entries;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string_view body = raw.substr(0, raw.find('#'));
        if (trim(body).empty()) continue;
        std::size_t first = body.find_first_not_of(" \t\r");
        std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back({line_no, static_cast<int>(first) + 1, "", "syntax error: expected 'key = value'"});
            continue;
        }
        std::string key = trim(body.substr(0, eq));
        std::string value = trim(body.substr(eq + 1));
        std::size_t vstart = body.find_first_not_of(" \t\r", eq + 1);
        int value_col = static_cast<int>(vstart == std::string_view::npos ? eq + 1 : vstart) + 1;
        if (!valid_key(key)) {
            errors.push_back({line_no, static_cast<int>(first) + 1, key, "syntax error: invalid key"});
            continue;
        }
        if (value.empty()) {
            errors.push_back({line_no, value_col, key, "syntax error: missing value"});
            continue;
        }
        entries[key] = {value, line_no, static_cast<int>(first) + 1, value_col};
    }

    ExperimentConfig cfg;
    std::optional<Command> command;
    if (auto it = entries.find("command"); it == entries.end()) {
        errors.push_back({0, 0, "command", "missing command"});
    } else if (!(command = parse_command(it->second.value))) {
        std::string all;
        for (const auto& n : command_names()) all += (all.empty() ? "" : "|") + n;
        errors.push_back({it->second.line, it->second.value_col, "command",
                          "unknown command '" + it->second.value + "', expected one of " + all});
    }
    if (auto it = entries.find("seed"); it != entries.end()) {
        const std::string& v = it->second.value;
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), cfg.seed);
        if (ec != std::errc() || p != v.data() + v.size())
            errors.push_back({it->second.line, it->second.value_col, "seed", "expected an unsigned 64-bit integer, got '" + v + "'"});
    }
    if (auto it = entries.find("output"); it != entries.end()) cfg.output = it->second.value;
    if (auto it = entries.find("format"); it != entries.end()) {
        if (it->second.value != "csv" && it->second.value != "json")
            errors.push_back({it->second.line, it->second.value_col, "format", "expected csv or json, got '" + it->second.value + "'"});
        else
            cfg.format = it->second.value;
    }
    if (auto it = entries.find("timing"); it != entries.end()) {
        if (it->second.value != "true" && it->second.value != "false")
            errors.push_back({it->second.line, it->second.value_col, "timing", "expected true or false"});
        else
            cfg.timing = it->second.value == "true";
    }

    if (command) {
        cfg.command = *command;
        const auto& specs = command_parameters(*command);
        for (const auto& s : specs) cfg.params[s.key] = s.default_value;
        std::map<std::string, int> line_of;
        for (const auto& [key, e] : entries) {
            if (common_keys().count(key)) continue;
            auto spec = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == key; });
            if (spec == specs.end()) {
                errors.push_back({e.line, e.key_col, key, "unknown key for command " + command_name(*command)});
                continue;
            }
            std::string msg = check_value(*spec, e.value);
            if (!msg.empty()) {
                errors.push_back({e.line, e.value_col, key, "domain violation: " + msg});
                continue;
            }
            cfg.params[key] = e.value;
            line_of[key] = e.line;
        }

        // Constraints that tie several parameters together.
        auto cross = [&](const std::string& key, const std::string& msg) {
            auto it = entries.find(key);
            errors.push_back({it == entries.end() ? 0 : it->second.line, it == entries.end() ? 0 : it->second.value_col,
                              key, "domain violation: " + msg});
        };
        bool typed_ok = std::none_of(errors.begin(), errors.end(), [&](const ConfigError& e) {
            return std::any_of(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.key == e.key; });
        });
        if (typed_ok) {
            switch (*command) {
                case Command::Entropy:
                    for (long s : cfg.integers("starts"))
                        if (s > cfg.integer("N")) {
                            cross("starts", "start states must not exceed N");
                            break;
                        }
                    break;
                case Command::Hardy:
                    if (cfg.reals("beta").size() != cfg.reals("sigma").size())
                        cross("sigma", "beta and sigma lists must have the same length");
                    break;
                case Command::Warmup:
                    if (cfg.text("law") == "jacobi" && !(cfg.real("beta") > 1 && cfg.real("lambda1") >= 2 * cfg.real("beta")))
                        cross("lambda1", "the Jacobi law needs lambda1 >= 2 beta and beta > 1");
                    if (cfg.integer("grid_points") < cfg.integer("order") + 2)
                        cross("grid_points", "need at least order + 2 grid points");
                    break;
                case Command::Cutoff: {
                    if (cfg.real("c") == 0) cross("c", "start scale must be nonzero");
                    auto r = cfg.reals("r_grid");
                    auto has = [&](double v) { return std::find(r.begin(), r.end(), v) != r.end(); };
                    if (!has(0.5) || !has(2.0)) cross("r_grid", "r_grid must contain 0.5 and 2");
                    std::set<long> distinct;
                    for (long n : cfg.integers("sizes")) distinct.insert(n);
                    if (distinct.size() < 4) cross("sizes", "need at least four distinct sizes");
                    break;
                }
                default:
                    break;
            }
        }
    }

    std::stable_sort(errors.begin(), errors.end(), [](const ConfigError& a, const ConfigError& b) {
        return std::tie(a.line, a.column) < std::tie(b.line, b.column);
    });
    if (errors.empty()) result.config = std::move(cfg);
    return result;
}

}  // namespace interweave
