#include "misoagp/config.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "misoagp/errors.hpp"

namespace misoagp {

using json = nlohmann::json;

namespace {

/// Reads fields out of a JSON object, collecting violations instead of
/// throwing so that one pass reports everything.
class Reader {
public:
    Reader(const json& obj, std::string where, std::vector<std::string>& errors)
        : obj_(obj), where_(std::move(where)), errors_(errors) {
        if (!obj_.is_object()) fail("must be an object");
    }

    ~Reader() {
        if (!obj_.is_object()) return;
        for (const auto& [key, value] : obj_.items())
            if (!used_.count(key)) errors_.push_back(where_ + ": unknown key '" + key + "'");
    }

    bool has(const std::string& key) {
        used_.insert(key);
        return obj_.is_object() && obj_.contains(key) && !obj_[key].is_null();
    }

    const json& raw(const std::string& key) { return obj_[key]; }

    template <typename T>
    void get(const std::string& key, T& out) {
        if (!has(key)) return;
        const auto& v = obj_[key];
        try {
            if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
                if (!v.is_number_integer() || v.get<long long>() < 0) {
                    fail("'" + key + "' must be a non-negative integer");
                    return;
                }
            } else if constexpr (std::is_same_v<T, double>) {
                if (!v.is_number()) {
                    fail("'" + key + "' must be a number");
                    return;
                }
            } else if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) {
                    fail("'" + key + "' must be a boolean");
                    return;
                }
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (!v.is_string()) {
                    fail("'" + key + "' must be a string");
                    return;
                }
            }
            out = v.get<T>();
        } catch (const json::exception& e) {
            fail("'" + key + "': " + e.what());
        }
    }

    void fail(const std::string& msg) { errors_.push_back(where_ + ": " + msg); }
    const std::string& where() const { return where_; }

private:
    const json& obj_;
    std::string where_;
    std::vector<std::string>& errors_;
    std::set<std::string> used_;
};

bool command_exists(const std::string& cmd) {
    if (cmd.find('/') != std::string::npos) return access(cmd.c_str(), X_OK) == 0;
    const char* path = std::getenv("PATH");
    if (!path) return false;
    std::istringstream dirs(path);
    std::string dir;
    while (std::getline(dirs, dir, ':'))
        if (!dir.empty() && access((dir + "/" + cmd).c_str(), X_OK) == 0) return true;
    return false;
}

void read_space(const json& arr, ExperimentConfig& cfg, std::vector<std::string>& errors) {
    if (!arr.is_array() || arr.empty()) {
        errors.push_back("space: must be a non-empty array of dimensions");
        return;
    }
    std::vector<Dimension> dims;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        Reader r(arr[i], "space[" + std::to_string(i) + "]", errors);
        Dimension d;
        d.name = "x" + std::to_string(i + 1);
        r.get("name", d.name);
        if (!r.has("lower") || !r.has("upper")) r.fail("'lower' and 'upper' are required");
        r.get("lower", d.lower);
        r.get("upper", d.upper);
        r.get("log10", d.log10_scaled);
        dims.push_back(d);
    }
    try {
        cfg.space = SearchSpace(std::move(dims));
    } catch (const Error& e) {
        errors.push_back(std::string("space: ") + e.what());
    }
}

void read_sources(const json& obj, ExperimentConfig& cfg, std::vector<std::string>& errors) {
    Reader r(obj, "sources", errors);
    if (r.has("benchmark")) {
        BenchmarkSpec b;
        r.get("benchmark", b.name);
        if (r.has("params")) {
            const auto& p = r.raw("params");
            if (!p.is_object())
                r.fail("'params' must be an object of numbers");
            else
                for (const auto& [k, v] : p.items()) {
                    if (v.is_number())
                        b.params[k] = v.get<double>();
                    else
                        r.fail("params." + k + " must be a number");
                }
        }
        cfg.benchmark = b;
    }
    if (r.has("command")) {
        ExternalSpec e;
        const auto& c = r.raw("command");
        if (!c.is_array() || c.empty())
            r.fail("'command' must be a non-empty array of strings");
        else
            for (const auto& part : c) {
                if (part.is_string())
                    e.command.push_back(part.get<std::string>());
                else
                    r.fail("'command' entries must be strings");
            }
        if (r.has("costs")) {
            const auto& costs = r.raw("costs");
            if (!costs.is_array())
                r.fail("'costs' must be an array of numbers");
            else
                for (const auto& v : costs) {
                    if (v.is_number())
                        e.costs.push_back(v.get<double>());
                    else
                        r.fail("'costs' entries must be numbers");
                }
        } else {
            r.fail("'costs' is required for external sources");
        }
        r.get("timeout_seconds", e.timeout_seconds);
        cfg.external = e;
    } else {
        if (r.has("costs") || r.has("timeout_seconds"))
            r.fail("'costs' and 'timeout_seconds' only apply to external 'command' sources");
    }
    if (cfg.benchmark && cfg.external) r.fail("give either 'benchmark' or 'command', not both");
    if (!cfg.benchmark && !cfg.external) r.fail("one of 'benchmark' or 'command' is required");
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::miso_agp: return "miso_agp";
        case Method::vanilla_bo: return "vanilla_bo";
        case Method::both: return "both";
    }
    return "?";
}

LoopConfig ExperimentConfig::loop_config(const SearchSpace& resolved_space, std::uint64_t seed) const {
    LoopConfig lc;
    lc.space = resolved_space;
    lc.n_init = n_init;
    lc.n_init_per_source = n_init_per_source;
    lc.lhs = lhs;
    lc.max_iterations = max_iterations;
    lc.max_cost = max_cost;
    lc.mle.family = kernel;
    lc.mle.noise = noise;
    lc.mle.restarts = mle_restarts;
    lc.acquisition.m = m;
    lc.acquisition.delta = delta;
    lc.acquisition.shift_numerator = shift_numerator;
    lc.acquisition.inner = inner;
    lc.beta = beta;
    lc.seed = seed;
    return lc;
}

std::vector<std::string> validate_config(const ExperimentConfig& c) {
    std::vector<std::string> v;
    if (c.max_iterations < 1 && !(c.max_cost > 0.0)) v.push_back("need max_iterations >= 1 or max_cost > 0");
    if (!(c.max_cost >= 0.0)) v.push_back("max_cost must be >= 0");
    if (c.n_init < 1 && c.n_init_per_source.empty()) v.push_back("n_init must be >= 1");
    if (!c.n_init_per_source.empty() && c.n_init_per_source.front() < 1)
        v.push_back("n_init_per_source[0] must be >= 1");
    if (!(c.m >= 0.0) || !std::isfinite(c.m)) v.push_back("m must be a finite number >= 0");
    if (!(c.delta > 0.0)) v.push_back("delta must be > 0");
    if (c.mle_restarts < 1) v.push_back("mle_restarts must be >= 1");
    if (c.n_runs < 1) v.push_back("n_runs must be >= 1");
    if (c.noise.mode == NoiseMode::fixed && !(c.noise.value >= 0.0)) v.push_back("noise.value must be >= 0");
    if (c.noise.mode == NoiseMode::fitted && !(c.noise.lower > 0.0 && c.noise.lower < c.noise.upper))
        v.push_back("noise bounds must satisfy 0 < lower < upper");
    if (c.beta.mode == BetaSchedule::Mode::srinivas_practical && !(c.beta.delta_conf > 0.0 && c.beta.delta_conf < 1.0))
        v.push_back("beta.delta_conf must lie in (0,1)");
    if (c.beta.mode == BetaSchedule::Mode::constant && !(c.beta.constant_value >= 0.0))
        v.push_back("beta.value must be >= 0");
    if (c.output_dir.empty()) v.push_back("output_dir must not be empty");

    std::size_t n_sources = 0;
    if (c.benchmark) {
        try {
            const auto b = make_benchmark(c.benchmark->name, c.benchmark->params);
            n_sources = b.sources.size();
            if (c.space && c.space->dim() != b.space.dim())
                v.push_back("space dimension does not match benchmark '" + c.benchmark->name + "'");
            for (std::size_t s = 1; s < b.sources.size(); ++s)
                if (b.sources[s]->cost() > b.sources[0]->cost())
                    v.push_back("source 1 must be the most expensive source");
        } catch (const Error& e) {
            v.push_back(std::string("sources: ") + e.what());
        }
    }
    if (c.external) {
        const auto& e = c.external;
        n_sources = e->costs.size();
        if (e->command.empty())
            v.push_back("sources.command is empty");
        else if (!command_exists(e->command.front()))
            v.push_back("sources.command: '" + e->command.front() + "' not found or not executable");
        if (e->costs.empty()) v.push_back("sources.costs must list at least one cost");
        for (double cost : e->costs)
            if (!(cost > 0.0)) v.push_back("sources.costs must be positive");
        for (std::size_t s = 1; s < e->costs.size(); ++s)
            if (e->costs[s] > e->costs[0]) v.push_back("source 1 must be the most expensive source");
        if (!c.space) v.push_back("space is required with external sources");
        if (!(e->timeout_seconds > 0.0)) v.push_back("sources.timeout_seconds must be > 0");
    }
    if (!c.n_init_per_source.empty() && n_sources && c.n_init_per_source.size() != n_sources)
        v.push_back("n_init_per_source must have one entry per source");
    return v;
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }
    std::vector<std::string> errors;
    ExperimentConfig cfg;
    {
        Reader r(root, "config", errors);
        if (r.has("space")) read_space(r.raw("space"), cfg, errors);
        if (r.has("sources"))
            read_sources(r.raw("sources"), cfg, errors);
        else
            r.fail("'sources' is required");

        if (r.has("method")) {
            std::string m;
            r.get("method", m);
            if (m == "miso_agp")
                cfg.method = Method::miso_agp;
            else if (m == "vanilla_bo")
                cfg.method = Method::vanilla_bo;
            else if (m == "both")
                cfg.method = Method::both;
            else
                r.fail("method must be one of miso_agp, vanilla_bo, both");
        }
        r.get("n_init", cfg.n_init);
        if (r.has("n_init_per_source")) {
            const auto& a = r.raw("n_init_per_source");
            if (!a.is_array())
                r.fail("'n_init_per_source' must be an array");
            else
                for (const auto& v : a) {
                    if (v.is_number_integer() && v.get<long long>() >= 0)
                        cfg.n_init_per_source.push_back(v.get<std::size_t>());
                    else
                        r.fail("'n_init_per_source' entries must be non-negative integers");
                }
        }
        r.get("max_iterations", cfg.max_iterations);
        r.get("max_cost", cfg.max_cost);
        r.get("m", cfg.m);
        r.get("delta", cfg.delta);
        r.get("shift_numerator", cfg.shift_numerator);
        if (r.has("kernel")) {
            std::string k;
            r.get("kernel", k);
            if (auto f = parse_kernel_family(k))
                cfg.kernel = *f;
            else
                r.fail("kernel must be one of SE, Matern32, Matern52, RQ");
        }
        if (r.has("noise")) {
            Reader n(r.raw("noise"), "noise", errors);
            std::string mode = "fitted";
            n.get("mode", mode);
            if (mode == "fitted")
                cfg.noise.mode = NoiseMode::fitted;
            else if (mode == "fixed")
                cfg.noise.mode = NoiseMode::fixed;
            else
                n.fail("mode must be 'fitted' or 'fixed'");
            n.get("value", cfg.noise.value);
            n.get("lower", cfg.noise.lower);
            n.get("upper", cfg.noise.upper);
        }
        r.get("mle_restarts", cfg.mle_restarts);
        if (r.has("beta")) {
            Reader b(r.raw("beta"), "beta", errors);
            std::string mode = "srinivas_practical";
            b.get("mode", mode);
            if (mode == "srinivas_practical")
                cfg.beta.mode = BetaSchedule::Mode::srinivas_practical;
            else if (mode == "constant")
                cfg.beta.mode = BetaSchedule::Mode::constant;
            else
                b.fail("mode must be 'srinivas_practical' or 'constant'");
            b.get("delta_conf", cfg.beta.delta_conf);
            b.get("value", cfg.beta.constant_value);
        }
        if (r.has("inner_optimizer")) {
            Reader o(r.raw("inner_optimizer"), "inner_optimizer", errors);
            o.get("n_starts", cfg.inner.n_starts);
            o.get("max_iterations", cfg.inner.local.max_iterations);
            o.get("fd_step", cfg.inner.fd_step);
        }
        if (r.has("lhs")) {
            std::string l;
            r.get("lhs", l);
            if (l == "jittered")
                cfg.lhs = LhsMode::jittered;
            else if (l == "centered")
                cfg.lhs = LhsMode::centered;
            else
                r.fail("lhs must be 'jittered' or 'centered'");
        }
        r.get("n_runs", cfg.n_runs);
        r.get("base_seed", cfg.base_seed);
        r.get("output_dir", cfg.output_dir);
    }
    if (errors.empty()) errors = validate_config(cfg);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file " + path.string()});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    if (c.space) {
        auto& s = j["space"] = nlohmann::ordered_json::array();
        for (const auto& d : c.space->dims())
            s.push_back({{"name", d.name}, {"lower", d.lower}, {"upper", d.upper}, {"log10", d.log10_scaled}});
    }
    if (c.benchmark) {
        j["sources"]["benchmark"] = c.benchmark->name;
        j["sources"]["params"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : c.benchmark->params) j["sources"]["params"][k] = v;
    }
    if (c.external) {
        j["sources"]["command"] = c.external->command;
        j["sources"]["costs"] = c.external->costs;
        j["sources"]["timeout_seconds"] = c.external->timeout_seconds;
    }
    j["method"] = std::string(to_string(c.method));
    j["n_init"] = c.n_init;
    if (!c.n_init_per_source.empty()) j["n_init_per_source"] = c.n_init_per_source;
    j["max_iterations"] = c.max_iterations;
    if (std::isfinite(c.max_cost)) j["max_cost"] = c.max_cost;
    j["m"] = c.m;
    j["delta"] = c.delta;
    j["shift_numerator"] = c.shift_numerator;
    j["kernel"] = std::string(to_string(c.kernel));
    if (c.noise.mode == NoiseMode::fitted)
        j["noise"] = {{"mode", "fitted"}, {"lower", c.noise.lower}, {"upper", c.noise.upper}};
    else
        j["noise"] = {{"mode", "fixed"}, {"value", c.noise.value}};
    j["mle_restarts"] = c.mle_restarts;
    if (c.beta.mode == BetaSchedule::Mode::srinivas_practical)
        j["beta"] = {{"mode", "srinivas_practical"}, {"delta_conf", c.beta.delta_conf}};
    else
        j["beta"] = {{"mode", "constant"}, {"value", c.beta.constant_value}};
    j["inner_optimizer"] = {{"n_starts", c.inner.n_starts},
                            {"max_iterations", c.inner.local.max_iterations},
                            {"fd_step", c.inner.fd_step}};
    j["lhs"] = c.lhs == LhsMode::jittered ? "jittered" : "centered";
    j["n_runs"] = c.n_runs;
    j["base_seed"] = c.base_seed;
    j["output_dir"] = c.output_dir;
    return j.dump(2);
}

}  // namespace misoagp
