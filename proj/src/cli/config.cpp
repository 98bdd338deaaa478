#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mkv/cli.hpp"
#include "mkv/errors.hpp"

namespace mkv::cli {

namespace {

json powers(int lo, int hi) {
    json a = json::array();
    for (int k = lo; k <= hi; ++k) a.push_back(std::uint64_t{1} << k);
    return a;
}

const double sqrt_02 = std::sqrt(0.2);

json cond_ou_model(bool with_dim) {
    json m = {{"kind", "cond_ou"}, {"sigma", sqrt_02}, {"sigma0", sqrt_02}, {"x0", json::array({0.0})}};
    if (with_dim) m["dim"] = 2;
    return m;
}

json interbank_model() {
    return {{"kind", "interbank"}, {"a", 10.0}, {"b", 1.0}, {"sigma", 0.5},
            {"rho", 0.5},          {"x0", 0.0}, {"xbar0", 0.0}};
}

json control_section(const std::string& kind) {
    if (kind == "affine") return {{"kind", "affine"}, {"c1", 0.0}, {"c2", 1.0}, {"c1_csv", ""}, {"c2_csv", ""}};
    if (kind == "constant") return {{"kind", "constant"}, {"rate", 0.0}};
    throw config_error("control.kind", "must be \"affine\" or \"constant\", got \"" + kind + "\"");
}

json probe_model(const std::string& kind) {
    if (kind == "gbm") return {{"kind", "gbm"}, {"x0", 1.0}, {"vol", 1.0}};
    if (kind == "linear_ode") return {{"kind", "linear_ode"}, {"x0", 1.0}, {"rate", 1.0}};
    if (kind == "constant") return {{"kind", "constant"}, {"x0", 0.0}, {"drift", 1.0}, {"vol", 1.0}};
    throw config_error("model.kind", "must be \"gbm\", \"linear_ode\" or \"constant\", got \"" + kind + "\"");
}

json n_plan() {
    return {{"n_values", powers(6, 16)}, {"replications", 30}, {"seed", 0}, {"p", 2.0}, {"burn_in_drop", 0}};
}

std::string user_kind(const json& user, const char* section, const char* fallback) {
    if (!user.is_object() || !user.contains(section)) return fallback;
    const json& s = user.at(section);
    if (!s.is_object() || !s.contains("kind")) return fallback;
    if (!s.at("kind").is_string()) throw config_error(std::string(section) + ".kind", "must be a string");
    return s.at("kind").get<std::string>();
}

std::string type_name(const json& v) {
    if (v.is_number()) return "number";
    return v.type_name();
}

json merge(const json& defaults, const json& user, const std::string& path) {
    if (!user.is_object()) throw config_error(path, "must be an object");
    json out = defaults;
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!defaults.contains(it.key())) throw config_error(key, "unknown key");
        const json& d = defaults.at(it.key());
        const json& v = it.value();
        if (d.is_object()) {
            out[it.key()] = merge(d, v, key);
        } else if (type_name(d) != type_name(v)) {
            throw config_error(key, "expected " + type_name(d) + ", got " + type_name(v));
        } else {
            out[it.key()] = v;
        }
    }
    return out;
}

const json& lookup(const json& cfg, std::string_view key) {
    const json* cur = &cfg;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = key.find('.', start);
        const std::string part(key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (!cur->is_object() || !cur->contains(part)) throw config_error(std::string(key), "missing");
        cur = &cur->at(part);
        if (dot == std::string_view::npos) return *cur;
        start = dot + 1;
    }
}

double as_double(const json& v, std::string_view key) {
    if (!v.is_number()) throw config_error(std::string(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw config_error(std::string(key), "must be finite");
    return x;
}

std::uint64_t as_uint(const json& v, std::string_view key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) throw config_error(std::string(key), "must be nonnegative");
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    const double x = as_double(v, key);
    if (x < 0.0 || x != std::floor(x) || x > 9007199254740992.0)
        throw config_error(std::string(key), "must be a nonnegative integer");
    return static_cast<std::uint64_t>(x);
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"ou-converge", "ou-density", "interbank", "probe-temporal", "simulate"};
    return names;
}

bool is_subcommand(std::string_view name) {
    for (const auto& s : subcommands())
        if (s == name) return true;
    return false;
}

json default_config(std::string_view sub, const json& user) {
    json doc = json::object();
    doc["description"] = "";
    const json grid = {{"T", 1.0}, {"M", 100}};
    if (sub == "ou-converge") {
        if (user_kind(user, "model", "cond_ou") != "cond_ou") throw config_error("model.kind", "must be \"cond_ou\"");
        doc["model"] = cond_ou_model(true);
        doc["grid"] = grid;
        doc["plan"] = n_plan();
    } else if (sub == "ou-density") {
        if (user_kind(user, "model", "cond_ou") != "cond_ou") throw config_error("model.kind", "must be \"cond_ou\"");
        doc["model"] = cond_ou_model(false);
        doc["grid"] = grid;
        doc["plan"] = n_plan();
        doc["kde"] = {{"order", 5}, {"lo", -3.0}, {"hi", 3.0}, {"points", 601}, {"dump_density", true}};
    } else if (sub == "interbank") {
        if (user_kind(user, "model", "interbank") != "interbank")
            throw config_error("model.kind", "must be \"interbank\"");
        doc["model"] = interbank_model();
        doc["grid"] = grid;
        doc["plan"] = n_plan();
        doc["control"] = control_section(user_kind(user, "control", "affine"));
    } else if (sub == "probe-temporal") {
        doc["model"] = probe_model(user_kind(user, "model", "gbm"));
        doc["grid"] = {{"T", 1.0}};
        json h = json::array();
        for (int k = 4; k <= 9; ++k) h.push_back(std::ldexp(1.0, -k));
        doc["plan"] = {{"h_values", h}, {"paths", 1024}, {"replications", 8}, {"seed", 0}, {"p", 2.0}};
    } else if (sub == "simulate") {
        const std::string kind = user_kind(user, "model", "cond_ou");
        if (kind == "cond_ou") {
            doc["model"] = cond_ou_model(true);
        } else if (kind == "interbank") {
            doc["model"] = interbank_model();
            doc["control"] = control_section(user_kind(user, "control", "affine"));
        } else {
            throw config_error("model.kind", "must be \"cond_ou\" or \"interbank\", got \"" + kind + "\"");
        }
        doc["grid"] = grid;
        doc["plan"] = {{"particles", 1000}, {"replication", 0}, {"seed", 0}};
    } else {
        throw config_error("", "unknown subcommand \"" + std::string(sub) + "\"");
    }
    return doc;
}

json effective_config(std::string_view sub, const json& user) {
    return merge(default_config(sub, user), user, "");
}

void apply_override(json& doc, std::string_view assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw config_error(std::string(assignment), "override must look like key.path=value");
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* cur = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw config_error(key, "empty path component");
        if (!cur->is_object()) throw config_error(key, "parent is not an object");
        if (dot == std::string::npos) {
            (*cur)[part] = value;
            return;
        }
        if (!cur->contains(part)) (*cur)[part] = json::object();
        cur = &(*cur)[part];
        start = dot + 1;
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("", "cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw config_error("", path + ": " + e.what());
    }
}

json resolve_config(const invocation& inv) {
    if (!is_subcommand(inv.subcommand)) throw config_error("", "unknown subcommand \"" + inv.subcommand + "\"");
    json user = inv.config_path.empty() ? json::object() : load_config_file(inv.config_path);
    if (!user.is_object()) throw config_error("", "config document must be an object");
    for (const auto& o : inv.overrides) apply_override(user, o);

    const bool has_seed = user.contains("plan") && user["plan"].is_object() && user["plan"].contains("seed");
    json cfg = effective_config(inv.subcommand, user);
    if (inv.seed) {
        cfg["plan"]["seed"] = *inv.seed;
    } else if (!has_seed) {
        if (const char* env = std::getenv("MKV_SEED"); env && *env) {
            char* end = nullptr;
            errno = 0;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (*end != '\0' || errno != 0 || env[0] == '-') throw config_error("MKV_SEED", "must be an unsigned integer");
            cfg["plan"]["seed"] = static_cast<std::uint64_t>(v);
        }
    }
    get_uint(cfg, "plan.seed");
    return cfg;
}

double get_double(const json& cfg, std::string_view key) { return as_double(lookup(cfg, key), key); }

std::uint64_t get_uint(const json& cfg, std::string_view key) { return as_uint(lookup(cfg, key), key); }

std::string get_string(const json& cfg, std::string_view key) {
    const json& v = lookup(cfg, key);
    if (!v.is_string()) throw config_error(std::string(key), "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& cfg, std::string_view key) {
    const json& v = lookup(cfg, key);
    if (!v.is_boolean()) throw config_error(std::string(key), "expected a boolean");
    return v.get<bool>();
}

std::vector<double> get_doubles(const json& cfg, std::string_view key) {
    const json& v = lookup(cfg, key);
    if (!v.is_array()) throw config_error(std::string(key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], std::string(key) + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::size_t> get_sizes(const json& cfg, std::string_view key) {
    const json& v = lookup(cfg, key);
    if (!v.is_array()) throw config_error(std::string(key), "expected an array");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(static_cast<std::size_t>(as_uint(v[i], std::string(key) + "[" + std::to_string(i) + "]")));
    return out;
}

}  // namespace mkv::cli
