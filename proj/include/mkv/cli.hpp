#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace mkv::cli {

using json = nlohmann::json;

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

const std::vector<std::string>& subcommands();
bool is_subcommand(std::string_view name);

// Configuration documents have sections model, grid, plan, kde, control (the
// set depends on the subcommand). Sections with a "kind" key take their field
// list from that kind. Unknown keys and type mismatches raise config_error
// naming the dotted key.

// Full default document for `subcommand`, with the kinds chosen in `user`.
json default_config(std::string_view subcommand, const json& user = json::object());

// Defaults overlaid with the user document.
json effective_config(std::string_view subcommand, const json& user);

// "a.b.c=value": value parsed as JSON, or taken as a string when it does not parse.
void apply_override(json& doc, std::string_view assignment);

json load_config_file(const std::string& path);

struct invocation {
    std::string subcommand;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    int threads = 1;
    std::optional<std::uint64_t> seed;
};

// Config file, then overrides, then the seed: --seed beats plan.seed in the
// document, which beats the MKV_SEED environment variable.
json resolve_config(const invocation& inv);

// Runs one experiment and writes <out_dir>/<subcommand>.csv,
// <out_dir>/effective_config.json and, for simulate, <out_dir>/simulate.bin.
int run(const invocation& inv, std::ostream& out, std::ostream& err);

// Command-line front end (argument parsing + run).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Typed accessors on an effective config; errors name the dotted key.
double get_double(const json& cfg, std::string_view key);
std::uint64_t get_uint(const json& cfg, std::string_view key);
std::string get_string(const json& cfg, std::string_view key);
bool get_bool(const json& cfg, std::string_view key);
std::vector<double> get_doubles(const json& cfg, std::string_view key);
std::vector<std::size_t> get_sizes(const json& cfg, std::string_view key);

}  // namespace mkv::cli
