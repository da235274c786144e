#include "osbk_app/app.hpp"

#include "osbk/error.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>

namespace osbk::app {

namespace {

/// Applies "a.b.c=value"; the value is parsed as JSON and kept as a string
/// when that fails.
void apply_override(json& root, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) raise(ErrorCode::Config, "--set expects key=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    json* node = &root;
    std::size_t start = 0;
    for (;;) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) raise(ErrorCode::Config, "--set: empty key in '" + path + "'");
        if (!node->is_object()) raise(ErrorCode::Config, "--set: '" + path + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

json error_json(const std::string& code, const std::string& message)
{
    return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

int main_cli(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App cli{"Outer symplectic billiards toolkit"};
    cli.require_subcommand(1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    std::vector<std::string> sets;
    bool quiet = false;
    for (const auto& name : command_names()) {
        CLI::App* sub = cli.add_subcommand(name);
        sub->add_option("-c,--config", config_path, "JSON run config");
        sub->add_option("--seed", seed, "Master seed (overrides config)");
        sub->add_option("-o,--out", out_dir, "Output directory (overrides config)");
        sub->add_option("-j,--threads", threads, "Worker threads, 0 = all (overrides config)");
        sub->add_option("--set", sets, "Override a config entry, e.g. command.n=5");
        sub->add_flag("-q,--quiet", quiet, "Do not print result.json to stdout");
    }
    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        cli.exit(e, out, err);
        return Ok;
    } catch (const CLI::ParseError& e) {
        cli.exit(e, out, err);
        err << error_json("config", e.what()).dump() << '\n';
        return ConfigError;
    }
    const std::string command = cli.get_subcommands().front()->get_name();

    try {
        json root = json::object();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) raise(ErrorCode::Config, "cannot read config '" + config_path + "'");
            root = json::parse(f, nullptr, false);
            if (root.is_discarded()) raise(ErrorCode::Config, "config '" + config_path + "' is not valid JSON");
        }
        for (const auto& s : sets) apply_override(root, s);
        if (seed) root["seed"] = *seed;
        if (out_dir) root["out"] = *out_dir;
        if (threads) root["threads"] = *threads;
        const RunConfig cfg = parse_config(command, root);
        const RunResult res = run(cfg);
        if (!quiet) out << res.result.dump(2) << '\n';
        return res.exit_code;
    } catch (const Error& e) {
        err << error_json(std::string(to_string(e.code())), e.what()).dump() << '\n';
        if (e.code() == ErrorCode::Config) return ConfigError;
        if (e.code() == ErrorCode::SearchFailed) return SearchFailed;
        return Failure;
    } catch (const std::exception& e) {
        err << error_json("internal", e.what()).dump() << '\n';
        return Failure;
    }
}

}  // namespace osbk::app
