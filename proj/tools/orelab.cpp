// orelab: experiment harness for exact computations in free algebras,
// differential polynomial rings, and matrix algebra structure theory.
//
//   orelab <command> --config <path> [--out <dir>] [--seed <u64>] [--stable-output]
//
// Exit codes: 0 = all assertions pass, 1 = assertion failure, 2 = config error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "orelab/harness.hpp"

namespace {

const char* kCommands[] = {"assumption1-scan", "assumption3-witness", "radical",   "pseudo-idempotent",
                           "bz-sweep",         "naj-check",           "ore-identities", "quasi-inverse"};

int run_command(const std::string& command, const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed, bool stable) {
    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "orelab: cannot open config file: " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    orelab::harness::RunOptions opts;
    opts.seed = seed;
    opts.stable_output = stable;
    opts.out_dir = out_dir;

    auto result = orelab::harness::run_text(buf.str(), opts);
    if (result.report.contains("command") && result.report["command"] != command) {
        std::cerr << "orelab: config command '" << result.report["command"].get<std::string>()
                  << "' does not match subcommand '" << command << "'\n";
        return 2;
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    {
        std::ofstream rep(out_dir + "/report.json");
        rep << result.report.dump(2) << "\n";
    }
    for (const auto& [name, contents] : result.csv_files) {
        std::ofstream csv(out_dir + "/" + name);
        csv << contents;
    }

    if (result.report.contains("error")) {
        std::cerr << "orelab: " << result.report["error"].get<std::string>() << "\n";
    } else if (result.report.contains("assertions")) {
        for (const auto& a : result.report["assertions"])
            std::cout << (a["pass"].get<bool>() ? "[pass] " : "[FAIL] ") << a["name"].get<std::string>() << "\n";
    }
    std::cout << "report: " << out_dir << "/report.json (exit " << result.exit_code << ")\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orelab: exact free-algebra / Ore-ring / matrix-structure experiments"};
    app.require_subcommand(1);

    std::string default_out = ".";
    if (const char* env = std::getenv("ORELAB_OUT")) default_out = env;

    struct Parsed {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
        bool stable = false;
    };
    std::map<std::string, Parsed> parsed;

    for (const char* name : kCommands) {
        auto* sub = app.add_subcommand(name);
        auto& p = parsed[name];
        p.out = default_out;
        sub->add_option("--config", p.config, "JSON experiment config")->required();
        sub->add_option("--out", p.out, "output directory for report.json and CSV tables");
        std::uint64_t* seed_slot = nullptr;
        sub->add_option_function<std::uint64_t>(
            "--seed", [&p](std::uint64_t v) { p.seed = v; }, "seed override for randomized suites");
        (void)seed_slot;
        sub->add_flag("--stable-output", p.stable, "omit wall-clock timings for byte-identical reports");
    }

    CLI11_PARSE(app, argc, argv);

    for (const char* name : kCommands) {
        if (app.get_subcommand(name)->parsed()) {
            const auto& p = parsed[name];
            return run_command(name, p.config, p.out, p.seed, p.stable);
        }
    }
    std::cerr << "orelab: no subcommand selected\n";
    return 2;
}
