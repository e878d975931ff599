// icr: run the synthetic benchmark, sweeps, image recovery, or solve a
// user-supplied instance. See README.md for the file formats.

#include "icr/config.hpp"
#include "icr/error.hpp"
#include "icr/experiment.hpp"
#include "icr/io.hpp"
#include "icr/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

std::string flag_name(std::string_view key) {
    std::string s(key);
    for (char& c : s)
        if (c == '_') c = '-';
    return "--" + s;
}

int exit_code_for(icr::ErrorCode code) {
    using icr::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonSparsifyingPrior:
        case ErrorCode::ProblemTooLarge:
        case ErrorCode::BadMagic:
        case ErrorCode::TruncatedPayload:
        case ErrorCode::TrailingBytes:
        case ErrorCode::MalformedInput:
        case ErrorCode::IoError:
            return 2;
        default:
            return 1;
    }
}

void report(std::string_view code, std::string_view message, const nlohmann::json& extra = {}) {
    nlohmann::json j{{"error", code}, {"message", message}};
    if (extra.is_object())
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse recovery with iterative convex refinement"};
    app.set_version_flag("--version", std::string(icr::version()));
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"synth-bench", "seeded synthetic benchmark over all methods"},
        {"sweep", "benchmark over a grid of k or sigma"},
        {"mnist", "recover IDX images from random measurements"},
        {"solve", "solve one instance read from CSV or ICRMAT01 files"},
        {"synth-export", "write one synthetic instance as ICRMAT01 files"},
    };

    std::string config_file;
    std::vector<std::string> sets;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_file, "plain-text key = value config file");
        sub->add_option("--set", sets, "override any config key, KEY=VALUE");
        for (const auto key : icr::config_keys()) {
            if (key == "command") continue;
            const std::string k(key);
            auto* opt = sub->add_option(flag_name(key), values[name + "/" + k], "config key " + k);
            options[name + "/" + k] = opt;
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report("UsageError", e.what());
        return 2;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        icr::ExperimentConfig cfg;
        cfg.command = command;
        if (!config_file.empty()) {
            const auto bytes = icr::read_file_bytes(config_file);
            icr::apply_config_text(cfg, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
            cfg.command = command;
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw icr::Error(icr::ErrorCode::InvalidArgument, "--set expects KEY=VALUE, got '" + s + "'");
            icr::set_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        for (const auto key : icr::config_keys()) {
            if (key == "command") continue;
            const std::string id = command + "/" + std::string(key);
            if (options[id]->count() > 0) icr::set_config_value(cfg, key, values[id]);
        }

        for (const auto& path : icr::run_command(cfg)) std::cout << path.string() << "\n";
        return 0;
    } catch (const icr::ParseError& e) {
        report(icr::to_string(e.code()), e.what(), {{"row", e.row()}, {"col", e.col()}});
        return 2;
    } catch (const icr::Error& e) {
        report(icr::to_string(e.code()), e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        report("RuntimeError", e.what());
        return 1;
    }
}
