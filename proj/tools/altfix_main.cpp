#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "altfix/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"altfix: contraction certificates, Picard iteration and property P checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    bool quiet = false;

    for (auto sub : {altfix::Subcommand::certify, altfix::Subcommand::solve, altfix::Subcommand::property_p,
                     altfix::Subcommand::witness}) {
        auto* cmd = app.add_subcommand(std::string(altfix::to_string(sub)));
        cmd->add_option("--config", config_path, "configuration document (JSON)")->required();
        cmd->add_option("--out", out_path, "write the machine-readable report here");
        cmd->add_option("--seed", seed, "override condition.seed");
        cmd->add_flag("--quiet", quiet, "suppress the human-readable report");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : altfix::exit_status::config_error;
    }
    const auto sub = *altfix::parse_subcommand(app.get_subcommands().front()->get_name());

    altfix::RunConfig config;
    try {
        std::ifstream in(config_path);
        if (!in) throw altfix::ConfigError("", "cannot read config file '" + config_path + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = altfix::parse_config(buffer.str());
        if (seed) config.condition.seed = *seed;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return altfix::exit_status::config_error;
    }

    try {
        const auto report = altfix::run(config, sub);
        if (!out_path.empty()) {
            std::ofstream out(out_path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write report to '" + out_path + "'");
            out << report.machine_text();
        }
        if (!quiet) std::cout << report.human;
        return report.exit_code;
    } catch (const std::exception& e) {
        std::cerr << to_string(sub) << ": " << e.what() << "\n";
        return altfix::exit_status::error;
    }
}
