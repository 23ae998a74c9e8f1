#include "flowgnn/commands.hpp"
#include "flowgnn/runconfig.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Graph network lift regression on potential-flow meshes"};
    app.require_subcommand(1);

    struct Args {
        std::string config_path;
        std::int64_t seed = -1;
        std::string out_dir;
    };
    std::map<std::string, Args> args;

    for (const char* name : {"generate", "train", "eval", "benchmark", "analyze"}) {
        CLI::App* sub = app.add_subcommand(name);
        Args& a = args[name];
        sub->add_option("--config", a.config_path, "Run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", a.seed, "Override the command's seed");
        sub->add_option("--out", a.out_dir, "Redirect output files into this directory")
            ->check(CLI::ExistingDirectory);
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const Args& a = args[name];
    try {
        const flowgnn::Command command = flowgnn::parse_command(name);
        flowgnn::RunConfig config = flowgnn::load_run_config(a.config_path);
        if (a.seed >= 0)
            flowgnn::apply_seed_override(config, command, static_cast<std::uint64_t>(a.seed));
        if (!a.out_dir.empty())
            flowgnn::apply_out_dir(config, command, a.out_dir);
        flowgnn::run_command(config, command);
    } catch (const std::exception& e) {
        std::cerr << "flowgnn " << name << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
