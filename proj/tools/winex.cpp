/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "winex/app/commands.hpp"

int main(int argc, char** argv) {
    using namespace winex::app;
    CLI::App app{"winex: declarative stream windows"};
    app.require_subcommand(1);

    std::string config, out_dir, input, output;
    bool debug = false;
    std::size_t report_every = 0, budget = 4, horizon = 8;

    auto* compile = app.add_subcommand("compile", "compile window definitions to automata");
    compile->add_option("-c,--config", config, "pipeline configuration")->required();
    compile->add_option("-o,--out", out_dir, "output directory")->required();

    auto* run = app.add_subcommand("run", "extract windows from a stream");
    run->add_option("-c,--config", config, "pipeline configuration")->required();
    run->add_option("-i,--input", input, "input file (default stdin)");
    run->add_option("-o,--output", output, "output file (default stdout)");
    run->add_flag("--debug-invariants", debug, "cross-check the tracked state after every letter");
    run->add_option("--report-every", report_every, "pane report to stderr every N records");

    auto* check = app.add_subcommand("check", "decide whether extraction runs in bounded memory");
    check->add_option("-c,--config", config, "pipeline configuration")->required();
    check->add_option("--budget", budget, "witness search depth for infinite theories")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "peak memory over all streams up to a length");
    simulate->add_option("-c,--config", config, "pipeline configuration")->required();
    simulate->add_option("--horizon", horizon, "stream length")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code::invalid;
    }

    if (*compile) return cmd_compile(config, out_dir, std::cerr);
    if (*check) return cmd_check(config, budget, std::cout, std::cerr);
    if (*simulate) return cmd_simulate(config, horizon, std::cout, std::cerr);

    std::ifstream in_file;
    std::ofstream out_file;
    if (!input.empty()) {
        in_file.open(input);
        if (!in_file) {
            std::cerr << "error: cannot open " << input << "\n";
            return exit_code::invalid;
        }
    }
    if (!output.empty()) {
        out_file.open(output);
        if (!out_file) {
            std::cerr << "error: cannot write " << output << "\n";
            return exit_code::invalid;
        }
    }
    std::istream& in = input.empty() ? std::cin : in_file;
    std::ostream& out = output.empty() ? std::cout : out_file;
    return cmd_run(config, in, out, std::cerr, RunOptions{debug, report_every});
}
