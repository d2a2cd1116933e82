// Copyright 2026 The sfqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// sfqlab command-line runner.
//
//   sfqlab <experiment> --config <path> [--seed <u64>] [--out <dir>]
//          [--format csv|json|both] [--threads <n>]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sfqlab/runner.hpp"

namespace {

std::string join_names() {
    std::string s;
    for (const auto &n : sfqlab::experiment_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"SFQ transmon control laboratory"};
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    std::string format = "both";
    std::optional<int> threads;
    bool print_config = false;

    app.add_option("experiment", experiment, "one of: " + join_names())->required();
    app.add_option("--config", config_path, "key = value configuration file (omit for all defaults)");
    app.add_option("--seed", seed, "64-bit seed (overrides the config)");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--threads", threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");
    CLI11_PARSE(app, argc, argv);

    std::string contents;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            std::cerr << "sfqlab: cannot read config file '" << config_path << "'\n";
            return 2;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        contents = ss.str();
    }

    auto outcome = sfqlab::parse_config_text(contents, experiment);
    const std::string where = config_path.empty() ? "<defaults>" : config_path;
    for (const auto &w : outcome.warnings) std::cerr << where << ": warning: " << sfqlab::ConfigError::format(w) << '\n';
    if (!outcome.config) {
        for (const auto &d : outcome.diagnostics) std::cerr << where << ": error: " << sfqlab::ConfigError::format(d) << '\n';
        return 2;
    }
    sfqlab::RunConfig cfg = std::move(*outcome.config);
    if (seed) {
        cfg.seed = *seed;
        cfg.params["seed"] = static_cast<std::int64_t>(*seed);
    }
    if (threads) cfg.params["threads"] = static_cast<std::int64_t>(*threads);
    cfg.output_path = out_dir;
    cfg.format = format;

    if (print_config) {
        std::cout << sfqlab::emit_config(cfg);
        return 0;
    }
    try {
        const auto artifacts = sfqlab::execute(cfg);
        sfqlab::write_artifacts(cfg, artifacts);
        std::cout << artifacts.summary << '\n';
    } catch (const std::exception &e) {
        std::cerr << "sfqlab: " << experiment << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}
