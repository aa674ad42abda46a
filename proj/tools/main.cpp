// Copyright 2026 The affine-recur Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "affine_recur/errors.hpp"
#include "commands.hpp"
#include "job_config.hpp"

namespace {

using namespace affine_recur;
using namespace affine_recur::cli;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> depth;
  std::optional<double> tol;
  std::optional<std::int64_t> seed;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "job configuration (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory (default: .)");
  cmd->add_option("--depth", args.depth, "override task.depth");
  cmd->add_option("--tol", args.tol, "override task.tol");
  cmd->add_option("--seed", args.seed, "override task.seed");
  cmd->add_option("--threads", args.threads, "override task.threads");
}

JobConfig load_with_overrides(const CommonArgs& args) {
  JobConfig config = load_job_config(args.config_path);
  if (args.depth) config.task.depth = *args.depth;
  if (args.tol) config.task.tol = *args.tol;
  if (args.seed) config.task.seed = static_cast<std::uint64_t>(*args.seed);
  if (args.threads) config.task.threads = *args.threads;
  if (config.task.depth < 1) throw config_error("config error: depth must be >= 1");
  if (!(config.task.tol > 0)) throw config_error("config error: tol must be > 0");
  if (config.task.threads < 1)
    throw config_error("config error: threads must be >= 1");
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified dimension brackets and recurrence simulation for "
               "self-affine iterated function systems"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const JobConfig&, const std::string&);
  };
  const Sub subs[] = {
      {"check", "validate hypotheses, cone certificate, quasimultiplicativity",
       &cmd_check},
      {"dim", "affinity dimension enclosure", &cmd_dim},
      {"starget", "shrinking-target dimension enclosure", &cmd_starget},
      {"pressure", "certified pressure staircase over an s-grid", &cmd_pressure},
      {"simulate", "Borel-Cantelli recurrence simulation", &cmd_simulate},
      {"render", "attractor point cloud and image", &cmd_render},
  };

  CommonArgs args[std::size(subs)];
  for (size_t i = 0; i < std::size(subs); ++i) {
    CLI::App* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_common(cmd, args[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  for (size_t i = 0; i < std::size(subs); ++i) {
    if (!app.got_subcommand(subs[i].name)) continue;
    try {
      const JobConfig config = load_with_overrides(args[i]);
      return subs[i].run(config, args[i].out_dir);
    } catch (const config_error& e) {
      std::cerr << e.what() << "\n";
      return kExitConfig;
    } catch (const capacity_error& e) {
      std::cerr << "capacity exceeded: " << e.what() << "\n";
      return kExitCapacity;
    } catch (const input_error& e) {
      std::cerr << "hypothesis violation: " << e.what() << "\n";
      return kExitHypothesis;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  return kExitConfig;
}
