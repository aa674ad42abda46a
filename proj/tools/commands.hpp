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

#ifndef AFFINE_RECUR_TOOLS_COMMANDS_HPP_
#define AFFINE_RECUR_TOOLS_COMMANDS_HPP_

#include <string>

#include "job_config.hpp"

namespace affine_recur::cli {

// Exit codes: 0 success, 1 hypothesis violation, 2 capacity exceeded,
// 3 configuration error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitHypothesis = 1;
inline constexpr int kExitCapacity = 2;
inline constexpr int kExitConfig = 3;

int cmd_check(const JobConfig& config, const std::string& out_dir);
int cmd_dim(const JobConfig& config, const std::string& out_dir);
int cmd_starget(const JobConfig& config, const std::string& out_dir);
int cmd_pressure(const JobConfig& config, const std::string& out_dir);
int cmd_simulate(const JobConfig& config, const std::string& out_dir);
int cmd_render(const JobConfig& config, const std::string& out_dir);

}  // namespace affine_recur::cli

#endif  // AFFINE_RECUR_TOOLS_COMMANDS_HPP_
