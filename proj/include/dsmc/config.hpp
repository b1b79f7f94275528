/*
 * Copyright 2026 the dsmclb authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dsmc/runtime.hpp"

namespace dsmc {

/// Syntax or semantic failure while reading a config; maps to CLI exit 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where and how often the experiment driver writes CSV output.
struct OutputConfig {
  std::string dir = "out";
  bool dumpCostmaps = false;        // costmap_<step>.csv at each rebalance
  long long rankDumpInterval = 0;   // ranks_<step>.csv every N steps; 0 = off
  long long summaryWindow = 50;     // steady-state means over the final N steps

  void validate() const {
    if (dir.empty()) throw std::invalid_argument("OutputConfig: dir must be nonempty");
    if (rankDumpInterval < 0)
      throw std::invalid_argument("OutputConfig: rank_dump_interval must be >= 0");
    if (summaryWindow < 1)
      throw std::invalid_argument("OutputConfig: summary_window must be >= 1");
  }
};

/// A full experiment: simulation parameters plus output policy.
///
/// `fnumPerRank` is the weak-scaling spelling of fnum: when set,
/// `sim.gas.fnum = fnumPerRank * sim.numRanks` (kept in sync by
/// resolveFnum, which rank-count overrides must call). When unset,
/// `sim.gas.fnum` stands on its own.
struct ExperimentConfig {
  SimulationConfig sim;
  OutputConfig output;
  std::optional<double> fnumPerRank = 2.4e12;

  void resolveFnum() {
    if (fnumPerRank) sim.gas.fnum = *fnumPerRank * double(sim.numRanks);
  }

  void validate() const {
    sim.validate();
    output.validate();
    if (fnumPerRank && !(*fnumPerRank > 0))
      throw std::invalid_argument("ExperimentConfig: fnum_per_rank must be positive");
  }
};

/// Parses the flat INI dialect: `[section]` headers, `key = value` lines,
/// `#` comments. Keys before any section header belong to [run]. Unknown
/// sections or keys are errors; missing keys keep their defaults. The
/// result is fully validated.
ExperimentConfig parseConfig(const std::string& text);

/// parseConfig over the contents of `path`; unreadable file is a ConfigError.
ExperimentConfig loadConfigFile(const std::string& path);

/// Canonical text form; parseConfig(serializeConfig(c)) reproduces c exactly
/// (doubles are printed shortest-round-trip).
std::string serializeConfig(const ExperimentConfig& config);

}  // namespace dsmc
