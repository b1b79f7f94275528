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

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dsmc/experiment.hpp"

namespace {

// Flag overrides beat file values. Strategy switches drop knobs that do not
// carry across kinds (damping, tacf floor); rank changes re-derive fnum when
// the config was given per-rank.
void applyOverrides(dsmc::ExperimentConfig& config, const std::optional<std::string>& strategy,
                    const std::optional<int>& ranks, const std::optional<unsigned long long>& seed,
                    const std::optional<long long>& steps, const std::optional<std::string>& out,
                    bool dumpCostmaps, const std::optional<std::string>& timer) {
  using dsmc::StrategyKind;
  if (strategy) {
    const StrategyKind kind = dsmc::strategyKindFromName(*strategy);
    if (kind != config.sim.strategy.kind) {
      config.sim.strategy.kind = kind;
      config.sim.strategy.damping =
          kind == StrategyKind::TimerDamped ? std::optional<double>(0.5) : std::nullopt;
      if (kind != StrategyKind::Tacf) config.sim.strategy.tacfFloorBeta = 0.0;
    }
  }
  if (ranks) {
    config.sim.numRanks = *ranks;
    config.resolveFnum();
  }
  if (seed) config.sim.seed = *seed;
  if (steps) config.sim.nSteps = *steps;
  if (out) config.output.dir = *out;
  if (dumpCostmaps) config.output.dumpCostmaps = true;
  if (timer)
    config.sim.timerMode = *timer == "wall" ? dsmc::TimerMode::Wall : dsmc::TimerMode::Synthetic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dsmclb: DSMC load-balancing experiment driver"};
  app.require_subcommand(1);

  CLI::App* runCmd = app.add_subcommand("run", "Run an experiment from a config file");
  std::string configPath;
  std::optional<std::string> strategy, timer, outDir;
  std::optional<int> ranks;
  std::optional<unsigned long long> seed;
  std::optional<long long> steps;
  bool dumpCostmaps = false;
  runCmd->add_option("config", configPath, "Path to the experiment config")->required();
  runCmd->add_option("--strategy", strategy,
                     "Override balance strategy (uniform|particle|timer_damped|tacf)");
  runCmd->add_option("--ranks", ranks, "Override simulated rank count (power of two)");
  runCmd->add_option("--seed", seed, "Override RNG seed");
  runCmd->add_option("--steps", steps, "Override step count");
  runCmd->add_option("--out", outDir, "Override output directory");
  runCmd->add_flag("--dump-costmaps", dumpCostmaps, "Write costmap_<step>.csv at each rebalance");
  runCmd->add_option("--timer", timer, "Override timer mode (wall|synthetic)")
      ->check(CLI::IsMember({"wall", "synthetic"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    dsmc::ExperimentConfig config = dsmc::loadConfigFile(configPath);
    applyOverrides(config, strategy, ranks, seed, steps, outDir, dumpCostmaps, timer);
    config.validate();

    const dsmc::ExperimentResult result = dsmc::runExperiment(config);
    std::cout << "wrote " << config.output.dir << "/steps.csv (" << result.steps.size()
              << " steps, " << config.sim.numRanks << " ranks, "
              << dsmc::strategyKindName(config.sim.strategy.kind) << ")\n";
    if (result.summary) {
      const dsmc::ExperimentSummary& s = *result.summary;
      std::cout << "summary over final " << s.stepsAveraged
                << " steps: mean_T_s=" << dsmc::formatDouble(s.meanT)
                << " wall_clock_s=" << dsmc::formatDouble(s.wallClock)
                << " imbalance_ratio=" << dsmc::formatDouble(s.imbalanceRatio) << '\n';
    }
    return 0;
  } catch (const dsmc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
