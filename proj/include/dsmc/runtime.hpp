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

#include <functional>
#include <random>
#include <vector>

#include "dsmc/balance.hpp"
#include "dsmc/collision.hpp"
#include "dsmc/cut_tree.hpp"
#include "dsmc/domain.hpp"
#include "dsmc/inflow.hpp"
#include "dsmc/rcb.hpp"

namespace dsmc {

enum class TimerMode { Wall, Synthetic };

/// Deterministic stand-in for a wall-clock processor timer: a linear model
/// over the step's activity counts. Units are arbitrary; only ratios matter.
struct SyntheticCostModel {
  double aMove = 1.0;    // per particle advected
  double aPair = 4.0;    // per collision candidate pair
  double aCreate = 2.0;  // per particle created
  double aFixed = 0.0;   // per rank per step

  void validate() const {
    if (aMove < 0 || aPair < 0 || aCreate < 0 || aFixed < 0)
      throw std::invalid_argument("SyntheticCostModel: coefficients must be >= 0");
  }
};

inline double syntheticRankTime(const SyntheticCostModel& model, long long moved,
                                long long candidatePairs, long long created) {
  return model.aFixed + model.aMove * double(moved) + model.aPair * double(candidatePairs) +
         model.aCreate * double(created);
}

struct SimulationConfig {
  Box3d domain{Vector3d(0, 0, 0), Vector3d(0.8, 0.8, 0.8)};
  GasModeld gas = argonGas(3.84e13);
  InletSpecd inlet{Vector3d(0.4, 0.4, 0), 0.1, Vector3d(0, 0, 2900), 0.01, 300.0};
  double dt = 1.427e-7;
  long long nSteps = 1000;
  int numRanks = 16;
  unsigned long long seed = 1;
  int collisionCellsPerRank = 500;
  int mapCellsPerRank = 1000;
  StrategyConfigd strategy;
  BalanceSchedule schedule;
  TimerMode timerMode = TimerMode::Synthetic;
  SyntheticCostModel synthetic;
  long long rampSteps = 50;     // inlet runs at rampFraction density this long
  double rampFraction = 0.01;
  int workers = 0;              // simulated-rank worker threads; 0 = hardware

  void validate() const;
};

/// One simulated rank: a region, the particles in it, the collision grid
/// over the region, and a private RNG stream.
struct RankState {
  int rank = 0;
  Box3d box;
  std::vector<Particled> particles;
  CollisionGridd grid;
  std::mt19937_64 rng;
  RankTimingd lastTiming;
  std::vector<double> recentTimes;  // trailing processor times, newest last
};

struct StepTimings {
  long long step = 0;
  std::vector<RankTimingd> perRank;
  double wallClock = 0;  // max_r T_r in synthetic mode, elapsed step in wall mode
};

struct StepRecord {
  StepTimings timings;
  long long totalParticles = 0;  // after the step (and rebalance, if any)
  long long created = 0;
  long long exited = 0;
  long long migrated = 0;  // boundary crossings delivered this step
  long long candidatePairs = 0;
  long long collisions = 0;
  bool rebalanced = false;
  long long rebalanceMigrated = 0;  // redistribution volume, rebalance steps only
};

/// The time-step loop over 2^n in-process ranks. Each step runs, per rank,
/// collide -> create -> move inside the processor-time window, then migrates
/// departures outside it. Results are identical for any worker count.
class Simulation {
 public:
  explicit Simulation(SimulationConfig config);

  /// Advances one step and rebalances afterwards if the schedule fires.
  StepRecord step();

  /// Builds a cost map from current timings/particles, repartitions, and
  /// redistributes. Returns the number of particles that changed ranks.
  long long rebalance();

  /// Same, but with an explicit strategy (for strategy comparisons on one
  /// simulation state).
  long long rebalance(const StrategyConfigd& strategy);

  /// Delivers externally built particles to their owning ranks (test rigs
  /// and scenario setup). Positions must lie inside the domain.
  void injectParticles(const std::vector<Particled>& particles);

  long long currentStep() const { return stepCount_; }
  const SimulationConfig& config() const { return config_; }
  const CutTree<double>& tree() const { return tree_; }
  const std::vector<RankState>& ranks() const { return ranks_; }
  const CostMapd& lastCostMap() const { return lastCostMap_; }
  int rebalanceCount() const { return rebalanceCount_; }
  int degenerateMapFallbacks() const { return degenerateMapFallbacks_; }

  long long totalParticles() const;
  long long maxRankParticles() const;

  /// Timing + subdomain + live-particle views for cost-map construction.
  /// Processor times are averaged over the trailing window.
  std::vector<RankSnapshotd> snapshots() const;
  std::vector<RankSnapshotd> snapshots(int timingWindow) const;

 private:
  double sigmaCrMaxSeed() const;
  void runRankPhases(const std::function<void(int)>& fn);
  long long deliver(std::vector<std::vector<Particled>>& outboxes);

  SimulationConfig config_;
  CutTree<double> tree_;
  std::vector<RankState> ranks_;
  CostMapd lastCostMap_;
  long long stepCount_ = 0;
  int rebalanceCount_ = 0;
  int degenerateMapFallbacks_ = 0;
  int workers_ = 1;
};

/// Runs config.nSteps steps from a fresh simulation.
std::vector<StepRecord> run(const SimulationConfig& config);

}  // namespace dsmc
