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

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmc/cost_map.hpp"
#include "dsmc/gas.hpp"

namespace dsmc {

enum class StrategyKind { Uniform, Particle, TimerDamped, Tacf };

inline const char* strategyKindName(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Uniform:
      return "uniform";
    case StrategyKind::Particle:
      return "particle";
    case StrategyKind::TimerDamped:
      return "timer_damped";
    case StrategyKind::Tacf:
      return "tacf";
  }
  throw std::invalid_argument("strategyKindName: unknown kind");
}

inline StrategyKind strategyKindFromName(const std::string& name) {
  if (name == "uniform") return StrategyKind::Uniform;
  if (name == "particle") return StrategyKind::Particle;
  if (name == "timer_damped") return StrategyKind::TimerDamped;
  if (name == "tacf") return StrategyKind::Tacf;
  throw std::invalid_argument("unknown strategy: " + name);
}

/// How the cost map is charged at a rebalance pass. damping is meaningful
/// only for timer_damped, tacfFloorBeta only for tacf (0 disables the
/// per-particle weight floor). timingWindow selects how many trailing step
/// timings are averaged into the timing snapshot.
template <typename Scalar>
struct StrategyConfig {
  StrategyKind kind = StrategyKind::Tacf;
  std::optional<Scalar> damping;
  Scalar tacfFloorBeta = Scalar(0);
  int timingWindow = 1;

  void validate() const {
    if (kind == StrategyKind::TimerDamped) {
      if (!damping) throw std::invalid_argument("StrategyConfig: timer_damped needs damping");
      if (!(*damping >= Scalar(0) && *damping <= Scalar(1)))
        throw std::invalid_argument("StrategyConfig: damping must be in [0, 1]");
    } else if (damping) {
      throw std::invalid_argument("StrategyConfig: damping is timer_damped-only");
    }
    if (tacfFloorBeta < Scalar(0))
      throw std::invalid_argument("StrategyConfig: tacfFloorBeta must be >= 0");
    if (tacfFloorBeta > Scalar(0) && kind != StrategyKind::Tacf)
      throw std::invalid_argument("StrategyConfig: tacfFloorBeta is tacf-only");
    if (timingWindow < 1) throw std::invalid_argument("StrategyConfig: timingWindow must be >= 1");
  }
};

using StrategyConfigd = StrategyConfig<double>;

/// One rank's timing snapshot for the step preceding a balance pass.
template <typename Scalar>
struct RankTiming {
  int rank = 0;
  Scalar processorTime = Scalar(0);  // seconds, >= 0
  long long particleCount = 0;
};

using RankTimingd = RankTiming<double>;

/// When to rebalance: every earlyInterval steps up to earlyUntil, every
/// lateInterval steps after that, or whenever a rank exceeds particleCap;
/// never after stopAt.
struct BalanceSchedule {
  long long earlyInterval = 25;
  long long earlyUntil = 100;
  long long lateInterval = 50;
  long long stopAt = 900;
  long long particleCap = 4000000;

  void validate() const {
    if (earlyInterval <= 0 || earlyUntil <= 0 || lateInterval <= 0 || stopAt <= 0 ||
        particleCap <= 0)
      throw std::invalid_argument("BalanceSchedule: all fields must be positive");
    if (earlyUntil > stopAt)
      throw std::invalid_argument("BalanceSchedule: earlyUntil must be <= stopAt");
  }
};

inline bool shouldRebalance(long long step, const BalanceSchedule& schedule,
                            long long maxRankParticles) {
  if (step > schedule.stopAt) return false;
  if (step <= schedule.earlyUntil) {
    if (step % schedule.earlyInterval == 0) return true;
  } else {
    if (step % schedule.lateInterval == 0) return true;
  }
  return maxRankParticles > schedule.particleCap;
}

/// Particle balancing charges every particle the same unit cost.
template <typename Scalar>
Scalar particleWeight(const RankTiming<Scalar>&) {
  return Scalar(1);
}

/// Timer-augmented weight: the rank's processor time spread evenly over its
/// particles. The N = 0 case is handled at deposit time (the time is spread
/// over the subdomain instead).
template <typename Scalar>
Scalar tacfWeight(const RankTiming<Scalar>& timing) {
  if (timing.particleCount <= 0) return Scalar(0);
  return timing.processorTime / Scalar(timing.particleCount);
}

/// Damped processor-timer effective times: lambda * T_r + (1 - lambda) * mean(T).
template <typename Scalar>
std::vector<Scalar> timerDampedTimes(const std::vector<RankTiming<Scalar>>& timings,
                                     Scalar damping) {
  if (timings.empty()) throw std::invalid_argument("timerDampedTimes: empty timing list");
  if (!(damping >= Scalar(0) && damping <= Scalar(1)))
    throw std::invalid_argument("timerDampedTimes: damping must be in [0, 1]");
  Scalar mean = Scalar(0);
  for (const auto& t : timings) mean += t.processorTime;
  mean /= Scalar(timings.size());
  std::vector<Scalar> tilde(timings.size());
  for (size_t i = 0; i < timings.size(); ++i)
    tilde[i] = damping * timings[i].processorTime + (Scalar(1) - damping) * mean;
  return tilde;
}

template <typename Scalar>
struct ImbalanceMetrics {
  Scalar meanT = Scalar(0);
  Scalar maxT = Scalar(0);
  Scalar imbalanceRatio = Scalar(0);  // maxT / meanT
};

using ImbalanceMetricsd = ImbalanceMetrics<double>;

template <typename Scalar>
ImbalanceMetrics<Scalar> imbalanceMetrics(const std::vector<RankTiming<Scalar>>& timings) {
  if (timings.empty()) throw std::invalid_argument("imbalanceMetrics: empty timing list");
  ImbalanceMetrics<Scalar> m;
  for (const auto& t : timings) {
    m.meanT += t.processorTime;
    m.maxT = std::max(m.maxT, t.processorTime);
  }
  m.meanT /= Scalar(timings.size());
  if (m.meanT == Scalar(0)) throw UndefinedRatioError("imbalanceMetrics: mean processor time is 0");
  m.imbalanceRatio = m.maxT / m.meanT;
  return m;
}

/// Fraction of ranks whose time is within tol * mean of the mean.
template <typename Scalar>
Scalar fractionWithin(const std::vector<RankTiming<Scalar>>& timings, Scalar tol) {
  const auto m = imbalanceMetrics(timings);
  long long within = 0;
  for (const auto& t : timings)
    if (std::abs(t.processorTime - m.meanT) <= tol * m.meanT) ++within;
  return Scalar(within) / Scalar(timings.size());
}

/// Everything a balance pass needs to know about one rank. particles views
/// the rank's live store; per-particle strategies divide by its size so the
/// rank's total deposit is exactly its timing mass.
template <typename Scalar>
struct RankSnapshot {
  RankTiming<Scalar> timing;
  Box3<Scalar> subdomain;
  std::span<const Particle<Scalar>> particles;
};

using RankSnapshotd = RankSnapshot<double>;

/// Charges the map according to the strategy. The map must start zeroed
/// (uniform overwrites it with a constant). Per rank the deposited mass is:
/// particle -> N_r, tacf -> T_r (spread T/N per particle, or uniformly over
/// the subdomain when the rank is empty), timer_damped -> lambda-damped T_r
/// spread uniformly over the subdomain. The tacf floor, when enabled, raises
/// cheap particles to beta * (sum T / sum N) and gives up mass exactness.
template <typename Scalar>
void depositCosts(CostMap<Scalar>& map, const std::vector<RankSnapshot<Scalar>>& ranks,
                  const StrategyConfig<Scalar>& strategy) {
  strategy.validate();
  if (ranks.empty()) throw std::invalid_argument("depositCosts: no ranks");
  switch (strategy.kind) {
    case StrategyKind::Uniform: {
      map.fill(Scalar(1));
      return;
    }
    case StrategyKind::Particle: {
      for (const auto& r : ranks)
        for (const auto& p : r.particles) map.deposit(p.position, Scalar(1));
      return;
    }
    case StrategyKind::Tacf: {
      Scalar weightFloor = Scalar(0);
      if (strategy.tacfFloorBeta > Scalar(0)) {
        Scalar sumT = Scalar(0);
        long long sumN = 0;
        for (const auto& r : ranks) {
          sumT += r.timing.processorTime;
          sumN += static_cast<long long>(r.particles.size());
        }
        if (sumN > 0) weightFloor = strategy.tacfFloorBeta * sumT / Scalar(sumN);
      }
      for (const auto& r : ranks) {
        if (r.particles.empty()) {
          map.depositUniform(r.subdomain, r.timing.processorTime);
          continue;
        }
        const Scalar w = std::max(r.timing.processorTime / Scalar(r.particles.size()),
                                  weightFloor);
        for (const auto& p : r.particles) map.deposit(p.position, w);
      }
      return;
    }
    case StrategyKind::TimerDamped: {
      std::vector<RankTiming<Scalar>> timings;
      timings.reserve(ranks.size());
      for (const auto& r : ranks) timings.push_back(r.timing);
      const auto tilde = timerDampedTimes(timings, *strategy.damping);
      for (size_t i = 0; i < ranks.size(); ++i)
        map.depositUniform(ranks[i].subdomain, tilde[i]);
      return;
    }
  }
  throw std::invalid_argument("depositCosts: unknown strategy kind");
}

/// Builds a fresh map over bounds sized for ranks.size() ranks and charges it.
template <typename Scalar>
CostMap<Scalar> buildCostMap(const Box3<Scalar>& bounds, int cellsPerRank,
                             const std::vector<RankSnapshot<Scalar>>& ranks,
                             const StrategyConfig<Scalar>& strategy) {
  if (ranks.empty()) throw std::invalid_argument("buildCostMap: no ranks");
  CostMap<Scalar> map = makeCostMap(bounds, static_cast<int>(ranks.size()), cellsPerRank);
  depositCosts(map, ranks, strategy);
  return map;
}

}  // namespace dsmc
