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

#include "dsmc/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <mutex>
#include <thread>

namespace dsmc {

namespace {

double elapsedSeconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::mt19937_64 rankStream(unsigned long long seed, int rank) {
  std::seed_seq seq{static_cast<unsigned int>(seed), static_cast<unsigned int>(seed >> 32),
                    static_cast<unsigned int>(rank)};
  return std::mt19937_64(seq);
}

}  // namespace

void SimulationConfig::validate() const {
  if (!domain.valid()) throw std::invalid_argument("SimulationConfig: invalid domain box");
  gas.validate();
  inlet.validate(domain);
  if (!(dt > 0)) throw std::invalid_argument("SimulationConfig: dt must be positive");
  if (nSteps < 0) throw std::invalid_argument("SimulationConfig: nSteps must be >= 0");
  if (!isPowerOfTwo(numRanks))
    throw std::invalid_argument("SimulationConfig: rank count must be a power of two");
  if (collisionCellsPerRank < 1)
    throw std::invalid_argument("SimulationConfig: collisionCellsPerRank must be >= 1");
  if (mapCellsPerRank < 1)
    throw std::invalid_argument("SimulationConfig: mapCellsPerRank must be >= 1");
  strategy.validate();
  schedule.validate();
  synthetic.validate();
  if (rampSteps < 0) throw std::invalid_argument("SimulationConfig: rampSteps must be >= 0");
  if (!(rampFraction > 0 && rampFraction <= 1))
    throw std::invalid_argument("SimulationConfig: rampFraction must be in (0, 1]");
  if (workers < 0) throw std::invalid_argument("SimulationConfig: workers must be >= 0");
}

Simulation::Simulation(SimulationConfig config) : config_(std::move(config)) {
  config_.validate();
  workers_ = config_.workers > 0 ? config_.workers
                                 : std::max(1u, std::thread::hardware_concurrency());

  // Initial decomposition: RCB over a constant map, i.e. uniform boundaries.
  lastCostMap_ = makeCostMap(config_.domain, config_.numRanks, config_.mapCellsPerRank);
  lastCostMap_.fill(1.0);
  tree_ = rcbPartition(lastCostMap_, config_.numRanks);

  ranks_.resize(config_.numRanks);
  for (int r = 0; r < config_.numRanks; ++r) {
    RankState& state = ranks_[r];
    state.rank = r;
    state.box = tree_.subdomainOf(r);
    state.grid = CollisionGridd(state.box, config_.collisionCellsPerRank, sigmaCrMaxSeed());
    state.rng = rankStream(config_.seed, r);
    state.lastTiming = {r, 0.0, 0};
  }
}

double Simulation::sigmaCrMaxSeed() const {
  // Generous initial sigma * cr estimate at the inlet's characteristic
  // speed; per-cell values adapt upward as faster pairs are seen.
  const double cRef = mostProbableSpeed(config_.inlet.temperature, config_.gas.molecularMass) +
                      config_.inlet.bulkVelocity.norm();
  return vhsCrossSection(cRef, config_.gas) * cRef;
}

void Simulation::runRankPhases(const std::function<void(int)>& fn) {
  const int numRanks = config_.numRanks;
  const int pool = std::min(workers_, numRanks);
  if (pool <= 1) {
    for (int r = 0; r < numRanks; ++r) fn(r);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(pool);
  std::mutex errMutex;
  std::exception_ptr firstError;
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (int r = w; r < numRanks; r += pool) fn(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(errMutex);
        if (!firstError) firstError = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (firstError) std::rethrow_exception(firstError);
}

long long Simulation::deliver(std::vector<std::vector<Particled>>& outboxes) {
  long long delivered = 0;
  for (auto& box : outboxes) delivered += static_cast<long long>(box.size());
  // Serial, rank-ordered delivery keeps results worker-count independent.
  for (auto& box : outboxes) {
    for (auto& p : box) {
      const int owner = tree_.ownerOf(p.position);
      ranks_[owner].particles.push_back(p);
    }
    box.clear();
  }
  return delivered;
}

void Simulation::injectParticles(const std::vector<Particled>& particles) {
  for (const auto& p : particles) ranks_[tree_.ownerOf(p.position)].particles.push_back(p);
}

long long Simulation::totalParticles() const {
  long long total = 0;
  for (const auto& r : ranks_) total += static_cast<long long>(r.particles.size());
  return total;
}

long long Simulation::maxRankParticles() const {
  long long most = 0;
  for (const auto& r : ranks_)
    most = std::max(most, static_cast<long long>(r.particles.size()));
  return most;
}

std::vector<RankSnapshotd> Simulation::snapshots() const {
  return snapshots(config_.strategy.timingWindow);
}

std::vector<RankSnapshotd> Simulation::snapshots(int window) const {
  if (window < 1) throw std::invalid_argument("snapshots: timing window must be >= 1");
  std::vector<RankSnapshotd> out;
  out.reserve(ranks_.size());
  for (const auto& state : ranks_) {
    RankTimingd timing = state.lastTiming;
    if (!state.recentTimes.empty()) {
      const int have = static_cast<int>(state.recentTimes.size());
      const int use = std::min(window, have);
      double sum = 0;
      for (int i = have - use; i < have; ++i) sum += state.recentTimes[size_t(i)];
      timing.processorTime = sum / use;
    }
    timing.particleCount = static_cast<long long>(state.particles.size());
    out.push_back({timing, state.box, state.particles});
  }
  return out;
}

StepRecord Simulation::step() {
  ++stepCount_;
  const auto stepStart = std::chrono::steady_clock::now();
  const double densityScale = stepCount_ <= config_.rampSteps ? config_.rampFraction : 1.0;
  const int numRanks = config_.numRanks;

  struct PhaseTotals {
    long long moved = 0;
    long long exited = 0;
    long long created = 0;
    long long candidates = 0;
    long long collisions = 0;
    double seconds = 0;
  };
  std::vector<PhaseTotals> totals(static_cast<size_t>(numRanks));

  // Processor-time window: collide, create, move. Migration stays outside.
  runRankPhases([&](int r) {
    RankState& state = ranks_[size_t(r)];
    PhaseTotals& t = totals[size_t(r)];
    const auto t0 = std::chrono::steady_clock::now();

    state.grid.rebin(state.particles);
    for (int cell = 0; cell < state.grid.cellCount(); ++cell) {
      const auto stats =
          collideCell(state.grid.cellParticles(cell), state.particles, config_.gas, config_.dt,
                      state.grid.cellVolume(), state.grid.sigmaCrMax(cell), state.rng);
      t.candidates += stats.candidates;
      t.collisions += stats.collisions;
    }

    // Thinned inflow: every rank samples the full-intensity stream with its
    // own RNG and keeps candidates spawning in its region, so the union is
    // one full-rate Poisson process regardless of the decomposition.
    auto created =
        createInflow(config_.inlet, config_.gas, config_.domain, config_.dt, densityScale,
                     state.rng, [&](const Vector3d& pos) { return tree_.ownerOf(pos) == r; });
    t.created = static_cast<long long>(created.size());

    // Created particles already carry their partial-step push; only the
    // pre-existing store is advected.
    const size_t nBefore = state.particles.size();
    t.moved = static_cast<long long>(nBefore);
    size_t keep = 0;
    for (size_t i = 0; i < nBefore; ++i) {
      if (advect(state.particles[i], config_.dt, config_.domain) == MoveResult::Moved) {
        if (keep != i) state.particles[keep] = state.particles[i];
        ++keep;
      }
    }
    t.exited = static_cast<long long>(nBefore - keep);
    state.particles.resize(keep);
    state.particles.insert(state.particles.end(), created.begin(), created.end());

    t.seconds = elapsedSeconds(t0);
  });

  // Migration: pull departures per rank, then deliver in rank order.
  std::vector<std::vector<Particled>> outboxes(static_cast<size_t>(numRanks));
  runRankPhases([&](int r) {
    RankState& state = ranks_[size_t(r)];
    auto& out = outboxes[size_t(r)];
    size_t keep = 0;
    for (size_t i = 0; i < state.particles.size(); ++i) {
      int owner;
      try {
        owner = tree_.ownerOf(state.particles[i].position);
      } catch (const OutOfDomainError&) {
        throw std::logic_error("step: particle left the domain without exiting");
      }
      if (owner == r) {
        if (keep != i) state.particles[keep] = state.particles[i];
        ++keep;
      } else {
        out.push_back(state.particles[i]);
      }
    }
    state.particles.resize(keep);
  });
  const long long migrated = deliver(outboxes);

  StepRecord rec;
  rec.timings.step = stepCount_;
  rec.timings.perRank.resize(size_t(numRanks));
  double maxT = 0;
  for (int r = 0; r < numRanks; ++r) {
    RankState& state = ranks_[size_t(r)];
    const PhaseTotals& t = totals[size_t(r)];
    const double T = config_.timerMode == TimerMode::Synthetic
                         ? syntheticRankTime(config_.synthetic, t.moved, t.candidates, t.created)
                         : t.seconds;
    state.lastTiming = {r, T, static_cast<long long>(state.particles.size())};
    state.recentTimes.push_back(T);
    // Retained history bounds any snapshot window, not just the configured one.
    const size_t cap = size_t(std::max(256, config_.strategy.timingWindow));
    if (state.recentTimes.size() > cap)
      state.recentTimes.erase(state.recentTimes.begin(),
                              state.recentTimes.end() - std::ptrdiff_t(cap));
    rec.created += t.created;
    rec.exited += t.exited;
    rec.candidatePairs += t.candidates;
    rec.collisions += t.collisions;
    maxT = std::max(maxT, T);
  }
  rec.migrated = migrated;

  if (shouldRebalance(stepCount_, config_.schedule, maxRankParticles())) {
    rec.rebalanced = true;
    rec.rebalanceMigrated = rebalance();
  }

  for (int r = 0; r < numRanks; ++r) {
    RankState& state = ranks_[size_t(r)];
    state.lastTiming.particleCount = static_cast<long long>(state.particles.size());
    rec.timings.perRank[size_t(r)] = state.lastTiming;
  }
  rec.totalParticles = totalParticles();
  rec.timings.wallClock =
      config_.timerMode == TimerMode::Synthetic ? maxT : elapsedSeconds(stepStart);
  return rec;
}

long long Simulation::rebalance() { return rebalance(config_.strategy); }

long long Simulation::rebalance(const StrategyConfigd& strategy) {
  strategy.validate();
  CostMapd map = buildCostMap(config_.domain, config_.mapCellsPerRank,
                              snapshots(strategy.timingWindow), strategy);
  if (!(map.total() > 0)) {
    // Nothing to weigh by; fall back to uniform boundaries.
    std::clog << "rebalance: zero-total cost map, using uniform fallback\n";
    map.fill(1.0);
    ++degenerateMapFallbacks_;
  }
  tree_ = rcbPartition(map, config_.numRanks);
  lastCostMap_ = std::move(map);

  std::vector<std::vector<Particled>> outboxes(ranks_.size());
  for (size_t r = 0; r < ranks_.size(); ++r) {
    RankState& state = ranks_[r];
    auto& out = outboxes[r];
    size_t keep = 0;
    for (size_t i = 0; i < state.particles.size(); ++i) {
      if (tree_.ownerOf(state.particles[i].position) == state.rank) {
        if (keep != i) state.particles[keep] = state.particles[i];
        ++keep;
      } else {
        out.push_back(state.particles[i]);
      }
    }
    state.particles.resize(keep);
  }
  const long long moved = deliver(outboxes);

  for (auto& state : ranks_) {
    state.box = tree_.subdomainOf(state.rank);
    // Fresh grid over the new region; sigma estimates re-seed and re-adapt.
    state.grid = CollisionGridd(state.box, config_.collisionCellsPerRank, sigmaCrMaxSeed());
  }
  ++rebalanceCount_;
  return moved;
}

std::vector<StepRecord> run(const SimulationConfig& config) {
  Simulation sim(config);
  std::vector<StepRecord> records;
  records.reserve(size_t(std::max<long long>(0, config.nSteps)));
  for (long long i = 0; i < config.nSteps; ++i) records.push_back(sim.step());
  return records;
}

}  // namespace dsmc
