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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "dsmc/runtime.hpp"

using dsmc::Box3d;
using dsmc::Particled;
using dsmc::SimulationConfig;
using dsmc::StepRecord;
using dsmc::StrategyKind;
using dsmc::Vector3d;

namespace {

/// Small argon jet: a few hundred creations per step, 4 ranks by default.
SimulationConfig miniJet(int ranks = 4) {
  SimulationConfig cfg;
  cfg.domain = Box3d(Vector3d(0, 0, 0), Vector3d(0.8, 0.8, 0.8));
  cfg.gas = dsmc::argonGas(4.6e16);
  cfg.inlet.center = Vector3d(0.4, 0.4, 0.0);
  cfg.inlet.radius = 0.1;
  cfg.inlet.bulkVelocity = Vector3d(0, 0, 2900);
  cfg.inlet.density = 0.01;
  cfg.inlet.temperature = 300.0;
  cfg.dt = 1e-6;
  cfg.nSteps = 0;
  cfg.numRanks = ranks;
  cfg.seed = 99;
  cfg.collisionCellsPerRank = 64;
  cfg.mapCellsPerRank = 250;
  cfg.strategy.kind = StrategyKind::Tacf;
  cfg.rampSteps = 0;
  cfg.workers = 1;
  return cfg;
}

std::vector<Particled> scatter(int count, Box3d box, std::mt19937_64& rng, double margin = 0.0) {
  box.lo.array() += margin;
  box.hi.array() -= margin;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Particled> out(static_cast<size_t>(count));
  for (auto& p : out)
    for (int k = 0; k < 3; ++k)
      p.position[k] = box.lo[k] + u(rng) * (box.hi[k] - box.lo[k]);
  return out;
}

bool sameRecord(const StepRecord& a, const StepRecord& b) {
  if (a.timings.step != b.timings.step || a.timings.wallClock != b.timings.wallClock)
    return false;
  if (a.timings.perRank.size() != b.timings.perRank.size()) return false;
  for (size_t i = 0; i < a.timings.perRank.size(); ++i) {
    const auto& x = a.timings.perRank[i];
    const auto& y = b.timings.perRank[i];
    if (x.rank != y.rank || x.processorTime != y.processorTime ||
        x.particleCount != y.particleCount)
      return false;
  }
  return a.totalParticles == b.totalParticles && a.created == b.created &&
         a.exited == b.exited && a.migrated == b.migrated &&
         a.candidatePairs == b.candidatePairs && a.collisions == b.collisions &&
         a.rebalanced == b.rebalanced && a.rebalanceMigrated == b.rebalanceMigrated;
}

double ratioOf(const StepRecord& rec) {
  return dsmc::imbalanceMetrics(rec.timings.perRank).imbalanceRatio;
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(miniJet().validate());
  auto cfg = miniJet();
  cfg.numRanks = 3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = miniJet();
  cfg.dt = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = miniJet();
  cfg.synthetic.aPair = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = miniJet();
  cfg.rampFraction = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = miniJet();
  cfg.strategy.kind = StrategyKind::TimerDamped;  // no damping given
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = miniJet();
  cfg.inlet.center[2] = 0.4;  // inlet off the bottom face
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("zero steps yields an empty series") {
  auto cfg = miniJet();
  cfg.nSteps = 0;
  CHECK(dsmc::run(cfg).empty());
  dsmc::Simulation sim(cfg);
  CHECK(sim.currentStep() == 0);
  CHECK(sim.totalParticles() == 0);
}

TEST_CASE("single rank wall clock equals its processor time") {
  auto cfg = miniJet(1);
  cfg.nSteps = 10;
  const auto records = dsmc::run(cfg);
  REQUIRE(records.size() == 10);
  for (const auto& rec : records) {
    REQUIRE(rec.timings.perRank.size() == 1);
    CHECK(rec.timings.wallClock == rec.timings.perRank[0].processorTime);
  }
}

TEST_CASE("synthetic series is deterministic and worker-count independent") {
  auto cfg = miniJet(4);
  cfg.nSteps = 12;
  cfg.schedule.earlyInterval = 5;  // exercise a rebalance inside the window
  const auto a = dsmc::run(cfg);
  const auto b = dsmc::run(cfg);
  auto pooled = cfg;
  pooled.workers = 4;
  const auto c = dsmc::run(pooled);
  REQUIRE(a.size() == 12);
  REQUIRE(b.size() == 12);
  REQUIRE(c.size() == 12);
  bool sawRebalance = false;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(sameRecord(a[i], b[i]));
    CHECK(sameRecord(a[i], c[i]));
    sawRebalance = sawRebalance || a[i].rebalanced;
  }
  CHECK(sawRebalance);
}

TEST_CASE("empty world costs the fixed coefficient") {
  auto cfg = miniJet(4);
  cfg.gas.fnum = 1e30;  // expected creations per step fall to ~1e-11
  cfg.synthetic.aFixed = 0.25;
  cfg.nSteps = 3;
  const auto records = dsmc::run(cfg);
  for (const auto& rec : records) {
    CHECK(rec.totalParticles == 0);
    CHECK(rec.created == 0);
    CHECK(rec.exited == 0);
    CHECK(rec.migrated == 0);
    CHECK(rec.timings.wallClock == 0.25);
    for (const auto& t : rec.timings.perRank) CHECK(t.processorTime == 0.25);
  }
}

TEST_CASE("synthetic time is linear in the activity counts") {
  dsmc::SyntheticCostModel model;
  model.aMove = 1e-6;
  model.aPair = 1e-7;
  model.aCreate = 0;
  model.aFixed = 0;
  CHECK(dsmc::syntheticRankTime(model, 50000, 200000, 0) ==
        doctest::Approx(0.07).epsilon(1e-12));
  CHECK(dsmc::syntheticRankTime({0, 0, 0, 0}, 123, 456, 789) == 0.0);
  CHECK(dsmc::syntheticRankTime({0, 0, 0, 0.01}, 123, 456, 789) == 0.01);
}

TEST_CASE("one loaded rank dominates the synthetic timings") {
  auto cfg = miniJet(4);
  cfg.dt = 1e-30;  // freezes creation and collisions; motion cost remains
  cfg.synthetic = {1e-6, 0, 0, 0};
  dsmc::Simulation sim(cfg);
  std::mt19937_64 rng(7);
  sim.injectParticles(scatter(1000, sim.tree().subdomainOf(2), rng, 1e-9));
  const auto rec = sim.step();
  CHECK(rec.totalParticles == 1000);
  CHECK(rec.created == 0);
  CHECK(rec.migrated == 0);
  CHECK(rec.timings.perRank[2].processorTime == doctest::Approx(1e-3).epsilon(1e-12));
  for (const int r : {0, 1, 3}) CHECK(rec.timings.perRank[size_t(r)].processorTime == 0.0);
  CHECK(rec.timings.wallClock == rec.timings.perRank[2].processorTime);
}

TEST_CASE("bookkeeping identity and ownership soundness over a live run") {
  auto cfg = miniJet(4);
  cfg.nSteps = 30;
  cfg.schedule.earlyInterval = 10;  // fire a couple of rebalances mid-run
  dsmc::Simulation sim(cfg);
  long long prevTotal = 0;
  double sumMoved = 0, sumPairs = 0, sumCreated = 0, sumT = 0;
  for (int i = 0; i < cfg.nSteps; ++i) {
    const auto rec = sim.step();
    CHECK(rec.totalParticles == prevTotal + rec.created - rec.exited);
    long long fromRanks = 0;
    for (const auto& t : rec.timings.perRank) fromRanks += t.particleCount;
    CHECK(fromRanks == rec.totalParticles);
    // Timer-window soundness: every rank's T is the model over its own
    // counts, so the sum matches the model over global counts.
    double stepT = 0;
    for (const auto& t : rec.timings.perRank) stepT += t.processorTime;
    sumT += stepT;
    sumMoved += double(prevTotal);
    sumPairs += double(rec.candidatePairs);
    sumCreated += double(rec.created);
    prevTotal = rec.totalParticles;
  }
  const auto& m = cfg.synthetic;
  const double want =
      m.aMove * sumMoved + m.aPair * sumPairs + m.aCreate * sumCreated + m.aFixed * 4 * 30;
  CHECK(sumT == doctest::Approx(want).epsilon(1e-10));
  CHECK(prevTotal > 1000);  // the jet actually filled in

  for (const auto& state : sim.ranks()) {
    CHECK((state.box.lo == sim.tree().subdomainOf(state.rank).lo &&
           state.box.hi == sim.tree().subdomainOf(state.rank).hi));
    for (const auto& p : state.particles)
      REQUIRE(sim.tree().ownerOf(p.position) == state.rank);
  }
}

TEST_CASE("injection delivers to owners and preserves the multiset") {
  auto cfg = miniJet(8);
  dsmc::Simulation sim(cfg);
  std::mt19937_64 rng(31);
  auto sent = scatter(10000, cfg.domain, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& p : sent) p.velocity = Vector3d(u(rng), u(rng), u(rng)) * 300.0;
  sim.injectParticles(sent);
  CHECK(sim.totalParticles() == 10000);

  std::vector<Particled> held;
  for (const auto& state : sim.ranks()) {
    for (const auto& p : state.particles) {
      CHECK(sim.tree().ownerOf(p.position) == state.rank);
      held.push_back(p);
    }
  }
  auto key = [](const Particled& p) {
    return std::array<double, 6>{p.position[0], p.position[1], p.position[2],
                                 p.velocity[0],  p.velocity[1], p.velocity[2]};
  };
  auto less = [&](const Particled& a, const Particled& b) { return key(a) < key(b); };
  std::sort(sent.begin(), sent.end(), less);
  std::sort(held.begin(), held.end(), less);
  REQUIRE(held.size() == sent.size());
  bool identical = true;
  for (size_t i = 0; i < sent.size(); ++i)
    identical = identical && key(sent[i]) == key(held[i]);
  CHECK(identical);

  // A particle exactly on the root cut plane belongs to the upper side.
  const auto cut = sim.tree().cut(0);
  Particled onPlane;
  onPlane.position = Vector3d(0.1, 0.1, 0.1);
  onPlane.position[cut.axis] = cut.position;
  CHECK(sim.tree().ownerOf(onPlane.position) >= 4);
}

TEST_CASE("particle rebalance splits a clustered field evenly") {
  auto cfg = miniJet(8);
  cfg.strategy.kind = StrategyKind::Particle;
  cfg.mapCellsPerRank = 1000;
  dsmc::Simulation sim(cfg);
  std::mt19937_64 rng(41);
  sim.injectParticles(
      scatter(8000, Box3d(Vector3d(0, 0, 0), Vector3d(0.4, 0.4, 0.4)), rng));
  const long long moved = sim.rebalance();
  CHECK(moved > 0);
  CHECK(sim.rebalanceCount() == 1);
  CHECK(sim.totalParticles() == 8000);
  for (const auto& state : sim.ranks()) {
    const auto n = double(state.particles.size());
    CHECK(n == doctest::Approx(1000.0).epsilon(0.10));
    for (const auto& p : state.particles)
      REQUIRE(sim.tree().ownerOf(p.position) == state.rank);
  }
}

TEST_CASE("tacf flattens a frozen heterogeneous field") {
  auto cfg = miniJet(4);
  cfg.gas.fnum = 1.73e13;
  cfg.dt = 1e-3;
  cfg.inlet.radius = 1e-6;  // inlet still valid, creations vanish
  cfg.collisionCellsPerRank = 125;
  cfg.mapCellsPerRank = 1000;
  dsmc::Simulation sim(cfg);
  std::mt19937_64 rng(43);
  // Uniform backdrop plus a dense corner: pair candidates scale with the
  // local density squared, so per-particle cost is spatially heterogeneous.
  sim.injectParticles(scatter(16000, cfg.domain, rng));
  sim.injectParticles(
      scatter(16000, Box3d(Vector3d(0, 0, 0), Vector3d(0.4, 0.4, 0.4)), rng));

  dsmc::StrategyConfigd particle;
  particle.kind = StrategyKind::Particle;
  dsmc::StrategyConfigd tacf;
  tacf.kind = StrategyKind::Tacf;

  sim.rebalance(particle);
  for (const auto& state : sim.ranks())
    CHECK(double(state.particles.size()) == doctest::Approx(8000.0).epsilon(0.10));
  const double r0 = ratioOf(sim.step());

  sim.rebalance(tacf);
  const double r1 = ratioOf(sim.step());
  sim.rebalance(tacf);
  const double r2 = ratioOf(sim.step());

  CHECK(r0 > 1.3);  // particle balancing leaves the corner rank overloaded
  CHECK(r1 < r0);
  CHECK(r2 < 1.1);
  CHECK(sim.totalParticles() == 32000);  // frozen field: nothing moved or left
}

TEST_CASE("degenerate cost map falls back to uniform boundaries") {
  auto cfg = miniJet(8);
  dsmc::Simulation sim(cfg);  // no particles, all timings zero
  CHECK(sim.rebalance() == 0);
  CHECK(sim.degenerateMapFallbacks() == 1);
  const Box3d first = sim.tree().subdomainOf(0);
  CHECK(first.lo == Vector3d(0, 0, 0));
  CHECK(first.hi.isApprox(Vector3d(0.4, 0.4, 0.4), 1e-12));
}

TEST_CASE("timing window averages trailing steps") {
  auto cfgA = miniJet(4);
  cfgA.nSteps = 5;
  auto cfgB = cfgA;
  cfgA.strategy.timingWindow = 1;
  cfgB.strategy.timingWindow = 5;
  dsmc::Simulation simA(cfgA), simB(cfgB);
  std::vector<StepRecord> recsA, recsB;
  for (int i = 0; i < 5; ++i) {
    recsA.push_back(simA.step());
    recsB.push_back(simB.step());
  }
  for (int i = 0; i < 5; ++i) REQUIRE(sameRecord(recsA[size_t(i)], recsB[size_t(i)]));

  const auto snapA = simA.snapshots();
  const auto snapB = simB.snapshots();
  for (int r = 0; r < 4; ++r) {
    CHECK(snapA[size_t(r)].timing.processorTime ==
          recsA.back().timings.perRank[size_t(r)].processorTime);
    double mean = 0;
    for (const auto& rec : recsB) mean += rec.timings.perRank[size_t(r)].processorTime;
    mean /= 5;
    CHECK(snapB[size_t(r)].timing.processorTime == doctest::Approx(mean).epsilon(1e-12));
  }
  // Explicit window overload: average of the last two steps.
  const auto snap2 = simB.snapshots(2);
  for (int r = 0; r < 4; ++r) {
    const double mean2 = (recsB[3].timings.perRank[size_t(r)].processorTime +
                          recsB[4].timings.perRank[size_t(r)].processorTime) /
                         2;
    CHECK(snap2[size_t(r)].timing.processorTime == doctest::Approx(mean2).epsilon(1e-12));
  }
}

TEST_CASE("scheduled rebalances flag their steps") {
  auto cfg = miniJet(4);
  cfg.nSteps = 25;
  cfg.schedule.earlyInterval = 5;
  cfg.schedule.earlyUntil = 12;
  cfg.schedule.lateInterval = 7;
  cfg.schedule.stopAt = 20;
  const auto records = dsmc::run(cfg);
  for (const auto& rec : records) {
    const bool expected = rec.timings.step == 5 || rec.timings.step == 10 ||
                          rec.timings.step == 14;  // 14 = first late multiple of 7
    CHECK(rec.rebalanced == expected);
  }
}

TEST_CASE("wall timer mode reports real durations") {
  auto cfg = miniJet(2);
  cfg.timerMode = dsmc::TimerMode::Wall;
  cfg.nSteps = 3;
  const auto records = dsmc::run(cfg);
  for (const auto& rec : records) {
    double maxT = 0;
    for (const auto& t : rec.timings.perRank) {
      CHECK(t.processorTime >= 0.0);
      maxT = std::max(maxT, t.processorTime);
    }
    CHECK(rec.timings.wallClock >= maxT);
    CHECK(rec.timings.wallClock > 0.0);
  }
}
