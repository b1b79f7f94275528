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

#include "dsmc/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

namespace dsmc {

namespace fs = std::filesystem;

namespace {

std::ofstream openOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("runExperiment: cannot write '" + path.string() + "'");
  return out;
}

void closeOutput(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("runExperiment: write failure on '" + path.string() + "'");
}

}  // namespace

StepRow toStepRow(const StepRecord& record) {
  StepRow row;
  row.step = record.timings.step;
  try {
    const ImbalanceMetrics<double> m = imbalanceMetrics(record.timings.perRank);
    row.meanT = m.meanT;
    row.maxT = m.maxT;
    row.imbalanceRatio = m.imbalanceRatio;
  } catch (const UndefinedRatioError&) {
    // All ranks idle; T values are zero and the ratio has no meaning.
    row.imbalanceRatio = std::numeric_limits<double>::quiet_NaN();
  }
  row.wallClock = record.timings.wallClock;
  row.totalParticles = record.totalParticles;
  row.migratedParticles = record.migrated + record.rebalanceMigrated;
  row.rebalanced = record.rebalanced;
  return row;
}

ExperimentSummary summarizeSteps(std::span<const StepRow> rows, long long window) {
  if (rows.empty()) throw std::invalid_argument("summarizeSteps: empty series");
  if (window < 1) throw std::invalid_argument("summarizeSteps: window must be >= 1");
  const size_t n = std::min<size_t>(static_cast<size_t>(window), rows.size());
  const std::span<const StepRow> tail = rows.subspan(rows.size() - n);
  ExperimentSummary summary;
  summary.stepsAveraged = static_cast<long long>(n);
  for (const StepRow& row : tail) {
    summary.meanT += row.meanT;
    summary.wallClock += row.wallClock;
    summary.imbalanceRatio += row.imbalanceRatio;
  }
  summary.meanT /= double(n);
  summary.wallClock /= double(n);
  summary.imbalanceRatio /= double(n);
  return summary;
}

ExperimentResult runExperiment(const ExperimentConfig& config) {
  config.validate();
  const fs::path outDir(config.output.dir);
  fs::create_directories(outDir);

  Simulation sim(config.sim);
  const fs::path stepsPath = outDir / "steps.csv";
  std::ofstream steps = openOutput(stepsPath);
  steps << kStepsCsvHeader << '\n';

  ExperimentResult result;
  result.steps.reserve(static_cast<size_t>(config.sim.nSteps));
  for (long long i = 0; i < config.sim.nSteps; ++i) {
    const StepRecord record = sim.step();
    const StepRow row = toStepRow(record);
    writeStepRow(steps, row);
    result.steps.push_back(row);

    if (config.output.rankDumpInterval > 0 && row.step % config.output.rankDumpInterval == 0) {
      const fs::path path = outDir / ("ranks_" + std::to_string(row.step) + ".csv");
      std::ofstream f = openOutput(path);
      writeRanksCsv(f, record.timings.perRank);
      closeOutput(f, path);
    }
    if (config.output.dumpCostmaps && record.rebalanced) {
      const fs::path path = outDir / ("costmap_" + std::to_string(row.step) + ".csv");
      std::ofstream f = openOutput(path);
      writeCostMapCsv(f, sim.lastCostMap());
      closeOutput(f, path);
    }
  }
  closeOutput(steps, stepsPath);

  const fs::path summaryPath = outDir / "summary.csv";
  std::ofstream summaryFile = openOutput(summaryPath);
  summaryFile << kSummaryCsvHeader << '\n';
  if (!result.steps.empty()) {
    const ExperimentSummary s = summarizeSteps(result.steps, config.output.summaryWindow);
    summaryFile << s.stepsAveraged << ',' << formatDouble(s.meanT) << ','
                << formatDouble(s.wallClock) << ',' << formatDouble(s.imbalanceRatio) << '\n';
    result.summary = s;
  }
  closeOutput(summaryFile, summaryPath);
  return result;
}

}  // namespace dsmc
