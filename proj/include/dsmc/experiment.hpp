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
#include <span>
#include <vector>

#include "dsmc/config.hpp"
#include "dsmc/csv.hpp"

namespace dsmc {

/// Steady-state means over the final summaryWindow steps of a run.
struct ExperimentSummary {
  long long stepsAveraged = 0;
  double meanT = 0;
  double wallClock = 0;
  double imbalanceRatio = 0;
};

struct ExperimentResult {
  std::vector<StepRow> steps;
  std::optional<ExperimentSummary> summary;  // absent for zero-step runs
};

/// CSV view of one step record; an all-idle step gets imbalance_ratio nan.
StepRow toStepRow(const StepRecord& record);

/// Means over the final min(window, rows.size()) rows; empty rows is an error.
ExperimentSummary summarizeSteps(std::span<const StepRow> rows, long long window);

/// Runs the configured simulation and writes steps.csv, summary.csv, and any
/// requested ranks_<step>.csv / costmap_<step>.csv files under output.dir.
ExperimentResult runExperiment(const ExperimentConfig& config);

}  // namespace dsmc
