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

#include <array>
#include <charconv>
#include <ostream>
#include <span>
#include <string>

#include "dsmc/balance.hpp"
#include "dsmc/cost_map.hpp"

namespace dsmc {

/// Shortest decimal form that parses back to exactly the same double.
/// Locale-independent; non-finite values print as "nan"/"inf"/"-inf".
inline std::string formatDouble(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// One steps.csv data row.
struct StepRow {
  long long step = 0;
  double meanT = 0;
  double maxT = 0;
  double wallClock = 0;
  double imbalanceRatio = 0;  // nan when mean_T is zero
  long long totalParticles = 0;
  long long migratedParticles = 0;  // boundary crossings plus rebalance moves
  bool rebalanced = false;
};

inline constexpr const char* kStepsCsvHeader =
    "step,mean_T_s,max_T_s,wall_clock_s,imbalance_ratio,total_particles,migrated_particles,"
    "rebalanced";
inline constexpr const char* kRanksCsvHeader = "rank,T_s,N";
inline constexpr const char* kCostMapCsvHeader = "i,j,k,value";
inline constexpr const char* kSummaryCsvHeader =
    "steps_averaged,mean_T_s,wall_clock_s,imbalance_ratio";

void writeStepRow(std::ostream& out, const StepRow& row);
void writeStepsCsv(std::ostream& out, std::span<const StepRow> rows);

/// ranks_<step>.csv body, rows in rank-id order.
void writeRanksCsv(std::ostream& out, std::span<const RankTimingd> ranks);

/// costmap_<step>.csv body, rows in flat-index order (i fastest).
void writeCostMapCsv(std::ostream& out, const CostMapd& map);

}  // namespace dsmc
