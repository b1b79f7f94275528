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

#include "dsmc/csv.hpp"

namespace dsmc {

void writeStepRow(std::ostream& out, const StepRow& row) {
  out << row.step << ',' << formatDouble(row.meanT) << ',' << formatDouble(row.maxT) << ','
      << formatDouble(row.wallClock) << ',' << formatDouble(row.imbalanceRatio) << ','
      << row.totalParticles << ',' << row.migratedParticles << ',' << (row.rebalanced ? 1 : 0)
      << '\n';
}

void writeStepsCsv(std::ostream& out, std::span<const StepRow> rows) {
  out << kStepsCsvHeader << '\n';
  for (const StepRow& row : rows) writeStepRow(out, row);
}

void writeRanksCsv(std::ostream& out, std::span<const RankTimingd> ranks) {
  out << kRanksCsvHeader << '\n';
  for (const RankTimingd& r : ranks)
    out << r.rank << ',' << formatDouble(r.processorTime) << ',' << r.particleCount << '\n';
}

void writeCostMapCsv(std::ostream& out, const CostMapd& map) {
  out << kCostMapCsvHeader << '\n';
  const Eigen::Vector3i cells = map.cells();
  for (int k = 0; k < cells[2]; ++k)
    for (int j = 0; j < cells[1]; ++j)
      for (int i = 0; i < cells[0]; ++i)
        out << i << ',' << j << ',' << k << ',' << formatDouble(map.at(i, j, k)) << '\n';
}

}  // namespace dsmc
