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

#include <cmath>
#include <vector>

#include "dsmc/cost_map.hpp"
#include "dsmc/cut_tree.hpp"

namespace dsmc {

/// Cut position p along `axis` such that the cost of region ∩ {coord < p}
/// equals targetFraction times the cost of the whole region.
///
/// Cost is the piecewise-constant cell density of `map`, so the cumulative
/// cost along the axis is piecewise linear and the cut is solved in closed
/// form (cells partially covered by the region on transverse axes contribute
/// in proportion to the covered slab fraction). When the target mass falls in
/// a zero-density gap, the gap midpoint is returned.
///
/// Throws DegenerateRegionError when the region's integrated cost is zero.
template <typename Scalar>
Scalar findCut(const CostMap<Scalar>& map, const Box3<Scalar>& region, int axis,
               Scalar targetFraction) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("findCut: bad axis");
  if (!(targetFraction > Scalar(0) && targetFraction < Scalar(1)))
    throw std::invalid_argument("findCut: targetFraction must be in (0,1)");
  if (!region.valid()) throw std::invalid_argument("findCut: invalid region");

  const int a = axis;
  const int b = (axis + 1) % 3;
  const int c = (axis + 2) % 3;

  const auto [ilo, ihi] = map.cellRange(region);
  const Vector3<Scalar> w = map.cellWidths();
  const Scalar cellVol = map.cellVolume();
  const Scalar mapLo = map.bounds().lo[a];

  // Transverse overlap lengths of the region with each cell row/column.
  const int nb = ihi[b] - ilo[b] + 1;
  const int nc = ihi[c] - ilo[c] + 1;
  std::vector<Scalar> ovB(nb), ovC(nc);
  for (int j = 0; j < nb; ++j) {
    const Scalar cellLo = map.bounds().lo[b] + (ilo[b] + j) * w[b];
    ovB[j] = overlapLength(cellLo, cellLo + w[b], region.lo[b], region.hi[b]);
  }
  for (int k = 0; k < nc; ++k) {
    const Scalar cellLo = map.bounds().lo[c] + (ilo[c] + k) * w[c];
    ovC[k] = overlapLength(cellLo, cellLo + w[c], region.lo[c], region.hi[c]);
  }

  // Linear cost density per unit length for each cell layer along the axis,
  // and the layer's covered segment.
  const int na = ihi[a] - ilo[a] + 1;
  std::vector<Scalar> lambda(na, Scalar(0)), segLo(na), segHi(na);
  Eigen::Vector3i idx;
  for (int i = 0; i < na; ++i) {
    const Scalar layerLo = mapLo + (ilo[a] + i) * w[a];
    segLo[i] = std::max(layerLo, region.lo[a]);
    segHi[i] = std::min(layerLo + w[a], region.hi[a]);
    idx[a] = ilo[a] + i;
    Scalar acc = Scalar(0);
    for (int k = 0; k < nc; ++k) {
      if (ovC[k] <= Scalar(0)) continue;
      idx[c] = ilo[c] + k;
      for (int j = 0; j < nb; ++j) {
        if (ovB[j] <= Scalar(0)) continue;
        idx[b] = ilo[b] + j;
        acc += map.at(idx[0], idx[1], idx[2]) * ovB[j] * ovC[k];
      }
    }
    lambda[i] = acc / cellVol;
  }

  Scalar total = Scalar(0);
  for (int i = 0; i < na; ++i) total += lambda[i] * std::max(Scalar(0), segHi[i] - segLo[i]);
  if (!(total > Scalar(0))) throw DegenerateRegionError("findCut: zero cost in region");

  // Invert the piecewise-linear cumulative cost from both ends; the average
  // lands at the midpoint of any zero-density gap containing the target.
  const Scalar target = targetFraction * total;
  Scalar pLo = region.hi[a];
  Scalar cum = Scalar(0);
  for (int i = 0; i < na; ++i) {
    const Scalar len = std::max(Scalar(0), segHi[i] - segLo[i]);
    const Scalar mass = lambda[i] * len;
    if (cum + mass >= target) {
      pLo = lambda[i] > Scalar(0) ? std::min(segLo[i] + (target - cum) / lambda[i], segHi[i])
                                  : segLo[i];
      break;
    }
    cum += mass;
  }

  const Scalar suffixTarget = total - target;
  Scalar pHi = region.lo[a];
  cum = Scalar(0);
  for (int i = na - 1; i >= 0; --i) {
    const Scalar len = std::max(Scalar(0), segHi[i] - segLo[i]);
    const Scalar mass = lambda[i] * len;
    if (cum + mass >= suffixTarget) {
      pHi = lambda[i] > Scalar(0) ? std::max(segHi[i] - (suffixTarget - cum) / lambda[i], segLo[i])
                                  : segHi[i];
      break;
    }
    cum += mass;
  }

  Scalar p = Scalar(0.5) * (pLo + pHi);
  // Cuts must fall strictly inside the region.
  p = std::max(p, std::nextafter(region.lo[a], region.hi[a]));
  p = std::min(p, std::nextafter(region.hi[a], region.lo[a]));
  return p;
}

/// Recursive coordinate bisection of `map` into 2^n equal-cost leaf boxes.
///
/// Each node cuts the longest axis of its box (ties x before y before z) at
/// the half-cost position; subregions with zero integrated cost are cut at
/// their geometric midpoint. numRanks must be a power of two.
template <typename Scalar>
CutTree<Scalar> rcbPartition(const CostMap<Scalar>& map, int numRanks) {
  if (!isPowerOfTwo(numRanks))
    throw std::invalid_argument("rcbPartition: rank count must be a power of two");
  const int depth = log2Exact(numRanks);
  std::vector<typename CutTree<Scalar>::Cut> cuts(numRanks - 1);

  const auto recurse = [&](auto&& self, int node, const Box3<Scalar>& box, int level) -> void {
    if (level == depth) return;
    const int axis = box.longestAxis();
    Scalar p;
    try {
      p = findCut(map, box, axis, Scalar(0.5));
    } catch (const DegenerateRegionError&) {
      p = Scalar(0.5) * (box.lo[axis] + box.hi[axis]);
    }
    cuts[node] = {axis, p};
    Box3<Scalar> left = box;
    Box3<Scalar> right = box;
    left.hi[axis] = p;
    right.lo[axis] = p;
    self(self, 2 * node + 1, left, level + 1);
    self(self, 2 * node + 2, right, level + 1);
  };
  recurse(recurse, 0, map.bounds(), 0);

  return CutTree<Scalar>(map.bounds(), depth, std::move(cuts));
}

}  // namespace dsmc
