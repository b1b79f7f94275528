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
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "dsmc/box.hpp"
#include "dsmc/core.hpp"

namespace dsmc {

/// Uniform 3D grid of non-negative cost deposits over a bounding box.
///
/// Cell (i,j,k) covers the half-open box [lo + i*w, lo + (i+1)*w) per axis;
/// positions on the global upper faces are clamped into the last cell.
template <typename Scalar>
class CostMap {
 public:
  using Values = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  CostMap() = default;

  CostMap(const Box3<Scalar>& bounds, const Eigen::Vector3i& cells)
      : bounds_(bounds), cells_(cells) {
    if (!bounds.valid()) throw std::invalid_argument("CostMap: invalid bounds");
    if ((cells.array() < 1).any()) throw std::invalid_argument("CostMap: cell counts must be >= 1");
    values_ = Values::Zero(Eigen::Index(cells[0]) * cells[1] * cells[2]);
  }

  const Box3<Scalar>& bounds() const { return bounds_; }
  const Eigen::Vector3i& cells() const { return cells_; }
  Eigen::Index size() const { return values_.size(); }

  const Values& values() const { return values_; }
  Values& values() { return values_; }

  Eigen::Index flatIndex(int i, int j, int k) const {
    return Eigen::Index(i) + Eigen::Index(cells_[0]) * (Eigen::Index(j) + Eigen::Index(cells_[1]) * k);
  }

  Scalar& at(int i, int j, int k) { return values_[flatIndex(i, j, k)]; }
  Scalar at(int i, int j, int k) const { return values_[flatIndex(i, j, k)]; }

  Vector3<Scalar> cellWidths() const {
    return bounds_.sizes().cwiseQuotient(cells_.template cast<Scalar>());
  }

  Scalar cellVolume() const { return cellWidths().prod(); }

  Box3<Scalar> cellBox(int i, int j, int k) const {
    const Vector3<Scalar> w = cellWidths();
    const Vector3<Scalar> lo = bounds_.lo + Vector3<Scalar>(i * w[0], j * w[1], k * w[2]);
    return Box3<Scalar>(lo, lo + w);
  }

  /// Grid cell holding a position inside bounds; upper faces clamp inward.
  Eigen::Vector3i cellOf(const Vector3<Scalar>& p) const {
    if (!bounds_.contains(p)) throw OutOfDomainError("CostMap: position outside bounds");
    const Vector3<Scalar> w = cellWidths();
    Eigen::Vector3i idx;
    for (int k = 0; k < 3; ++k) {
      int i = int(std::floor((p[k] - bounds_.lo[k]) / w[k]));
      idx[k] = std::clamp(i, 0, cells_[k] - 1);
    }
    return idx;
  }

  void deposit(const Vector3<Scalar>& p, Scalar weight) {
    if (weight < Scalar(0)) throw std::invalid_argument("CostMap: negative deposit weight");
    const Eigen::Vector3i c = cellOf(p);
    values_[flatIndex(c[0], c[1], c[2])] += weight;
  }

  /// Spreads `total` over the cells overlapping `box`, in proportion to
  /// overlap volume. Σ deposits = total exactly up to roundoff.
  void depositUniform(const Box3<Scalar>& box, Scalar total) {
    if (total < Scalar(0)) throw std::invalid_argument("CostMap: negative deposit weight");
    if (total == Scalar(0)) return;
    const auto [ilo, ihi] = cellRange(box);
    Scalar overlapSum = Scalar(0);
    for (int k = ilo[2]; k <= ihi[2]; ++k)
      for (int j = ilo[1]; j <= ihi[1]; ++j)
        for (int i = ilo[0]; i <= ihi[0]; ++i)
          overlapSum += overlapVolume(cellBox(i, j, k), box);
    if (overlapSum <= Scalar(0))
      throw OutOfDomainError("CostMap: uniform deposit box does not overlap bounds");
    for (int k = ilo[2]; k <= ihi[2]; ++k)
      for (int j = ilo[1]; j <= ihi[1]; ++j)
        for (int i = ilo[0]; i <= ihi[0]; ++i) {
          const Scalar ov = overlapVolume(cellBox(i, j, k), box);
          if (ov > Scalar(0)) values_[flatIndex(i, j, k)] += total * (ov / overlapSum);
        }
  }

  Scalar total() const { return values_.sum(); }

  /// Integral of the piecewise-constant cell density over `region`.
  Scalar integrate(const Box3<Scalar>& region) const {
    const Scalar cellVol = cellVolume();
    const auto [ilo, ihi] = cellRange(region);
    Scalar sum = Scalar(0);
    for (int k = ilo[2]; k <= ihi[2]; ++k)
      for (int j = ilo[1]; j <= ihi[1]; ++j)
        for (int i = ilo[0]; i <= ihi[0]; ++i) {
          const Scalar ov = overlapVolume(cellBox(i, j, k), region);
          if (ov > Scalar(0)) sum += values_[flatIndex(i, j, k)] * (ov / cellVol);
        }
    return sum;
  }

  /// Element-wise accumulate; other must share geometry.
  void merge(const CostMap& other) {
    if (other.cells_ != cells_ || other.values_.size() != values_.size())
      throw std::invalid_argument("CostMap: merge shape mismatch");
    values_ += other.values_;
  }

  void fill(Scalar v) { values_.setConstant(v); }

  /// Inclusive index range of cells that may overlap `box`, clamped to the grid.
  std::pair<Eigen::Vector3i, Eigen::Vector3i> cellRange(const Box3<Scalar>& box) const {
    const Vector3<Scalar> w = cellWidths();
    Eigen::Vector3i lo, hi;
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::clamp(int(std::floor((box.lo[k] - bounds_.lo[k]) / w[k])), 0, cells_[k] - 1);
      hi[k] = std::clamp(int(std::floor((box.hi[k] - bounds_.lo[k]) / w[k])), 0, cells_[k] - 1);
    }
    return {lo, hi};
  }

 private:
  Box3<Scalar> bounds_;
  Eigen::Vector3i cells_ = Eigen::Vector3i::Zero();
  Values values_;
};

using CostMapd = CostMap<double>;

/// Per-axis cell counts for a target total count over a box with the given
/// extents. Counts follow the axis lengths (cells as near cubic as possible);
/// among the floor/ceil roundings of the ideal real-valued counts, picks the
/// smallest product that still reaches `minCells`, preferring the most cubic
/// cells on ties.
template <typename Scalar>
Eigen::Vector3i mapResolution(const Vector3<Scalar>& extents, std::int64_t minCells) {
  if (minCells < 1) throw std::invalid_argument("mapResolution: minCells must be >= 1");
  if ((extents.array() <= Scalar(0)).any())
    throw std::invalid_argument("mapResolution: extents must be positive");

  const double vol = double(extents[0]) * double(extents[1]) * double(extents[2]);
  const double t = std::cbrt(double(minCells) / vol);

  Eigen::Vector3i lo, hi;
  for (int k = 0; k < 3; ++k) {
    const double ideal = double(extents[k]) * t;
    lo[k] = std::max(1, int(std::floor(ideal)));
    hi[k] = std::max(1, int(std::ceil(ideal)));
  }

  Eigen::Vector3i best = hi;  // all-ceil always reaches the floor
  std::int64_t bestProduct = std::numeric_limits<std::int64_t>::max();
  double bestAspect = std::numeric_limits<double>::max();
  for (int m = 0; m < 8; ++m) {
    Eigen::Vector3i c;
    for (int k = 0; k < 3; ++k) c[k] = (m >> k & 1) ? hi[k] : lo[k];
    const std::int64_t product = std::int64_t(c[0]) * c[1] * c[2];
    if (product < minCells) continue;
    Vector3<double> widths;
    for (int k = 0; k < 3; ++k) widths[k] = double(extents[k]) / c[k];
    const double aspect = widths.maxCoeff() / widths.minCoeff();
    if (product < bestProduct || (product == bestProduct && aspect < bestAspect)) {
      best = c;
      bestProduct = product;
      bestAspect = aspect;
    }
  }
  return best;
}

/// Zeroed cost map sized for `numRanks` ranks at `cellsPerRank` cells each.
template <typename Scalar>
CostMap<Scalar> makeCostMap(const Box3<Scalar>& bounds, int numRanks, int cellsPerRank) {
  if (numRanks < 1 || cellsPerRank < 1)
    throw std::invalid_argument("makeCostMap: numRanks and cellsPerRank must be >= 1");
  const Eigen::Vector3i cells =
      mapResolution(bounds.sizes(), std::int64_t(numRanks) * cellsPerRank);
  return CostMap<Scalar>(bounds, cells);
}

}  // namespace dsmc
