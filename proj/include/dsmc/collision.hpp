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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dsmc/cost_map.hpp"
#include "dsmc/gas.hpp"

namespace dsmc {

struct CollideStats {
  std::int64_t candidates = 0;
  std::int64_t collisions = 0;
};

/// NTC pair selection and VHS scattering for one cell. The candidate count is
/// floor(N(N-1)/2 * fnum * sigmaCrMax * dt / V + U) with U uniform(0,1);
/// each candidate accepts with probability sigma(cr)*cr / sigmaCrMax, and
/// sigmaCrMax rises to any observed exceedance. Momentum and energy of the
/// cell's particles are conserved to roundoff.
template <typename Scalar, typename Rng>
CollideStats collideCell(std::span<const int> cell, std::vector<Particle<Scalar>>& particles,
                         const GasModel<Scalar>& gas, Scalar dt, Scalar cellVolume,
                         Scalar& sigmaCrMax, Rng& rng) {
  CollideStats stats;
  const std::int64_t n = std::int64_t(cell.size());
  if (n < 2) return stats;

  std::uniform_real_distribution<Scalar> uniform(Scalar(0), Scalar(1));
  const Scalar expected = Scalar(0.5) * Scalar(n) * Scalar(n - 1) * gas.fnum * sigmaCrMax * dt /
                          cellVolume;
  stats.candidates = std::int64_t(expected + uniform(rng));

  std::uniform_int_distribution<std::int64_t> pickFirst(0, n - 1);
  std::uniform_int_distribution<std::int64_t> pickSecond(0, n - 2);
  for (std::int64_t c = 0; c < stats.candidates; ++c) {
    const std::int64_t a = pickFirst(rng);
    std::int64_t b = pickSecond(rng);
    if (b >= a) ++b;
    Particle<Scalar>& p1 = particles[cell[size_t(a)]];
    Particle<Scalar>& p2 = particles[cell[size_t(b)]];
    const Scalar cr = (p1.velocity - p2.velocity).norm();
    if (cr == Scalar(0)) continue;
    const Scalar sigmaCr = vhsCrossSection(cr, gas) * cr;
    const Scalar threshold = uniform(rng) * sigmaCrMax;
    if (sigmaCr > sigmaCrMax) sigmaCrMax = sigmaCr;
    if (sigmaCr > threshold) {
      elasticCollision(p1.velocity, p2.velocity, rng);
      ++stats.collisions;
    }
  }
  return stats;
}

/// Uniform collision grid over one rank's subdomain; cell counts follow the
/// box edge lengths. Particle-to-cell binning is CSR and rebuilt every step;
/// per-cell sigmaCrMax persists between steps.
template <typename Scalar>
class CollisionGrid {
 public:
  CollisionGrid() = default;

  CollisionGrid(const Box3<Scalar>& box, int targetCells, Scalar sigmaCrMaxInit)
      : box_(box), cells_(mapResolution(box.sizes(), targetCells)) {
    if (!(sigmaCrMaxInit > Scalar(0)))
      throw std::invalid_argument("CollisionGrid: sigmaCrMax seed must be positive");
    const Eigen::Index count = Eigen::Index(cells_[0]) * cells_[1] * cells_[2];
    sigmaCrMax_.assign(size_t(count), sigmaCrMaxInit);
    offsets_.assign(size_t(count) + 1, 0);
  }

  const Box3<Scalar>& box() const { return box_; }
  const Eigen::Vector3i& cells() const { return cells_; }
  int cellCount() const { return int(sigmaCrMax_.size()); }
  Scalar cellVolume() const { return box_.volume() / Scalar(cellCount()); }

  Scalar& sigmaCrMax(int cell) { return sigmaCrMax_[size_t(cell)]; }
  Scalar sigmaCrMax(int cell) const { return sigmaCrMax_[size_t(cell)]; }

  /// Flat cell index of a position inside box (upper faces clamp inward).
  int cellIndexOf(const Vector3<Scalar>& p) const {
    if (!box_.contains(p)) throw OutOfDomainError("CollisionGrid: position outside box");
    const Vector3<Scalar> w = box_.sizes().cwiseQuotient(cells_.template cast<Scalar>());
    int flat = 0;
    for (int k = 2; k >= 0; --k) {
      const int i = std::min(int((p[k] - box_.lo[k]) / w[k]), cells_[k] - 1);
      flat = flat * cells_[k] + std::max(i, 0);
    }
    return flat;
  }

  void rebin(const std::vector<Particle<Scalar>>& particles) {
    std::fill(offsets_.begin(), offsets_.end(), 0);
    binOf_.resize(particles.size());
    for (size_t i = 0; i < particles.size(); ++i) {
      binOf_[i] = cellIndexOf(particles[i].position);
      ++offsets_[size_t(binOf_[i]) + 1];
    }
    for (size_t c = 1; c < offsets_.size(); ++c) offsets_[c] += offsets_[c - 1];
    indices_.resize(particles.size());
    std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
    for (size_t i = 0; i < particles.size(); ++i) indices_[size_t(cursor[size_t(binOf_[i])]++)] = int(i);
  }

  std::span<const int> cellParticles(int cell) const {
    return {indices_.data() + offsets_[size_t(cell)],
            size_t(offsets_[size_t(cell) + 1] - offsets_[size_t(cell)])};
  }

 private:
  Box3<Scalar> box_;
  Eigen::Vector3i cells_ = Eigen::Vector3i::Zero();
  std::vector<Scalar> sigmaCrMax_;
  std::vector<int> offsets_;
  std::vector<int> indices_;
  std::vector<int> binOf_;
};

using CollisionGridd = CollisionGrid<double>;

}  // namespace dsmc
