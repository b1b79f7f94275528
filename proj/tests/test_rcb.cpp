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

#include <cmath>
#include <random>

#include "dsmc/rcb.hpp"

using dsmc::Box3d;
using dsmc::CostMapd;
using dsmc::CutTreed;
using dsmc::Vector3d;

namespace {

const Box3d kUnit(Vector3d(0, 0, 0), Vector3d(1, 1, 1));

// Sliver prefix-sum oracle for the cut position: accumulates region mass over
// thin slabs along the axis and brackets the target from both ends, like the
// closed-form inversion but purely numerical.
double sliverCut(const CostMapd& map, const Box3d& region, int axis, double frac,
                 int slivers = 200000) {
  const double lo = region.lo[axis];
  const double dx = (region.hi[axis] - region.lo[axis]) / slivers;
  std::vector<double> mass(slivers);
  for (int s = 0; s < slivers; ++s) {
    Box3d slab = region;
    slab.lo[axis] = lo + s * dx;
    slab.hi[axis] = lo + (s + 1) * dx;
    mass[s] = map.integrate(slab);
  }
  double total = 0.0;
  for (double m : mass) total += m;
  const double target = frac * total;
  double cum = 0.0;
  double pLo = region.hi[axis];
  for (int s = 0; s < slivers; ++s) {
    cum += mass[s];
    if (cum >= target) { pLo = lo + (s + 1) * dx; break; }
  }
  cum = 0.0;
  double pHi = region.lo[axis];
  for (int s = slivers - 1; s >= 0; --s) {
    cum += mass[s];
    if (cum >= total - target) { pHi = lo + s * dx; break; }
  }
  return 0.5 * (pLo + pHi);
}

CostMapd rowMap(const Box3d& bounds, const std::vector<double>& values) {
  CostMapd map(bounds, {int(values.size()), 1, 1});
  for (size_t i = 0; i < values.size(); ++i) map.at(int(i), 0, 0) = values[i];
  return map;
}

}  // namespace

TEST_CASE("half-cost cut inside a single cell interpolates linearly") {
  // Two cells with costs 3:1 on [0,2]; half the mass sits left of x = 2/3.
  const CostMapd map = rowMap(Box3d(Vector3d(0, 0, 0), Vector3d(2, 1, 1)), {3, 1});
  const double p = dsmc::findCut(map, map.bounds(), 0, 0.5);
  CHECK(p == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("cut lands inside the last cell when all mass is there") {
  const CostMapd map = rowMap(Box3d(Vector3d(0, 0, 0), Vector3d(3, 1, 1)), {0, 0, 4});
  CHECK(dsmc::findCut(map, map.bounds(), 0, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("cut through a zero-cost gap lands at the gap midpoint") {
  const CostMapd map = rowMap(Box3d(Vector3d(0, 0, 0), Vector3d(3, 1, 1)), {1, 0, 1});
  CHECK(dsmc::findCut(map, map.bounds(), 0, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("fractional targets other than one half") {
  const CostMapd map = rowMap(Box3d(Vector3d(0, 0, 0), Vector3d(4, 1, 1)), {1, 1, 1, 1});
  CHECK(dsmc::findCut(map, map.bounds(), 0, 0.25) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dsmc::findCut(map, map.bounds(), 0, 0.75) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("cuts respect sub-cell regions") {
  // Ramp 1,2,3,4 over [0,1] in four cells, region clipped to [0.1, 0.9]:
  // frozen from the sliver oracle, analytically 37/60.
  const CostMapd map = rowMap(kUnit, {1, 2, 3, 4});
  Box3d region = kUnit;
  region.lo[0] = 0.1;
  region.hi[0] = 0.9;
  CHECK(dsmc::findCut(map, region, 0, 0.5) == doctest::Approx(37.0 / 60.0).epsilon(1e-12));
}

TEST_CASE("transverse partial coverage weights layer densities") {
  // 2x2x1 map, region covering y in [0.25, 1]: frozen from the sliver oracle,
  // analytically 13/22.
  CostMapd map(kUnit, {2, 2, 1});
  map.at(0, 0, 0) = 1;
  map.at(1, 0, 0) = 1;
  map.at(0, 1, 0) = 3;
  map.at(1, 1, 0) = 5;
  Box3d region = kUnit;
  region.lo[1] = 0.25;
  CHECK(dsmc::findCut(map, region, 0, 0.5) == doctest::Approx(13.0 / 22.0).epsilon(1e-12));
}

TEST_CASE("cut positions match the sliver oracle on random maps") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uval(0.0, 3.0);
  std::uniform_real_distribution<double> ufrac(0.1, 0.9);
  for (int trial = 0; trial < 10; ++trial) {
    CostMapd map(kUnit, {6, 5, 4});
    for (Eigen::Index i = 0; i < map.size(); ++i) map.values()[i] = uval(rng);
    const int axis = trial % 3;
    const double frac = ufrac(rng);
    const double p = dsmc::findCut(map, kUnit, axis, frac);
    CHECK(p == doctest::Approx(sliverCut(map, kUnit, axis, frac)).epsilon(1e-4));
  }
}

TEST_CASE("cut position is monotone in the target fraction") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uval(0.0, 1.0);
  CostMapd map(kUnit, {8, 3, 3});
  for (Eigen::Index i = 0; i < map.size(); ++i) map.values()[i] = uval(rng);
  double prev = 0.0;
  for (double frac = 0.05; frac < 1.0; frac += 0.05) {
    const double p = dsmc::findCut(map, kUnit, 0, frac);
    CHECK(p >= prev);
    CHECK(p > kUnit.lo[0]);
    CHECK(p < kUnit.hi[0]);
    prev = p;
  }
}

TEST_CASE("cut mass split matches the requested fraction") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uval(0.0, 2.0);
  CostMapd map(Box3d(Vector3d(-1, 0, 2), Vector3d(3, 2, 5)), {7, 5, 6});
  for (Eigen::Index i = 0; i < map.size(); ++i) map.values()[i] = uval(rng);
  for (const double frac : {0.2, 0.5, 0.8}) {
    for (int axis = 0; axis < 3; ++axis) {
      const double p = dsmc::findCut(map, map.bounds(), axis, frac);
      Box3d left = map.bounds();
      left.hi[axis] = p;
      CHECK(map.integrate(left) ==
            doctest::Approx(frac * map.total()).epsilon(1e-9));
    }
  }
}

TEST_CASE("degenerate regions and bad arguments are rejected") {
  const CostMapd zero(kUnit, {4, 4, 4});
  CHECK_THROWS_AS(dsmc::findCut(zero, kUnit, 0, 0.5), dsmc::DegenerateRegionError);
  const CostMapd map = rowMap(kUnit, {1, 1});
  CHECK_THROWS_AS(dsmc::findCut(map, kUnit, 3, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(dsmc::findCut(map, kUnit, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dsmc::findCut(map, kUnit, 0, 1.0), std::invalid_argument);
  // Region with mass only outside it.
  Box3d gap = kUnit;
  gap.lo[0] = 0.25;
  gap.hi[0] = 0.45;
  const CostMapd ends = rowMap(kUnit, {1, 0, 0, 1});
  CHECK_THROWS_AS(dsmc::findCut(ends, gap, 0, 0.5), dsmc::DegenerateRegionError);
}

TEST_CASE("bisection of a uniform cube yields the octants") {
  CostMapd map(kUnit, {8, 8, 8});
  map.fill(1.0);
  const CutTreed tree = dsmc::rcbPartition(map, 8);
  // Cut order is x, then y, then z, so rank bits follow (x, y, z) sides.
  const Box3d s5 = tree.subdomainOf(5);
  CHECK(s5.lo.isApprox(Vector3d(0.5, 0.0, 0.5)));
  CHECK(s5.hi.isApprox(Vector3d(1.0, 0.5, 1.0)));
  for (int r = 0; r < 8; ++r)
    CHECK(tree.subdomainOf(r).volume() == doctest::Approx(1.0 / 8).epsilon(1e-12));
}

TEST_CASE("partition splits cost equally on random maps") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> uval(0.05, 4.0);
  for (const int ranks : {2, 4, 8, 16}) {
    CostMapd map(Box3d(Vector3d(0, 0, 0), Vector3d(0.7, 1.1, 0.4)), {12, 16, 9});
    for (Eigen::Index i = 0; i < map.size(); ++i) map.values()[i] = uval(rng);
    const CutTreed tree = dsmc::rcbPartition(map, ranks);
    const double share = map.total() / ranks;
    double vol = 0.0;
    for (int r = 0; r < ranks; ++r) {
      const Box3d sub = tree.subdomainOf(r);
      CHECK(map.integrate(sub) == doctest::Approx(share).epsilon(1e-9));
      vol += sub.volume();
      for (int q = 0; q < r; ++q)
        CHECK(dsmc::overlapVolume(sub, tree.subdomainOf(q)) == doctest::Approx(0.0));
    }
    CHECK(vol == doctest::Approx(map.bounds().volume()).epsilon(1e-12));
  }
}

TEST_CASE("zero-cost subtrees fall back to midpoint cuts") {
  CostMapd map(kUnit, {4, 4, 4});
  const CutTreed tree = dsmc::rcbPartition(map, 4);
  // Empty map: every cut is geometric, so leaves are equal slabs.
  for (int r = 0; r < 4; ++r)
    CHECK(tree.subdomainOf(r).volume() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("partition requires a power-of-two rank count") {
  CostMapd map(kUnit, {4, 4, 4});
  map.fill(1.0);
  CHECK_THROWS_AS(dsmc::rcbPartition(map, 3), std::invalid_argument);
  CHECK_THROWS_AS(dsmc::rcbPartition(map, 0), std::invalid_argument);
  CHECK_THROWS_AS(dsmc::rcbPartition(map, -2), std::invalid_argument);
  CHECK_NOTHROW(dsmc::rcbPartition(map, 1));
}

TEST_CASE("partitioning is deterministic") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> uval(0.0, 1.0);
  CostMapd map(kUnit, {10, 10, 10});
  for (Eigen::Index i = 0; i < map.size(); ++i) map.values()[i] = uval(rng);
  const CutTreed a = dsmc::rcbPartition(map, 16);
  const CutTreed b = dsmc::rcbPartition(map, 16);
  for (int n = 0; n < 15; ++n) {
    CHECK(a.cut(n).axis == b.cut(n).axis);
    CHECK(a.cut(n).position == b.cut(n).position);
  }
}
