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

#include <limits>

#include "dsmc/box.hpp"
#include "dsmc/gas.hpp"

namespace dsmc {

enum class MoveResult { Moved, Exited };

/// Free flight with fixed boundary semantics: the top face (+z) is a specular
/// wall, every other face is vacuum. Crossing a vacuum face removes the
/// particle; hitting the wall negates the normal velocity component and the
/// flight continues with the remaining time. Reflection preserves speed and
/// tangential velocity exactly.
template <typename Scalar>
MoveResult advect(Particle<Scalar>& p, Scalar dt, const Box3<Scalar>& domain) {
  Scalar remaining = dt;
  // A reflected particle moves away from the wall, so at most one bounce,
  // but a zero-length first hit (spawn on the wall) allows a second pass.
  for (int guard = 0; guard < 4; ++guard) {
    const Vector3<Scalar> target = p.position + remaining * p.velocity;

    Scalar tExit = std::numeric_limits<Scalar>::infinity();
    for (int k = 0; k < 3; ++k) {
      if (p.velocity[k] > Scalar(0) && k != 2 && target[k] > domain.hi[k])
        tExit = std::min(tExit, (domain.hi[k] - p.position[k]) / p.velocity[k]);
      if (p.velocity[k] < Scalar(0) && target[k] < domain.lo[k])
        tExit = std::min(tExit, (domain.lo[k] - p.position[k]) / p.velocity[k]);
    }
    Scalar tWall = std::numeric_limits<Scalar>::infinity();
    if (p.velocity[2] > Scalar(0) && target[2] > domain.hi[2])
      tWall = (domain.hi[2] - p.position[2]) / p.velocity[2];

    if (tExit == std::numeric_limits<Scalar>::infinity() &&
        tWall == std::numeric_limits<Scalar>::infinity()) {
      p.position = target;
      return MoveResult::Moved;
    }
    // Simultaneous wall hit and lateral exit: the particle leaves.
    if (tExit <= tWall) return MoveResult::Exited;

    p.position += tWall * p.velocity;
    p.position[2] = domain.hi[2];
    p.velocity[2] = -p.velocity[2];
    remaining -= tWall;
    if (remaining <= Scalar(0)) return MoveResult::Moved;
  }
  return MoveResult::Moved;
}

}  // namespace dsmc
