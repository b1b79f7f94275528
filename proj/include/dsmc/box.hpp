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

#include <algorithm>

#include "dsmc/core.hpp"

namespace dsmc {

/// Axis-aligned box, lo[k] < hi[k] on every axis for a valid box.
template <typename Scalar>
struct Box3 {
  Vector3<Scalar> lo = Vector3<Scalar>::Zero();
  Vector3<Scalar> hi = Vector3<Scalar>::Zero();

  Box3() = default;
  Box3(const Vector3<Scalar>& lo_, const Vector3<Scalar>& hi_) : lo(lo_), hi(hi_) {}

  Vector3<Scalar> sizes() const { return hi - lo; }
  Vector3<Scalar> center() const { return Scalar(0.5) * (lo + hi); }
  Scalar volume() const { return sizes().prod(); }

  bool valid() const { return (lo.array() < hi.array()).all(); }

  /// Closed membership: boundary faces count as inside.
  bool contains(const Vector3<Scalar>& p) const {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  }

  /// Longest axis; ties break x before y before z.
  int longestAxis() const {
    const Vector3<Scalar> s = sizes();
    int best = 0;
    if (s[1] > s[best]) best = 1;
    if (s[2] > s[best]) best = 2;
    return best;
  }

  Box3 intersection(const Box3& other) const {
    return Box3(lo.cwiseMax(other.lo), hi.cwiseMin(other.hi));
  }
};

using Box3d = Box3<double>;
using Box3f = Box3<float>;

/// Length of the overlap of [alo, ahi] and [blo, bhi]; zero when disjoint.
template <typename Scalar>
Scalar overlapLength(Scalar alo, Scalar ahi, Scalar blo, Scalar bhi) {
  return std::max(Scalar(0), std::min(ahi, bhi) - std::max(alo, blo));
}

template <typename Scalar>
Scalar overlapVolume(const Box3<Scalar>& a, const Box3<Scalar>& b) {
  Scalar v = Scalar(1);
  for (int k = 0; k < 3; ++k) v *= overlapLength(a.lo[k], a.hi[k], b.lo[k], b.hi[k]);
  return v;
}

}  // namespace dsmc
