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

#include <vector>

#include "dsmc/box.hpp"
#include "dsmc/core.hpp"

namespace dsmc {

/// Perfect binary tree of axis-aligned cuts over a root box.
///
/// A tree of depth n partitions the root box into 2^n leaf boxes. Internal
/// nodes are stored heap-ordered (root at 0, children of i at 2i+1, 2i+2).
/// Leaf ranks follow in-order traversal, so the rank of a leaf is the
/// left/right path code from the root (left = 0). A point on a cut plane
/// belongs to the right/upper child; the global upper faces stay with the
/// adjacent leaf.
template <typename Scalar>
class CutTree {
 public:
  struct Cut {
    int axis = 0;        // 0 = x, 1 = y, 2 = z
    Scalar position = Scalar(0);
  };

  CutTree() = default;

  CutTree(const Box3<Scalar>& rootBounds, int depth, std::vector<Cut> cuts)
      : root_(rootBounds), depth_(depth), cuts_(std::move(cuts)) {
    if (depth < 0) throw std::invalid_argument("CutTree: negative depth");
    if (Eigen::Index(cuts_.size()) != (Eigen::Index(1) << depth) - 1)
      throw std::invalid_argument("CutTree: cut count does not match depth");
    if (!root_.valid()) throw std::invalid_argument("CutTree: invalid root bounds");
  }

  int depth() const { return depth_; }
  int numRanks() const { return 1 << depth_; }
  const Box3<Scalar>& rootBounds() const { return root_; }
  const Cut& cut(int node) const { return cuts_[node]; }

  /// Rank owning a point, in depth() comparisons.
  int ownerOf(const Vector3<Scalar>& p) const {
    if (!root_.contains(p)) throw OutOfDomainError("CutTree: point outside root bounds");
    int node = 0;
    int rank = 0;
    for (int level = 0; level < depth_; ++level) {
      const Cut& c = cuts_[node];
      const int right = p[c.axis] < c.position ? 0 : 1;
      rank = (rank << 1) | right;
      node = 2 * node + 1 + right;
    }
    return rank;
  }

  /// Leaf box for a rank. Leaf boxes tile the root bounds.
  Box3<Scalar> subdomainOf(int rank) const {
    if (rank < 0 || rank >= numRanks())
      throw std::invalid_argument("CutTree: rank out of range");
    Box3<Scalar> box = root_;
    int node = 0;
    for (int level = 0; level < depth_; ++level) {
      const Cut& c = cuts_[node];
      const int right = (rank >> (depth_ - 1 - level)) & 1;
      if (right)
        box.lo[c.axis] = c.position;
      else
        box.hi[c.axis] = c.position;
      node = 2 * node + 1 + right;
    }
    return box;
  }

 private:
  Box3<Scalar> root_;
  int depth_ = 0;
  std::vector<Cut> cuts_;
};

using CutTreed = CutTree<double>;

}  // namespace dsmc
