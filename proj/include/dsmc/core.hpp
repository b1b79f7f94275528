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

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace dsmc {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Vector3d = Vector3<double>;
using Vector3f = Vector3<float>;

/// Boltzmann constant, J/K (2019 SI exact value).
inline constexpr double kBoltzmann = 1.380649e-23;

/// A position that was required to lie inside a domain or grid does not.
class OutOfDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A cost-weighted query was made on a region with zero integrated cost.
class DegenerateRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A ratio whose denominator is zero was requested (e.g. max/mean timing
/// with an all-zero timing set).
class UndefinedRatioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool isPowerOfTwo(int n) { return n >= 1 && (n & (n - 1)) == 0; }

/// log2 of a power of two (exact).
inline int log2Exact(int n) {
  int levels = 0;
  while ((1 << levels) < n) ++levels;
  return levels;
}

}  // namespace dsmc
