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
#include <random>
#include <vector>

#include "dsmc/domain.hpp"
#include "dsmc/gas.hpp"

namespace dsmc {

/// Circular inlet on the bottom (-z) face, emitting an upward jet.
template <typename Scalar>
struct InletSpec {
  Vector3<Scalar> center = Vector3<Scalar>::Zero();  // on the bottom face
  Scalar radius = Scalar(0);
  Vector3<Scalar> bulkVelocity = Vector3<Scalar>::Zero();  // [2] > 0
  Scalar density = Scalar(0);      // kg/m^3
  Scalar temperature = Scalar(0);  // K

  void validate(const Box3<Scalar>& domain) const {
    if (!(radius > 0 && density > 0 && temperature >= 0))
      throw std::invalid_argument("InletSpec: radius/density/temperature invalid");
    if (!(bulkVelocity[2] > 0))
      throw std::invalid_argument("InletSpec: bulk velocity must point into the domain");
    if (center[2] != domain.lo[2])
      throw std::invalid_argument("InletSpec: center must sit on the bottom face");
    for (int k = 0; k < 2; ++k)
      if (center[k] - radius < domain.lo[k] || center[k] + radius > domain.hi[k])
        throw std::invalid_argument("InletSpec: disk leaves the bottom face");
  }
};

using InletSpecd = InletSpec<double>;

/// One-sided Maxwellian number flux (per area, per time) through the inlet
/// plane: Phi = n c_mp [exp(-s^2) + sqrt(pi) s (1 + erf s)] / (2 sqrt(pi)),
/// s = u_n / c_mp. T = 0 degenerates to the beam flux n u_n.
template <typename Scalar>
Scalar inflowFlux(const InletSpec<Scalar>& inlet, const GasModel<Scalar>& gas) {
  const Scalar n = inlet.density / gas.molecularMass;
  const Scalar un = inlet.bulkVelocity[2];
  if (inlet.temperature == Scalar(0)) return n * std::max(un, Scalar(0));
  const Scalar cmp = mostProbableSpeed(inlet.temperature, gas.molecularMass);
  const Scalar s = un / cmp;
  const Scalar sqrtPi = std::sqrt(Scalar(EIGEN_PI));
  return n * cmp * (std::exp(-s * s) + sqrtPi * s * (Scalar(1) + std::erf(s))) /
         (Scalar(2) * sqrtPi);
}

/// Expected simulated particles created per step: Phi * A * dt / fnum.
template <typename Scalar>
Scalar inflowExpectedCount(const InletSpec<Scalar>& inlet, const GasModel<Scalar>& gas,
                           Scalar dt) {
  const Scalar area = Scalar(EIGEN_PI) * inlet.radius * inlet.radius;
  return inflowFlux(inlet, gas) * area * dt / gas.fnum;
}

/// Samples y = v_n / c_mp from the flux-weighted one-sided Maxwellian
/// p(y) ~ y exp(-(y-s)^2) on y > 0.
///
/// Exact mixture rejection: the envelope (y-s)e^{-(y-s)^2}[y>s] + s e^{-(y-s)^2}
/// dominates p and is tight for y > s. The first component is a shifted
/// Rayleigh (always accepted), the second a truncated Gaussian accepted with
/// probability min(1, y/s).
template <typename Scalar, typename Rng>
Scalar sampleFluxSpeedRatio(Scalar s, Rng& rng) {
  std::uniform_real_distribution<Scalar> uniform(Scalar(0), Scalar(1));
  std::normal_distribution<Scalar> thermal(Scalar(0), Scalar(1) / std::sqrt(Scalar(2)));
  const Scalar wRayleigh = Scalar(0.5);
  const Scalar wGauss = s * (std::sqrt(Scalar(EIGEN_PI)) / Scalar(2)) * (Scalar(1) + std::erf(s));
  for (;;) {
    if (uniform(rng) * (wRayleigh + wGauss) < wRayleigh)
      return s + std::sqrt(-std::log(Scalar(1) - uniform(rng)));
    Scalar w;
    do {
      w = thermal(rng);
    } while (w <= -s);
    const Scalar y = s + w;
    if (y >= s || uniform(rng) < y / s) return y;
  }
}

/// Inflow velocity: flux-weighted normal component, thermal tangentials
/// around the bulk.
template <typename Scalar, typename Rng>
Vector3<Scalar> sampleInflowVelocity(const InletSpec<Scalar>& inlet, const GasModel<Scalar>& gas,
                                     Rng& rng) {
  if (inlet.temperature == Scalar(0)) return inlet.bulkVelocity;
  const Scalar cmp = mostProbableSpeed(inlet.temperature, gas.molecularMass);
  const Scalar sigma = std::sqrt(Scalar(kBoltzmann) * inlet.temperature / gas.molecularMass);
  std::normal_distribution<Scalar> thermal(Scalar(0), sigma);
  Vector3<Scalar> v;
  v[0] = inlet.bulkVelocity[0] + thermal(rng);
  v[1] = inlet.bulkVelocity[1] + thermal(rng);
  v[2] = cmp * sampleFluxSpeedRatio(inlet.bulkVelocity[2] / cmp, rng);
  return v;
}

/// Uniform position on the inlet disk, on the bottom face.
template <typename Scalar, typename Rng>
Vector3<Scalar> sampleDiskPosition(const InletSpec<Scalar>& inlet, Rng& rng) {
  std::uniform_real_distribution<Scalar> uniform(Scalar(0), Scalar(1));
  const Scalar r = inlet.radius * std::sqrt(uniform(rng));
  const Scalar phi = Scalar(2) * Scalar(EIGEN_PI) * uniform(rng);
  return inlet.center + Vector3<Scalar>(r * std::cos(phi), r * std::sin(phi), Scalar(0));
}

/// Creates one step's inflow. Candidate positions are drawn Poisson with the
/// full-inlet mean scaled by densityScale; `keep` filters candidates by disk
/// position before any further draws, so a rank owning a fraction of the disk
/// creates exactly its thinned Poisson share from its own stream. Created
/// particles advance by a uniform fraction of dt (and may exit immediately).
template <typename Scalar, typename Rng, typename KeepFn>
std::vector<Particle<Scalar>> createInflow(const InletSpec<Scalar>& inlet,
                                           const GasModel<Scalar>& gas,
                                           const Box3<Scalar>& domain, Scalar dt,
                                           Scalar densityScale, Rng& rng, KeepFn&& keep) {
  std::vector<Particle<Scalar>> created;
  const Scalar mean = inflowExpectedCount(inlet, gas, dt) * densityScale;
  if (!(mean > Scalar(0))) return created;
  std::poisson_distribution<long long> draw(mean);
  const long long count = draw(rng);
  std::uniform_real_distribution<Scalar> uniform(Scalar(0), Scalar(1));
  created.reserve(size_t(count) / 4 + 1);
  for (long long i = 0; i < count; ++i) {
    const Vector3<Scalar> pos = sampleDiskPosition(inlet, rng);
    if (!keep(pos)) continue;
    Particle<Scalar> p{pos, sampleInflowVelocity(inlet, gas, rng)};
    if (advect(p, uniform(rng) * dt, domain) == MoveResult::Moved) created.push_back(p);
  }
  return created;
}

}  // namespace dsmc
