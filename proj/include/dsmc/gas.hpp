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
#include <stdexcept>

#include "dsmc/core.hpp"

namespace dsmc {

template <typename Scalar>
struct Particle {
  Vector3<Scalar> position = Vector3<Scalar>::Zero();
  Vector3<Scalar> velocity = Vector3<Scalar>::Zero();
};

using Particled = Particle<double>;

/// Single-species VHS gas. fnum is the number of real molecules one
/// simulated particle stands for.
template <typename Scalar>
struct GasModel {
  Scalar molecularMass = Scalar(0);     // kg
  Scalar vhsDiameterRef = Scalar(0);    // m, at vhsTemperatureRef
  Scalar vhsTemperatureRef = Scalar(0); // K
  Scalar vhsOmega = Scalar(0);          // in [0.5, 1]
  Scalar fnum = Scalar(0);

  void validate() const {
    if (!(molecularMass > 0 && vhsDiameterRef > 0 && vhsTemperatureRef > 0 && fnum > 0))
      throw std::invalid_argument("GasModel: parameters must be positive");
    if (!(vhsOmega >= Scalar(0.5) && vhsOmega <= Scalar(1.0)))
      throw std::invalid_argument("GasModel: vhsOmega must be in [0.5, 1]");
  }
};

using GasModeld = GasModel<double>;

/// Literature-standard VHS argon (omega from viscosity fits near 273 K).
template <typename Scalar>
GasModel<Scalar> argonGas(Scalar fnum) {
  return {Scalar(6.63e-26), Scalar(4.17e-10), Scalar(273.0), Scalar(0.81), fnum};
}

/// Most probable thermal speed sqrt(2 k_B T / m).
template <typename Scalar>
Scalar mostProbableSpeed(Scalar temperature, Scalar mass) {
  return std::sqrt(Scalar(2) * Scalar(kBoltzmann) * temperature / mass);
}

/// Equilibrium velocity: each component Normal(bulk_k, sqrt(k_B T / m)).
template <typename Scalar, typename Derived, typename Rng>
Vector3<Scalar> maxwellianVelocity(Scalar temperature, const Eigen::MatrixBase<Derived>& bulk,
                                   Scalar mass, Rng& rng) {
  if (temperature < Scalar(0)) throw std::invalid_argument("maxwellianVelocity: negative T");
  if (temperature == Scalar(0)) return bulk;
  std::normal_distribution<Scalar> normal(Scalar(0),
                                          std::sqrt(Scalar(kBoltzmann) * temperature / mass));
  return bulk + Vector3<Scalar>(normal(rng), normal(rng), normal(rng));
}

/// VHS total cross-section at relative speed cr, for like molecules
/// (reduced mass m/2).
template <typename Scalar>
Scalar vhsCrossSection(Scalar cr, const GasModel<Scalar>& gas) {
  if (!(cr > Scalar(0))) throw std::domain_error("vhsCrossSection: cr must be positive");
  const Scalar mr = gas.molecularMass / Scalar(2);
  const Scalar base = Scalar(2) * Scalar(kBoltzmann) * gas.vhsTemperatureRef / (mr * cr * cr);
  const Scalar pi = Scalar(EIGEN_PI);
  return pi * gas.vhsDiameterRef * gas.vhsDiameterRef *
         std::pow(base, gas.vhsOmega - Scalar(0.5)) /
         std::tgamma(Scalar(2.5) - gas.vhsOmega);
}

/// Isotropic elastic scattering of a like-mass pair: center-of-mass velocity
/// and relative speed are preserved, the post-collision relative direction is
/// uniform on the sphere.
template <typename Scalar, typename Rng>
void elasticCollision(Vector3<Scalar>& v1, Vector3<Scalar>& v2, Rng& rng) {
  const Vector3<Scalar> rel = v1 - v2;
  const Scalar cr = rel.norm();
  if (cr == Scalar(0)) return;
  std::uniform_real_distribution<Scalar> uniform(Scalar(0), Scalar(1));
  const Scalar cosT = Scalar(2) * uniform(rng) - Scalar(1);
  const Scalar sinT = std::sqrt(std::max(Scalar(0), Scalar(1) - cosT * cosT));
  const Scalar phi = Scalar(2) * Scalar(EIGEN_PI) * uniform(rng);
  const Vector3<Scalar> dir(sinT * std::cos(phi), sinT * std::sin(phi), cosT);
  const Vector3<Scalar> vcm = Scalar(0.5) * (v1 + v2);
  const Vector3<Scalar> half = Scalar(0.5) * cr * dir;
  v1 = vcm + half;
  v2 = vcm - half;
}

}  // namespace dsmc
