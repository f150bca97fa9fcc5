/*
 * Copyright (C) 2026 The braket authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BRAKET_EPR_HPP
#define BRAKET_EPR_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <string_view>

#include "braket/engine.hpp"
#include "braket/hilbert.hpp"

namespace braket::epr {

// Photon wavelengths of the calcium cascade, metadata only.
inline constexpr double kLambda1Nanometers = 551.3;
inline constexpr double kLambda2Nanometers = 422.7;

enum class Outcome { parallel_parallel, perp_perp, parallel_perp, perp_parallel };

inline constexpr std::array<Outcome, 4> kAllOutcomes = {Outcome::parallel_parallel, Outcome::perp_perp,
                                                        Outcome::parallel_perp, Outcome::perp_parallel};

inline constexpr std::string_view name(Outcome k) {
  switch (k) {
    case Outcome::parallel_parallel: return "parallel-parallel";
    case Outcome::perp_perp: return "perp-perp";
    case Outcome::parallel_perp: return "parallel-perp";
    case Outcome::perp_parallel: return "perp-parallel";
  }
  return "";
}

inline constexpr bool same_polarization(Outcome k) {
  return k == Outcome::parallel_parallel || k == Outcome::perp_perp;
}

// Polarizers rotate in opposite senses, so only theta1 + theta2 matters.
inline double relative_angle(double theta1, double theta2) { return theta1 + theta2; }

// Helicity basis |1> = both photons +1, |2> = both -1, with degenerate energies.
inline HamiltonianModel model(double energy = 0.0) {
  ModelData d;
  d.dim = 2;
  d.free_energies = {energy, energy};
  d.interaction = ComplexMatrix::Zero(2, 2);
  return validate_model(std::move(d));
}

// Each process starts as sqrt(2)|1> or -sqrt(2)|2> with probability 1/2.
inline InitialSampler initial_sampler() {
  return InitialSampler(2, {{0, 0.5, Complex{std::numbers::sqrt2, 0.0}}, {1, 0.5, Complex{-std::numbers::sqrt2, 0.0}}});
}

inline DensityMatrix singlet_density() {
  ComplexMatrix rho(2, 2);
  rho << 0.5, -0.5, -0.5, 0.5;
  return DensityMatrix(std::move(rho));
}

// 1/4 [[1, +-e^{2i Theta}], [+-e^{-2i Theta}, 1]]
inline Observable observable(Outcome kind, double theta1, double theta2) {
  const double sign = same_polarization(kind) ? 1.0 : -1.0;
  const Complex e = std::polar(1.0, 2.0 * relative_angle(theta1, theta2));
  ComplexMatrix a(2, 2);
  a << 0.25, 0.25 * sign * e, 0.25 * sign * std::conj(e), 0.25;
  return Observable(std::move(a));
}

inline double exact_probability(Outcome kind, double theta1, double theta2) {
  const double s = std::sin(relative_angle(theta1, theta2));
  const double c = std::cos(relative_angle(theta1, theta2));
  return same_polarization(kind) ? 0.5 * s * s : 0.5 * c * c;
}

// P_par,par + P_perp,perp - P_par,perp - P_perp,par as a single observable.
inline Observable correlation_observable(double theta1, double theta2) {
  const Complex e = std::polar(1.0, 2.0 * relative_angle(theta1, theta2));
  ComplexMatrix a(2, 2);
  a << 0.0, e, std::conj(e), 0.0;
  return Observable(std::move(a));
}

// E = -cos(2 (theta1 + theta2)) for the singlet.
inline double exact_correlation(double theta1, double theta2) {
  return -std::cos(2.0 * relative_angle(theta1, theta2));
}

// |E(a, b) - E(a, b') + E(a', b) + E(a', b')|
inline double chsh_value(double a, double a_prime, double b, double b_prime) {
  return std::abs(exact_correlation(a, b) - exact_correlation(a, b_prime) + exact_correlation(a_prime, b) +
                  exact_correlation(a_prime, b_prime));
}

// Angles reaching 2 sqrt(2) when the relative angle is theta1 + theta2.
struct ChshAngles {
  double a = 0.0;
  double a_prime = std::numbers::pi / 4.0;
  double b = -std::numbers::pi / 8.0;
  double b_prime = -3.0 * std::numbers::pi / 8.0;
};

struct ChshEstimate {
  double value = 0.0;
  double stderr = 0.0;
  std::array<ObservableEstimate, 4> correlations;
};

/// Monte Carlo CHSH combination at time t. Each of the four correlations is
/// estimated from its own set of pairs (seed + 0..3).
inline ChshEstimate estimate_chsh(const ChshAngles& angles, double t, const EstimateOptions& opt) {
  const HamiltonianModel m = model();
  const JumpTable table = build_jump_table(m);
  const InitialSampler sampler = initial_sampler();
  const std::array<std::array<double, 2>, 4> settings = {{{angles.a, angles.b},
                                                          {angles.a, angles.b_prime},
                                                          {angles.a_prime, angles.b},
                                                          {angles.a_prime, angles.b_prime}}};
  const std::array<double, 4> signs = {1.0, -1.0, 1.0, 1.0};
  ChshEstimate out;
  double total = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    EstimateOptions o = opt;
    o.seed = opt.seed + i;
    out.correlations[i] =
        estimate_observable(sampler, table, t, correlation_observable(settings[i][0], settings[i][1]), o);
    total += signs[i] * out.correlations[i].mean;
    var += out.correlations[i].stderr * out.correlations[i].stderr;
  }
  out.value = std::abs(total);
  out.stderr = std::sqrt(var);
  return out;
}

}  // namespace braket::epr

#endif  // BRAKET_EPR_HPP
