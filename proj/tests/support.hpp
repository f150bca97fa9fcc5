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

// Shared helpers for the test binaries: random models and an independent
// step-wise integrator of the von Neumann equation.

#ifndef BRAKET_TESTS_SUPPORT_HPP
#define BRAKET_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "braket/hilbert.hpp"

namespace braket::testing {

// Complex Gaussian off-diagonals, real Gaussian diagonal, Gaussian free
// energies; scaled so the largest column sum of |V| equals `scale`.
inline HamiltonianModel random_model(std::mt19937_64& rng, std::size_t dim, double scale = 1.0,
                                     double energy_scale = 1.0) {
  std::normal_distribution<double> normal;
  ModelData d;
  d.dim = dim;
  const auto n = static_cast<Eigen::Index>(dim);
  d.interaction = ComplexMatrix::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    d.interaction(c, c) = normal(rng);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      const Complex z{normal(rng), normal(rng)};
      d.interaction(r, c) = z;
      d.interaction(c, r) = std::conj(z);
    }
  }
  double col_max = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) col_max = std::max(col_max, d.interaction.col(c).cwiseAbs().sum());
  d.interaction *= scale / col_max;
  for (std::size_t m = 0; m < dim; ++m) d.free_energies.push_back(energy_scale * normal(rng));
  return validate_model(std::move(d));
}

inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = Complex{normal(rng), normal(rng)};
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline HamiltonianModel rabi_model(double omega, double hbar = 1.0) {
  ModelData d;
  d.dim = 2;
  d.hbar = hbar;
  d.free_energies = {0.0, 0.0};
  d.interaction = ComplexMatrix::Zero(2, 2);
  d.interaction(0, 1) = omega;
  d.interaction(1, 0) = omega;
  return validate_model(std::move(d));
}

// Classical RK4 on i hbar drho/dt = [H, rho].
inline ComplexMatrix rk4_von_neumann(const ComplexMatrix& h, const ComplexMatrix& rho0, double hbar, double t,
                                     double dt) {
  const Complex minus_i_over_hbar{0.0, -1.0 / hbar};
  auto rhs = [&](const ComplexMatrix& r) -> ComplexMatrix { return minus_i_over_hbar * (h * r - r * h); };
  ComplexMatrix rho = rho0;
  const auto steps = static_cast<long>(std::ceil(t / dt));
  const double step = steps > 0 ? t / static_cast<double>(steps) : 0.0;
  for (long s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = rhs(rho);
    const ComplexMatrix k2 = rhs(rho + 0.5 * step * k1);
    const ComplexMatrix k3 = rhs(rho + 0.5 * step * k2);
    const ComplexMatrix k4 = rhs(rho + step * k3);
    rho += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace braket::testing

#endif  // BRAKET_TESTS_SUPPORT_HPP
