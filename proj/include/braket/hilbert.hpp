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

#ifndef BRAKET_HILBERT_HPP
#define BRAKET_HILBERT_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "braket/error.hpp"

namespace braket {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

inline constexpr double kHermitianTolerance = 1e-12;

// Unchecked model description as read from a file or assembled by hand.
struct ModelData {
  std::size_t dim = 0;
  double hbar = 1.0;
  std::vector<double> free_energies;
  ComplexMatrix interaction;
};

// Worst deviation from Hermiticity, relative to the largest entry magnitude.
struct HermiticityReport {
  double relative_violation = 0.0;
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  bool diagonal = false;  // violation is an imaginary diagonal entry
};

inline HermiticityReport hermiticity_report(const ComplexMatrix& m) {
  HermiticityReport report;
  const double scale = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return report;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      double v = 0.0;
      if (r == c) {
        v = std::abs(m(r, c).imag()) / scale;
      } else {
        v = std::abs(m(r, c) - std::conj(m(c, r))) / scale;
      }
      if (v > report.relative_violation) {
        report = {v, r, c, r == c};
      }
    }
  }
  return report;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance) {
  return m.rows() == m.cols() && hermiticity_report(m).relative_violation <= tol;
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

class HamiltonianModel;
HamiltonianModel validate_model(ModelData raw);

// Free energies E_m of the distinguished basis plus a Hermitian interaction
// V_lm = <l|H_int|m>. Only obtainable through validate_model().
class HamiltonianModel {
 public:
  std::size_t dim() const { return data_.dim; }
  double hbar() const { return data_.hbar; }
  std::span<const double> free_energies() const { return data_.free_energies; }
  double free_energy(std::size_t m) const { return data_.free_energies[m]; }
  const ComplexMatrix& interaction() const { return data_.interaction; }
  const ModelData& data() const { return data_; }

  // H = diag(E) + V
  ComplexMatrix hamiltonian() const {
    ComplexMatrix h = data_.interaction;
    for (std::size_t m = 0; m < data_.dim; ++m) {
      const auto i = static_cast<Eigen::Index>(m);
      h(i, i) += data_.free_energies[m];
    }
    return h;
  }

 private:
  explicit HamiltonianModel(ModelData data) : data_(std::move(data)) {}
  friend HamiltonianModel validate_model(ModelData raw);

  ModelData data_;
};

inline HamiltonianModel validate_model(ModelData raw) {
  if (raw.dim < 1) throw ValidationError("model: dim must be >= 1");
  if (raw.free_energies.size() != raw.dim) {
    std::ostringstream os;
    os << "model: free_energies has length " << raw.free_energies.size() << ", expected dim = " << raw.dim;
    throw ValidationError(os.str());
  }
  const auto n = static_cast<Eigen::Index>(raw.dim);
  if (raw.interaction.rows() != n || raw.interaction.cols() != n) {
    std::ostringstream os;
    os << "model: interaction is " << raw.interaction.rows() << "x" << raw.interaction.cols()
       << ", expected " << raw.dim << "x" << raw.dim;
    throw ValidationError(os.str());
  }
  if (!(std::isfinite(raw.hbar) && raw.hbar > 0.0)) throw ValidationError("model: hbar must be finite and > 0");
  for (double e : raw.free_energies) {
    if (!std::isfinite(e)) throw ValidationError("model: free_energies must be finite");
  }
  if (!all_finite(raw.interaction)) throw ValidationError("model: interaction entries must be finite");

  const auto report = hermiticity_report(raw.interaction);
  if (report.relative_violation > kHermitianTolerance) {
    std::ostringstream os;
    os.precision(17);
    const auto r = report.row, c = report.col;
    if (report.diagonal) {
      os << "model: interaction diagonal V(" << r << "," << c << ") = " << raw.interaction(r, c)
         << " is not real";
    } else {
      os << "model: interaction not Hermitian, V(" << r << "," << c << ") = " << raw.interaction(r, c)
         << " != conj(V(" << c << "," << r << ")) = " << std::conj(raw.interaction(c, r));
    }
    os << " (relative violation " << report.relative_violation << ")";
    throw ValidationError(os.str());
  }
  return HamiltonianModel(std::move(raw));
}

// Moves a constant eps_m from the free energies into the interaction
// diagonal. H itself is unchanged, only its free/interaction splitting.
inline HamiltonianModel diagonal_shift(const HamiltonianModel& model, double eps) {
  ModelData d = model.data();
  for (std::size_t m = 0; m < d.dim; ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    d.interaction(i, i) += eps;
    d.free_energies[m] -= eps;
  }
  return validate_model(std::move(d));
}

class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw ValidationError("density matrix must be square");
  }

  // |a><a|
  static DensityMatrix pure(const Eigen::VectorXcd& amplitudes) {
    return DensityMatrix(amplitudes * amplitudes.adjoint());
  }

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& entries() const { return entries_; }
  Complex operator()(std::size_t l, std::size_t m) const {
    return entries_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m));
  }
  Complex trace() const { return entries_.trace(); }

 private:
  ComplexMatrix entries_;
};

// Self-adjoint operator in the distinguished basis.
class Observable {
 public:
  explicit Observable(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw ValidationError("observable must be square");
    if (!all_finite(entries_)) throw ValidationError("observable entries must be finite");
    const auto report = hermiticity_report(entries_);
    if (report.relative_violation > kHermitianTolerance) {
      std::ostringstream os;
      os << "observable not Hermitian at (" << report.row << "," << report.col << "), relative violation "
         << report.relative_violation;
      throw ValidationError(os.str());
    }
  }

  static Observable identity(std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    return Observable(ComplexMatrix::Identity(n, n));
  }
  static Observable projector(std::size_t dim, std::size_t m) {
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)) = 1.0;
    return Observable(std::move(a));
  }

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const ComplexMatrix& entries() const { return entries_; }
  Complex operator()(std::size_t l, std::size_t m) const {
    return entries_(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m));
  }

 private:
  ComplexMatrix entries_;
};

// tr(rho A)
inline Complex trace_inner(const DensityMatrix& rho, const Observable& a) {
  if (rho.dim() != a.dim()) {
    std::ostringstream os;
    os << "trace_inner: dimension mismatch (" << rho.dim() << " vs " << a.dim() << ")";
    throw ValidationError(os.str());
  }
  // sum_{lm} rho_lm A_ml without forming the product
  return (rho.entries().transpose().cwiseProduct(a.entries())).sum();
}

// U(t) = exp(-iHt/hbar) from one eigendecomposition of H, reusable across times.
class ExactPropagator {
 public:
  explicit ExactPropagator(const HamiltonianModel& model) : hbar_(model.hbar()) {
    const ComplexMatrix h = model.hamiltonian();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw ValidationError("exact_evolve: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  ComplexMatrix unitary(double t) const {
    Eigen::VectorXcd phases(eigenvalues_.size());
    for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
      phases(k) = std::polar(1.0, -eigenvalues_(k) * t / hbar_);
    }
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
  }

  DensityMatrix evolve(const DensityMatrix& rho0, double t) const {
    if (static_cast<Eigen::Index>(rho0.dim()) != eigenvalues_.size()) {
      throw ValidationError("exact_evolve: density matrix and model dimensions differ");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("exact_evolve: t must be finite and >= 0");
    if (!is_hermitian(rho0.entries(), 1e-10)) throw ValidationError("exact_evolve: initial density matrix not Hermitian");
    const ComplexMatrix u = unitary(t);
    return DensityMatrix(u * rho0.entries() * u.adjoint());
  }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  double hbar_;
  Eigen::VectorXd eigenvalues_;
  ComplexMatrix eigenvectors_;
};

inline DensityMatrix exact_evolve(const DensityMatrix& rho0, const HamiltonianModel& model, double t) {
  return ExactPropagator(model).evolve(rho0, t);
}

}  // namespace braket

#endif  // BRAKET_HILBERT_HPP
