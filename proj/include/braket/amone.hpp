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

#ifndef BRAKET_AMONE_HPP
#define BRAKET_AMONE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "braket/error.hpp"
#include "braket/hilbert.hpp"

namespace braket {

// Normalization S and weight W = p_mm * S for one column.
struct AmoneSolution {
  double S = 1.0;
  double W = 0.0;
  bool degenerate = false;  // p_mm == 1, where S collapses to 0
};

// S ln S - W ln(W / sqrt(1 + W^2)) with W = p S; zero at the AMONE root.
inline double amone_residual(double p_mm, double S) {
  const double W = p_mm * S;
  const double lhs = S > 0.0 ? S * std::log(S) : 0.0;
  const double rhs = W > 0.0 ? W * (std::log(W) - 0.5 * std::log1p(W * W)) : 0.0;
  return lhs - rhs;
}

/// Solves the average-magnitude-one condition
///
///   ln S = p ln(p S / sqrt(1 + p^2 S^2))
///
/// for S in (0, 1]. The left minus right side is strictly increasing in S,
/// negative near 0 and positive at 1 for 0 < p < 1, so plain bisection is
/// run until the bracket cannot shrink further in double precision.
inline AmoneSolution solve_amone(double p_mm) {
  if (!(p_mm >= 0.0 && p_mm <= 1.0)) {
    std::ostringstream os;
    os << "solve_amone: p_mm = " << p_mm << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  if (p_mm == 0.0) return {1.0, 0.0, false};
  if (p_mm == 1.0) return {0.0, 0.0, true};

  const double log_p = std::log(p_mm);
  auto g = [&](double s) {
    return (1.0 - p_mm) * std::log(s) - p_mm * log_p + 0.5 * p_mm * std::log1p(p_mm * p_mm * s * s);
  };
  double lo = 1e-300;
  double hi = 1.0;
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double S = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
  return {S, p_mm * S, false};
}

// Parameters of the jump process out of basis state |m>.
struct JumpColumn {
  std::size_t m = 0;
  double rate = 0.0;
  std::vector<double> probs;     // p_lm, zero where V_lm == 0
  std::vector<Complex> factors;  // f_lm, zero where unset
  double S = 1.0;
  double W = 0.0;
  bool diagonal_folded = false;
  // Energy moved from E_m into V_mm to lift a vanishing diagonal (see JumpTableOptions).
  double diagonal_shift = 0.0;

  // Nonzero-probability targets and their cumulative distribution.
  std::vector<std::size_t> targets;
  std::vector<double> cumulative;

  double p_mm() const { return probs.empty() ? 0.0 : probs[m]; }
};

struct JumpTableOptions {
  // A column with V_mm == 0 but off-diagonal coupling has p_mm = 0, where the
  // self-jump factor diverges and the generator identity cannot be met. Such
  // columns get V_mm -> eps, E_m -> E_m - eps (H unchanged) with eps chosen
  // so that p_mm equals singular_self_probability. 0.64 minimizes the growth
  // rate of E|c|^2, (S^2 + 1/p - 1) / ((1 - p) S), over p.
  bool regularize_singular = true;
  double singular_self_probability = 0.64;
};

class JumpTable {
 public:
  JumpTable(HamiltonianModel model, std::vector<JumpColumn> columns)
      : model_(std::move(model)), columns_(std::move(columns)) {
    effective_energies_.resize(columns_.size());
    for (const auto& col : columns_) {
      const auto i = static_cast<Eigen::Index>(col.m);
      double e = model_.free_energy(col.m) - col.diagonal_shift;
      if (col.diagonal_folded) e += model_.interaction()(i, i).real();
      effective_energies_[col.m] = e;
    }
  }

  std::size_t dim() const { return columns_.size(); }
  const HamiltonianModel& model() const { return model_; }
  const JumpColumn& column(std::size_t m) const { return columns_[m]; }
  const std::vector<JumpColumn>& columns() const { return columns_; }
  // Phase rate between jumps: E_m, adjusted for shifted or folded diagonals.
  double effective_energy(std::size_t m) const { return effective_energies_[m]; }
  double max_rate() const {
    double r = 0.0;
    for (const auto& c : columns_) r = std::max(r, c.rate);
    return r;
  }

  // Fault injection hook for verification tests.
  JumpColumn& mutable_column(std::size_t m) { return columns_[m]; }

 private:
  HamiltonianModel model_;
  std::vector<JumpColumn> columns_;
  std::vector<double> effective_energies_;
};

namespace detail {

inline void finish_sampling(JumpColumn& col) {
  col.targets.clear();
  col.cumulative.clear();
  double acc = 0.0;
  for (std::size_t l = 0; l < col.probs.size(); ++l) {
    if (col.probs[l] > 0.0) {
      acc += col.probs[l];
      col.targets.push_back(l);
      col.cumulative.push_back(acc);
    }
  }
  if (!col.cumulative.empty()) col.cumulative.back() = 1.0;
}

}  // namespace detail

inline JumpTable build_jump_table(const HamiltonianModel& model, const JumpTableOptions& options = {}) {
  if (!(options.singular_self_probability > 0.0 && options.singular_self_probability < 1.0)) {
    throw ValidationError("build_jump_table: singular_self_probability must lie in (0, 1)");
  }
  const std::size_t n = model.dim();
  const double hbar = model.hbar();
  const ComplexMatrix& v = model.interaction();
  const double vmax = v.cwiseAbs().maxCoeff();

  std::vector<JumpColumn> columns(n);
  for (std::size_t m = 0; m < n; ++m) {
    JumpColumn& col = columns[m];
    const auto mi = static_cast<Eigen::Index>(m);
    col.m = m;
    col.probs.assign(n, 0.0);
    col.factors.assign(n, Complex{0.0, 0.0});

    double off_sum = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (l != m) off_sum += std::abs(v(static_cast<Eigen::Index>(l), mi));
    }
    double diag = v(mi, mi).real();

    if (off_sum == 0.0) {
      // Free evolution only; a nonzero V_mm becomes an extra phase.
      col.diagonal_folded = diag != 0.0;
      continue;
    }
    if (options.regularize_singular && std::abs(diag) <= kHermitianTolerance * vmax) {
      const double p = options.singular_self_probability;
      const double target = p / (1.0 - p) * off_sum;
      col.diagonal_shift = target - diag;
      diag = target;
    }

    const double col_sum = off_sum + std::abs(diag);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == m) continue;
      col.probs[l] = std::abs(v(static_cast<Eigen::Index>(l), mi)) / col_sum;
    }
    col.probs[m] = std::abs(diag) / col_sum;

    const auto amone = solve_amone(col.probs[m]);
    col.S = amone.S;
    col.W = amone.W;
    col.rate = col_sum / (hbar * col.S);

    for (std::size_t l = 0; l < n; ++l) {
      if (l == m) continue;
      const Complex vlm = v(static_cast<Eigen::Index>(l), mi);
      if (vlm != Complex{0.0, 0.0}) col.factors[l] = Complex{0.0, -1.0} * (vlm / std::abs(vlm)) * col.S;
    }
    if (diag != 0.0) {
      col.factors[m] = col.S * Complex{hbar * col.rate, -diag} / std::abs(diag);
    }
    detail::finish_sampling(col);
  }
  return JumpTable(model, std::move(columns));
}

/// Largest deviation |i hbar r_m (p_lm f_lm - delta_lm) - V_lm| over all
/// entries of non-folded columns. V_mm includes any regularizing shift
/// recorded in the column. Zero up to rounding for a correctly built table.
inline double verify_generator(const JumpTable& table, const HamiltonianModel& model) {
  if (table.dim() != model.dim()) throw ValidationError("verify_generator: table and model dimensions differ");
  const double hbar = model.hbar();
  const ComplexMatrix& v = model.interaction();
  double worst = 0.0;
  for (const auto& col : table.columns()) {
    if (col.diagonal_folded) continue;
    const auto mi = static_cast<Eigen::Index>(col.m);
    for (std::size_t l = 0; l < table.dim(); ++l) {
      const auto li = static_cast<Eigen::Index>(l);
      const double delta = l == col.m ? 1.0 : 0.0;
      const Complex lhs = Complex{0.0, hbar * col.rate} * (col.probs[l] * col.factors[l] - delta);
      const Complex target = v(li, mi) + delta * col.diagonal_shift;
      worst = std::max(worst, std::abs(lhs - target));
    }
  }
  return worst;
}

// |f_mm|^p_mm * S^(1 - p_mm) - 1 for a column with a self-jump; 0 otherwise.
inline double geometric_mean_defect(const JumpColumn& col) {
  if (col.rate == 0.0 || col.W == 0.0) return 0.0;
  const double p = col.p_mm();
  const double log_mean = p * std::log(std::abs(col.factors[col.m])) + (1.0 - p) * std::log(col.S);
  return std::expm1(log_mean);
}

}  // namespace braket

#endif  // BRAKET_AMONE_HPP
