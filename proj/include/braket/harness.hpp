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

#ifndef BRAKET_HARNESS_HPP
#define BRAKET_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "braket/amone.hpp"
#include "braket/engine.hpp"
#include "braket/hilbert.hpp"
#include "braket/random.hpp"

namespace braket {

inline constexpr double kSigmaBand = 5.0;

// (estimate - exact) / stderr; 0 when both the difference and stderr vanish.
inline double z_score(double estimate, double exact, double stderr) {
  const double diff = estimate - exact;
  if (stderr > 0.0) return diff / stderr;
  if (std::abs(diff) <= 1e-12 * std::max(1.0, std::abs(exact))) return 0.0;
  return std::copysign(std::numeric_limits<double>::infinity(), diff);
}

struct EntryComparison {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex exact;
  Complex estimate;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  double z_re = 0.0;
  double z_im = 0.0;
};

struct CompareReport {
  double time = 0.0;
  std::uint64_t seed = 0;
  DensityEstimate estimate;
  DensityMatrix exact;
  std::vector<EntryComparison> entries;
  double trace_z = 0.0;
  double max_abs_z = 0.0;
  std::size_t worst = 0;  // index into entries
  bool pass = true;
};

/// Ensemble estimate of rho_t against U rho_0 U^dagger, where rho_0 is the
/// sampler's exact mean. Passes when every real and imaginary part and the
/// trace lie within kSigmaBand standard errors and no pair was aborted.
inline CompareReport compare_exact(const HamiltonianModel& model, const InitialSampler& sampler, double t,
                                   const EstimateOptions& opt, const JumpTableOptions& table_opt = {}) {
  const JumpTable table = build_jump_table(model, table_opt);
  CompareReport rep;
  rep.time = t;
  rep.seed = opt.seed;
  rep.estimate = estimate_density(sampler, table, t, opt);
  rep.exact = exact_evolve(sampler.mean_density(), model, t);
  const std::size_t n = model.dim();
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t m = 0; m < n; ++m) {
      const auto li = static_cast<Eigen::Index>(l), mi = static_cast<Eigen::Index>(m);
      EntryComparison e;
      e.row = l;
      e.col = m;
      e.exact = rep.exact(l, m);
      e.estimate = rep.estimate.mean(li, mi);
      e.stderr_re = rep.estimate.stderr_re(li, mi);
      e.stderr_im = rep.estimate.stderr_im(li, mi);
      e.z_re = z_score(e.estimate.real(), e.exact.real(), e.stderr_re);
      e.z_im = z_score(e.estimate.imag(), e.exact.imag(), e.stderr_im);
      rep.entries.push_back(e);
    }
  }
  rep.trace_z = z_score(rep.estimate.trace.real(), rep.exact.trace().real(), rep.estimate.trace_stderr_re);
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    const double z = std::max(std::abs(e.z_re), std::abs(e.z_im));
    if (i == 0 || z > rep.max_abs_z) {
      rep.max_abs_z = z;
      rep.worst = i;
    }
  }
  rep.pass = rep.max_abs_z < kSigmaBand && std::abs(rep.trace_z) < kSigmaBand &&
             rep.estimate.diagnostics.aborted_pairs == 0;
  return rep;
}

struct ConvergenceOptions {
  std::vector<std::uint64_t> ladder = {1000, 10000, 100000, 1000000};
  int replicas = 32;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  // Restrict the error to one density-matrix entry; Frobenius norm otherwise.
  std::optional<std::pair<std::size_t, std::size_t>> entry;
};

struct ConvergencePoint {
  std::uint64_t trajectories = 0;
  double rms_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;
  bool exact = false;  // every error at rounding level; slope meaningless
};

// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double nn = static_cast<double>(n);
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

/// Root-mean-square error against the exact solution over independent
/// replicas at each ladder rung, and the fitted log-log slope.
inline ConvergenceReport convergence_report(const HamiltonianModel& model, const InitialSampler& sampler, double t,
                                            const ConvergenceOptions& opt) {
  if (opt.ladder.size() < 2) throw ValidationError("convergence: ladder needs at least two rungs");
  if (opt.replicas < 1) throw ValidationError("convergence: replicas must be >= 1");
  const JumpTable table = build_jump_table(model);
  const ComplexMatrix exact = exact_evolve(sampler.mean_density(), model, t).entries();
  ConvergenceReport rep;
  std::vector<double> xs, ys;
  bool exact_everywhere = true;
  for (std::size_t rung = 0; rung < opt.ladder.size(); ++rung) {
    double sq = 0.0;
    for (int r = 0; r < opt.replicas; ++r) {
      EstimateOptions eo;
      eo.trajectories = opt.ladder[rung];
      eo.seed = splitmix64(opt.seed ^ splitmix64((rung << 20) + static_cast<std::uint64_t>(r)));
      eo.threads = opt.threads;
      const DensityEstimate est = estimate_density(sampler, table, t, eo);
      const ComplexMatrix diff = est.mean - exact;
      const double err = opt.entry ? std::norm(diff(static_cast<Eigen::Index>(opt.entry->first),
                                                    static_cast<Eigen::Index>(opt.entry->second)))
                                   : diff.squaredNorm();
      sq += err;
    }
    const double rms = std::sqrt(sq / opt.replicas);
    rep.points.push_back({opt.ladder[rung], rms});
    exact_everywhere = exact_everywhere && rms <= 1e-12;
    xs.push_back(static_cast<double>(opt.ladder[rung]));
    ys.push_back(std::max(rms, std::numeric_limits<double>::min()));
  }
  rep.exact = exact_everywhere;
  rep.slope = rep.exact ? 0.0 : log_log_slope(xs, ys);
  return rep;
}

}  // namespace braket

#endif  // BRAKET_HARNESS_HPP
