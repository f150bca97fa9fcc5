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

#ifndef BRAKET_ENGINE_HPP
#define BRAKET_ENGINE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "braket/amone.hpp"
#include "braket/error.hpp"
#include "braket/hilbert.hpp"
#include "braket/parallel.hpp"
#include "braket/random.hpp"

namespace braket {

// One process of a pair: c |m> at time t.
struct ProcessState {
  std::size_t index = 0;
  Complex amplitude{1.0, 0.0};
  double time = 0.0;
};

inline constexpr double kAmplitudeOverflow = 1e100;

/// Distribution of initial states: basis index m with probability q_m and
/// amplitude value a_m / q_m. Two independent draws reproduce a a^dagger in
/// expectation.
class InitialSampler {
 public:
  struct Entry {
    std::size_t index = 0;
    double probability = 0.0;
    Complex value;
  };

  InitialSampler(std::size_t dim, std::vector<Entry> support) : dim_(dim), support_(std::move(support)) {
    if (support_.empty()) throw ValidationError("sampler: empty support");
    double total = 0.0;
    for (const auto& e : support_) {
      if (e.index >= dim_) throw ValidationError("sampler: index out of range");
      if (!(e.probability > 0.0)) throw ValidationError("sampler: probabilities must be > 0");
      if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
        throw ValidationError("sampler: amplitude values must be finite");
      }
      total += e.probability;
      cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) {
      std::ostringstream os;
      os.precision(17);
      os << "sampler: probabilities sum to " << total << ", expected 1";
      throw ValidationError(os.str());
    }
    cumulative_.back() = 1.0;
  }

  std::size_t dim() const { return dim_; }
  const std::vector<Entry>& support() const { return support_; }

  ProcessState draw(RandomStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto& e = support_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
        it - cumulative_.begin(), static_cast<std::ptrdiff_t>(support_.size()) - 1))];
    return {e.index, e.value, 0.0};
  }

  // E[c |m>] = sum_m q_m (a_m / q_m) |m>
  Eigen::VectorXcd mean_vector() const {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim_));
    for (const auto& e : support_) a(static_cast<Eigen::Index>(e.index)) += e.probability * e.value;
    return a;
  }

  DensityMatrix mean_density() const { return DensityMatrix::pure(mean_vector()); }

 private:
  std::size_t dim_;
  std::vector<Entry> support_;
  std::vector<double> cumulative_;
};

/// Sampler for the pure state sum_m a_m |m>. Default weights are |a_m|^2;
/// if any nonzero |a_m|^2 falls below 1e-6 the weights become uniform over
/// the support so that a_m / q_m stays bounded.
inline InitialSampler sampler_from_amplitudes(std::span<const Complex> amps,
                                              std::optional<std::vector<double>> weights = std::nullopt) {
  const std::size_t n = amps.size();
  if (n == 0) throw ValidationError("sampler: no amplitudes");
  double norm = 0.0;
  for (const auto& a : amps) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "sampler: amplitudes have squared norm " << norm << ", expected 1";
    throw ValidationError(os.str());
  }

  std::vector<double> q;
  if (weights) {
    q = *weights;
    if (q.size() != n) throw ValidationError("sampler: weights and amplitudes differ in length");
    double total = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (!(q[m] >= 0.0) || !std::isfinite(q[m])) throw ValidationError("sampler: weights must be finite and >= 0");
      if (q[m] > 0.0 && amps[m] == Complex{0.0, 0.0}) {
        std::ostringstream os;
        os << "sampler: zero amplitude at index " << m << " has positive weight";
        throw ValidationError(os.str());
      }
      if (q[m] == 0.0 && amps[m] != Complex{0.0, 0.0}) {
        std::ostringstream os;
        os << "sampler: nonzero amplitude at index " << m << " has zero weight";
        throw ValidationError(os.str());
      }
      total += q[m];
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("sampler: weights do not sum to 1");
  } else {
    q.assign(n, 0.0);
    bool extreme = false;
    std::size_t support = 0;
    for (std::size_t m = 0; m < n; ++m) {
      q[m] = std::norm(amps[m]);
      if (q[m] > 0.0) {
        ++support;
        extreme = extreme || q[m] < 1e-6;
      }
    }
    if (extreme) {
      for (std::size_t m = 0; m < n; ++m) q[m] = q[m] > 0.0 ? 1.0 / static_cast<double>(support) : 0.0;
    } else {
      for (auto& x : q) x /= norm;
    }
  }

  std::vector<InitialSampler::Entry> entries;
  for (std::size_t m = 0; m < n; ++m) {
    if (q[m] > 0.0) entries.push_back({m, q[m], amps[m] / q[m]});
  }
  return InitialSampler(n, std::move(entries));
}

// Phase rotation exp(-i E_eff dt / hbar) between jumps.
inline ProcessState free_phase(const ProcessState& state, double dt, const JumpTable& table) {
  ProcessState out = state;
  const double phase = -table.effective_energy(state.index) * dt / table.model().hbar();
  out.amplitude *= std::polar(1.0, phase);
  out.time += dt;
  return out;
}

inline double next_jump_time(const ProcessState& state, const JumpTable& table, RandomStream& rng) {
  return rng.exponential(table.column(state.index).rate);
}

// c|m> -> c f_lm |l> with probability p_lm.
inline ProcessState apply_jump(const ProcessState& state, const JumpTable& table, RandomStream& rng) {
  const JumpColumn& col = table.column(state.index);
  const double u = rng.uniform();
  const auto it = std::upper_bound(col.cumulative.begin(), col.cumulative.end(), u);
  const auto k = static_cast<std::size_t>(
      std::min<std::ptrdiff_t>(it - col.cumulative.begin(), static_cast<std::ptrdiff_t>(col.targets.size()) - 1));
  const std::size_t target = col.targets[k];
  return {target, state.amplitude * col.factors[target], state.time};
}

struct Trajectory {
  ProcessState state;
  std::uint64_t jumps = 0;
  bool aborted = false;  // |c| exceeded kAmplitudeOverflow
};

inline Trajectory evolve_process(const ProcessState& initial, const JumpTable& table, double t_end,
                                 RandomStream& rng) {
  if (!(t_end >= initial.time)) throw ValidationError("evolve_process: t_end precedes the initial time");
  Trajectory traj{initial, 0, false};
  ProcessState& s = traj.state;
  while (true) {
    const double tau = next_jump_time(s, table, rng);
    if (!(s.time + tau < t_end)) {
      s = free_phase(s, t_end - s.time, table);
      s.time = t_end;
      break;
    }
    s = apply_jump(free_phase(s, tau, table), table, rng);
    ++traj.jumps;
    if (!(std::abs(s.amplitude) <= kAmplitudeOverflow)) {
      traj.aborted = true;
      break;
    }
  }
  return traj;
}

// Decade histogram of final |c| plus run-level counters.
struct AmplitudeDiagnostics {
  static constexpr int kMinDecade = -16;
  static constexpr int kMaxDecade = 16;
  // [0] underflow, [1 + k] decade kMinDecade + k, last overflow
  std::array<std::uint64_t, kMaxDecade - kMinDecade + 3> decades{};
  std::uint64_t processes = 0;
  std::uint64_t jumps = 0;
  std::uint64_t aborted_pairs = 0;
  double max_magnitude = 0.0;

  void record(const Trajectory& t) {
    ++processes;
    jumps += t.jumps;
    const double mag = std::abs(t.state.amplitude);
    max_magnitude = std::max(max_magnitude, mag);
    std::size_t bin = 0;
    if (mag > 0.0) {
      const int d = static_cast<int>(std::floor(std::log10(mag)));
      if (d < kMinDecade) {
        bin = 0;
      } else if (d > kMaxDecade) {
        bin = decades.size() - 1;
      } else {
        bin = static_cast<std::size_t>(1 + d - kMinDecade);
      }
    }
    ++decades[bin];
  }

  void merge(const AmplitudeDiagnostics& o) {
    for (std::size_t i = 0; i < decades.size(); ++i) decades[i] += o.decades[i];
    processes += o.processes;
    jumps += o.jumps;
    aborted_pairs += o.aborted_pairs;
    max_magnitude = std::max(max_magnitude, o.max_magnitude);
  }
};

struct EstimateOptions {
  std::uint64_t trajectories = 100000;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  // Drive the ket with the bra stream and vice versa.
  bool swap_sides = false;
};

struct PairOutcome {
  Trajectory ket;
  Trajectory bra;
  bool aborted() const { return ket.aborted || bra.aborted; }
};

inline PairOutcome simulate_pair(const InitialSampler& sampler, const JumpTable& table, double t,
                                 std::uint64_t seed, std::uint64_t pair, bool swap_sides = false) {
  RandomStream ket_rng(seed, pair, swap_sides ? Side::bra : Side::ket);
  RandomStream bra_rng(seed, pair, swap_sides ? Side::ket : Side::bra);
  PairOutcome out;
  out.ket = evolve_process(sampler.draw(ket_rng), table, t, ket_rng);
  out.bra = evolve_process(sampler.draw(bra_rng), table, t, bra_rng);
  return out;
}

// Running sums for the mean and standard error of a complex statistic.
struct ComplexMoments {
  Complex sum{0.0, 0.0};
  double sumsq_re = 0.0;
  double sumsq_im = 0.0;

  void add(Complex z) {
    sum += z;
    sumsq_re += z.real() * z.real();
    sumsq_im += z.imag() * z.imag();
  }
  void merge(const ComplexMoments& o) {
    sum += o.sum;
    sumsq_re += o.sumsq_re;
    sumsq_im += o.sumsq_im;
  }
};

// Standard error of a mean from sum and sum of squares over n samples.
inline double standard_error(double sum, double sumsq, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sumsq - nn * mean * mean) / (nn - 1.0));
  return std::sqrt(var / nn);
}

/// Ensemble estimate of rho_t = E(|phi><psi|). Entry (m, n) of `mean` is the
/// average of c conj(d) over pairs whose ket sits on |m> and bra on |n>.
struct DensityEstimate {
  ComplexMatrix mean;
  RealMatrix stderr_re;
  RealMatrix stderr_im;
  std::uint64_t count = 0;
  Complex trace{0.0, 0.0};
  double trace_stderr_re = 0.0;
  double trace_stderr_im = 0.0;
  AmplitudeDiagnostics diagnostics;
};

namespace detail {

struct DensityAccumulator {
  ComplexMatrix sum;
  RealMatrix sumsq_re;
  RealMatrix sumsq_im;
  ComplexMoments trace;
  AmplitudeDiagnostics diagnostics;

  explicit DensityAccumulator(Eigen::Index n)
      : sum(ComplexMatrix::Zero(n, n)), sumsq_re(RealMatrix::Zero(n, n)), sumsq_im(RealMatrix::Zero(n, n)) {}

  void merge(const DensityAccumulator& o) {
    sum += o.sum;
    sumsq_re += o.sumsq_re;
    sumsq_im += o.sumsq_im;
    trace.merge(o.trace);
    diagnostics.merge(o.diagnostics);
  }
};

inline void check_run(const InitialSampler& sampler, const JumpTable& table, double t, const EstimateOptions& opt) {
  if (opt.trajectories < 2) throw ValidationError("estimate: need at least 2 trajectory pairs");
  if (sampler.dim() != table.dim()) throw ValidationError("estimate: sampler and model dimensions differ");
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("estimate: time must be finite and >= 0");
}

}  // namespace detail

inline DensityEstimate estimate_density(const InitialSampler& sampler, const JumpTable& table, double t,
                                        const EstimateOptions& opt) {
  detail::check_run(sampler, table, t, opt);
  const auto n = static_cast<Eigen::Index>(table.dim());
  auto acc = reduce_indices<detail::DensityAccumulator>(
      opt.trajectories, opt.threads, [n] { return detail::DensityAccumulator(n); },
      [&](detail::DensityAccumulator& a, std::uint64_t pair) {
        const PairOutcome o = simulate_pair(sampler, table, t, opt.seed, pair, opt.swap_sides);
        a.diagnostics.record(o.ket);
        a.diagnostics.record(o.bra);
        if (o.aborted()) {
          ++a.diagnostics.aborted_pairs;
          a.trace.add(0.0);
          return;
        }
        const auto m = static_cast<Eigen::Index>(o.ket.state.index);
        const auto k = static_cast<Eigen::Index>(o.bra.state.index);
        const Complex z = o.ket.state.amplitude * std::conj(o.bra.state.amplitude);
        a.sum(m, k) += z;
        a.sumsq_re(m, k) += z.real() * z.real();
        a.sumsq_im(m, k) += z.imag() * z.imag();
        a.trace.add(m == k ? z : Complex{0.0, 0.0});
      });

  DensityEstimate est;
  est.count = opt.trajectories;
  est.mean = acc.sum / static_cast<double>(est.count);
  est.stderr_re = RealMatrix::Zero(n, n);
  est.stderr_im = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      est.stderr_re(i, j) = standard_error(acc.sum(i, j).real(), acc.sumsq_re(i, j), est.count);
      est.stderr_im(i, j) = standard_error(acc.sum(i, j).imag(), acc.sumsq_im(i, j), est.count);
    }
  }
  est.trace = acc.trace.sum / static_cast<double>(est.count);
  est.trace_stderr_re = standard_error(acc.trace.sum.real(), acc.trace.sumsq_re, est.count);
  est.trace_stderr_im = standard_error(acc.trace.sum.imag(), acc.trace.sumsq_im, est.count);
  est.diagnostics = acc.diagnostics;
  return est;
}

struct ObservableEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  double imag_mean = 0.0;
  double imag_stderr = 0.0;
  std::uint64_t count = 0;
  AmplitudeDiagnostics diagnostics;
};

/// <A> = E(<psi|A|phi>), one statistic conj(d) A(n, m) c per pair.
inline ObservableEstimate estimate_observable(const InitialSampler& sampler, const JumpTable& table, double t,
                                              const Observable& a, const EstimateOptions& opt) {
  detail::check_run(sampler, table, t, opt);
  if (a.dim() != table.dim()) throw ValidationError("estimate_observable: observable and model dimensions differ");
  struct Acc {
    ComplexMoments moments;
    AmplitudeDiagnostics diagnostics;
    void merge(const Acc& o) {
      moments.merge(o.moments);
      diagnostics.merge(o.diagnostics);
    }
  };
  const Acc acc = reduce_indices<Acc>(
      opt.trajectories, opt.threads, [] { return Acc{}; },
      [&](Acc& s, std::uint64_t pair) {
        const PairOutcome o = simulate_pair(sampler, table, t, opt.seed, pair, opt.swap_sides);
        s.diagnostics.record(o.ket);
        s.diagnostics.record(o.bra);
        if (o.aborted()) {
          ++s.diagnostics.aborted_pairs;
          s.moments.add(0.0);
          return;
        }
        s.moments.add(std::conj(o.bra.state.amplitude) * a(o.bra.state.index, o.ket.state.index) *
                      o.ket.state.amplitude);
      });

  ObservableEstimate est;
  est.count = opt.trajectories;
  const double n = static_cast<double>(est.count);
  est.mean = acc.moments.sum.real() / n;
  est.imag_mean = acc.moments.sum.imag() / n;
  est.stderr = standard_error(acc.moments.sum.real(), acc.moments.sumsq_re, est.count);
  est.imag_stderr = standard_error(acc.moments.sum.imag(), acc.moments.sumsq_im, est.count);
  est.diagnostics = acc.diagnostics;
  return est;
}

}  // namespace braket

#endif  // BRAKET_ENGINE_HPP
