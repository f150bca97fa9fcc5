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

#ifndef BRAKET_DOUBLESLIT_HPP
#define BRAKET_DOUBLESLIT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "braket/engine.hpp"
#include "braket/error.hpp"
#include "braket/parallel.hpp"
#include "braket/random.hpp"

namespace braket::doubleslit {

enum class Slits { I, II, both };

inline constexpr std::string_view name(Slits s) {
  switch (s) {
    case Slits::I: return "I";
    case Slits::II: return "II";
    case Slits::both: return "both";
  }
  return "";
}

/// Plane double-slit setup. The gun exit is at transverse coordinate 0, the
/// slit wall at distance L1 with slit I centered at +d/2 and slit II at -d/2,
/// and the absorbing wall a further L2 away carrying the detector bins.
struct SlitGeometry {
  double L1 = 1.0;
  double L2 = 1.0;
  double separation = 1.0;  // d, center to center
  double width = 0.1;       // a
  int points_per_slit = 2;  // n_s
  std::vector<double> bin_centers;
  double bin_width = 0.0;
  double k = 1.0;
  Slits open = Slits::both;

  std::size_t bins() const { return bin_centers.size(); }
  bool slit_open(int slit) const {
    return open == Slits::both || (slit == 0 && open == Slits::I) || (slit == 1 && open == Slits::II);
  }

  SlitGeometry with_open(Slits s) const {
    SlitGeometry g = *this;
    g.open = s;
    return g;
  }
};

// k from k^2 = 2 m_e E (reduced units, hbar = 1).
inline double wavenumber(double electron_mass, double energy) {
  if (!(electron_mass > 0.0 && energy > 0.0)) throw ValidationError("geometry: m_e and E must be > 0");
  return std::sqrt(2.0 * electron_mass * energy);
}

inline std::vector<double> uniform_bins(double lo, double hi, std::size_t count) {
  if (count == 0) throw ValidationError("geometry: need at least one bin");
  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) {
    xs[i] = count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return xs;
}

inline void validate(const SlitGeometry& g) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(g.L1) || !positive(g.L2) || !positive(g.separation) || !positive(g.width)) {
    throw ValidationError("geometry: L1, L2, d and a must be finite and > 0");
  }
  if (!(g.separation > g.width)) throw ValidationError("geometry: slit separation must exceed slit width");
  if (g.points_per_slit < 2) throw ValidationError("geometry: need at least 2 points per slit");
  if (!positive(g.k)) throw ValidationError("geometry: k must be finite and > 0");
  if (g.bin_centers.empty()) throw ValidationError("geometry: no detector bins");
  if (!positive(g.bin_width)) throw ValidationError("geometry: bin width must be > 0");
  for (std::size_t i = 1; i < g.bin_centers.size(); ++i) {
    if (!(g.bin_centers[i] > g.bin_centers[i - 1])) throw ValidationError("geometry: bin centers must increase");
  }
}

// One (k, k') pair: gun -> slit point -> bin center.
struct PathSpec {
  int slit = 0;  // 0 = I, 1 = II
  double slit_point = 0.0;
  std::size_t bin = 0;
  double endpoint = 0.0;
  double total_length = 0.0;
  double prob = 0.0;
  Complex phase{1.0, 0.0};
};

inline double slit_point(const SlitGeometry& g, int slit, int i) {
  const double center = slit == 0 ? 0.5 * g.separation : -0.5 * g.separation;
  return center - 0.5 * g.width + (static_cast<double>(i) + 0.5) * g.width / g.points_per_slit;
}

/// Paths through the open slits. Each of the 2 n_s slit points times each
/// bin direction carries p = 1 / (2 n_s bins) whether or not its slit is
/// open; with one slit closed the missing weight is absorbed at the wall.
inline std::vector<PathSpec> enumerate_paths(const SlitGeometry& g) {
  validate(g);
  const double p = 1.0 / (2.0 * g.points_per_slit * static_cast<double>(g.bins()));
  std::vector<PathSpec> paths;
  for (int slit = 0; slit < 2; ++slit) {
    if (!g.slit_open(slit)) continue;
    for (int i = 0; i < g.points_per_slit; ++i) {
      const double s = slit_point(g, slit, i);
      const double to_slit = std::hypot(g.L1, s);
      for (std::size_t b = 0; b < g.bins(); ++b) {
        const double x = g.bin_centers[b];
        const double length = to_slit + std::hypot(g.L2, x - s);
        paths.push_back({slit, s, b, x, length, p, std::polar(1.0, g.k * length)});
      }
    }
  }
  return paths;
}

// Indices of paths ending inside bin `bin`.
inline std::vector<std::size_t> detector_set(std::span<const PathSpec> paths, const SlitGeometry& g,
                                             std::size_t bin) {
  const double lo = g.bin_centers[bin] - 0.5 * g.bin_width;
  const double hi = g.bin_centers[bin] + 0.5 * g.bin_width;
  std::vector<std::size_t> d;
  for (std::size_t j = 0; j < paths.size(); ++j) {
    if (paths[j].endpoint >= lo && paths[j].endpoint < hi) d.push_back(j);
  }
  return d;
}

// |sum_{j in D} p_j phi_j|^2
inline double closed_form_intensity(std::span<const PathSpec> paths, std::span<const std::size_t> d) {
  Complex amp{0.0, 0.0};
  for (std::size_t j : d) amp += paths[j].prob * paths[j].phase;
  return std::norm(amp);
}

// sum_{j,l in D} p_j p_l phi_j conj(phi_l); the imaginary part is returned too.
inline Complex pair_sum(std::span<const PathSpec> paths, std::span<const std::size_t> d) {
  Complex total{0.0, 0.0};
  for (std::size_t j : d) {
    for (std::size_t l : d) total += paths[j].prob * paths[l].prob * paths[j].phase * std::conj(paths[l].phase);
  }
  return total;
}

inline double pair_sum_intensity(std::span<const PathSpec> paths, std::span<const std::size_t> d) {
  return pair_sum(paths, d).real();
}

inline double closed_form_intensity(const SlitGeometry& g, std::size_t bin) {
  const auto paths = enumerate_paths(g);
  return closed_form_intensity(paths, detector_set(paths, g, bin));
}

inline double pair_sum_intensity(const SlitGeometry& g, std::size_t bin) {
  const auto paths = enumerate_paths(g);
  return pair_sum_intensity(paths, detector_set(paths, g, bin));
}

// Largest value either side of the identity can take: (sum_{j in D} p_j)^2.
inline double intensity_scale(std::span<const PathSpec> paths, std::span<const std::size_t> d) {
  double s = 0.0;
  for (std::size_t j : d) s += paths[j].prob;
  return s * s;
}

struct Profile {
  std::vector<double> x;
  std::vector<double> slit_I;
  std::vector<double> slit_II;
  std::vector<double> both;
};

inline std::vector<double> closed_form_profile(const SlitGeometry& g) {
  const auto paths = enumerate_paths(g);
  std::vector<double> out(g.bins());
  for (std::size_t b = 0; b < g.bins(); ++b) out[b] = closed_form_intensity(paths, detector_set(paths, g, b));
  return out;
}

inline std::vector<double> pair_sum_profile(const SlitGeometry& g) {
  const auto paths = enumerate_paths(g);
  std::vector<double> out(g.bins());
  for (std::size_t b = 0; b < g.bins(); ++b) out[b] = pair_sum_intensity(paths, detector_set(paths, g, b));
  return out;
}

inline Profile intensity_profile(const SlitGeometry& g) {
  return {g.bin_centers, closed_form_profile(g.with_open(Slits::I)), closed_form_profile(g.with_open(Slits::II)),
          closed_form_profile(g.with_open(Slits::both))};
}

inline std::vector<double> normalized_to_peak(std::vector<double> v) {
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (peak > 0.0) {
    for (auto& x : v) x /= peak;
  }
  return v;
}

/// Mean spacing of interior local maxima, each located by a parabola through
/// the peak bin and its neighbours. Returns 0 with fewer than two maxima.
inline double fringe_spacing(std::span<const double> x, std::span<const double> values) {
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] >= values[i + 1]) {
      const double h = x[i + 1] - x[i];
      const double denom = values[i - 1] - 2.0 * values[i] + values[i + 1];
      const double shift = denom != 0.0 ? 0.5 * (values[i - 1] - values[i + 1]) / denom : 0.0;
      peaks.push_back(x[i] + shift * h);
    }
  }
  if (peaks.size() < 2) return 0.0;
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

struct McIntensity {
  double mean = 0.0;
  double stderr = 0.0;
  double imag_mean = 0.0;
  double imag_stderr = 0.0;
};

/// Two-process estimate for every bin at once. Both processes of a pair
/// independently draw a path (or absorption at a closed slit); the pair
/// contributes phi_j conj(phi_l) to bin b only if both paths end in b.
inline std::vector<McIntensity> mc_profile(const SlitGeometry& g, std::uint64_t n, std::uint64_t seed,
                                           unsigned threads = default_threads()) {
  if (n < 2) throw ValidationError("mc_intensity: need at least 2 trajectory pairs");
  const auto paths = enumerate_paths(g);
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& p : paths) cumulative.push_back(acc += p.prob);
  // Mass beyond the last entry is absorption at a closed slit.
  if (g.open == Slits::both) cumulative.back() = 1.0;

  auto draw = [&](RandomStream& rng) -> std::ptrdiff_t {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) return -1;
    return it - cumulative.begin();
  };

  struct Acc {
    std::vector<ComplexMoments> bins;
    void merge(const Acc& o) {
      for (std::size_t b = 0; b < bins.size(); ++b) bins[b].merge(o.bins[b]);
    }
  };
  const std::size_t nbins = g.bins();
  const Acc total = reduce_indices<Acc>(
      n, threads, [nbins] { return Acc{std::vector<ComplexMoments>(nbins)}; },
      [&](Acc& a, std::uint64_t pair) {
        RandomStream ket(seed, pair, Side::ket);
        RandomStream bra(seed, pair, Side::bra);
        const auto j = draw(ket);
        const auto l = draw(bra);
        if (j < 0 || l < 0) return;
        const auto& pj = paths[static_cast<std::size_t>(j)];
        const auto& pl = paths[static_cast<std::size_t>(l)];
        if (pj.bin != pl.bin) return;
        a.bins[pj.bin].add(pj.phase * std::conj(pl.phase));
      });

  std::vector<McIntensity> out(nbins);
  for (std::size_t b = 0; b < nbins; ++b) {
    const auto& m = total.bins[b];
    const double nn = static_cast<double>(n);
    out[b] = {m.sum.real() / nn, standard_error(m.sum.real(), m.sumsq_re, n), m.sum.imag() / nn,
              standard_error(m.sum.imag(), m.sumsq_im, n)};
  }
  return out;
}

inline McIntensity mc_intensity(const SlitGeometry& g, std::size_t bin, std::uint64_t n, std::uint64_t seed,
                                unsigned threads = default_threads()) {
  if (bin >= g.bins()) throw ValidationError("mc_intensity: bin out of range");
  return mc_profile(g, n, seed, threads)[bin];
}

}  // namespace braket::doubleslit

#endif  // BRAKET_DOUBLESLIT_HPP
