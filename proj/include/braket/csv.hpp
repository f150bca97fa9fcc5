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

#ifndef BRAKET_CSV_HPP
#define BRAKET_CSV_HPP

#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "braket/amone.hpp"
#include "braket/engine.hpp"
#include "braket/harness.hpp"

// Writers for every CSV the command line emits. Reals carry 17 significant
// digits so that parsing a file recovers the exact doubles.
namespace braket::csv {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string amone_table(const JumpTable& table) {
  std::ostringstream os;
  os << "kind,m,l,r_m,S_m,W_m,p,re_f,im_f,flags\n";
  for (const auto& col : table.columns()) {
    std::string flags;
    if (col.diagonal_folded) flags = "diagonal_folded";
    if (col.diagonal_shift != 0.0) flags = "regularized";
    os << "column," << col.m << ",," << num(col.rate) << ',' << num(col.S) << ',' << num(col.W) << ','
       << num(col.p_mm()) << ",,," << flags << '\n';
    for (std::size_t l = 0; l < col.probs.size(); ++l) {
      if (col.probs[l] <= 0.0) continue;
      os << "target," << col.m << ',' << l << ",,,," << num(col.probs[l]) << ',' << num(col.factors[l].real())
         << ',' << num(col.factors[l].imag()) << ",\n";
    }
  }
  return os.str();
}

// (p_mm, S, W, |f_mm|) on `points` equally spaced p_mm values in [0, 1].
inline std::string amone_sweep(std::size_t points) {
  std::ostringstream os;
  os << "p_mm,S,W,abs_f_mm\n";
  for (std::size_t i = 0; i < points; ++i) {
    const double p = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    const AmoneSolution s = solve_amone(p);
    const double f = s.W > 0.0 ? s.S * std::sqrt(1.0 + s.W * s.W) / s.W : std::numeric_limits<double>::infinity();
    os << num(p) << ',' << num(s.S) << ',' << num(s.W) << ',' << num(f) << '\n';
  }
  return os.str();
}

inline std::string density(const DensityEstimate& est) {
  std::ostringstream os;
  os << "l,m,re_mean,im_mean,re_stderr,im_stderr\n";
  for (Eigen::Index l = 0; l < est.mean.rows(); ++l) {
    for (Eigen::Index m = 0; m < est.mean.cols(); ++m) {
      os << l << ',' << m << ',' << num(est.mean(l, m).real()) << ',' << num(est.mean(l, m).imag()) << ','
         << num(est.stderr_re(l, m)) << ',' << num(est.stderr_im(l, m)) << '\n';
    }
  }
  return os.str();
}

inline std::string compare(std::span<const CompareReport> reports) {
  std::ostringstream os;
  os << "t,l,m,exact_re,exact_im,mc_re,mc_im,stderr_re,stderr_im,z_re,z_im\n";
  for (const auto& r : reports) {
    for (const auto& e : r.entries) {
      os << num(r.time) << ',' << e.row << ',' << e.col << ',' << num(e.exact.real()) << ',' << num(e.exact.imag())
         << ',' << num(e.estimate.real()) << ',' << num(e.estimate.imag()) << ',' << num(e.stderr_re) << ','
         << num(e.stderr_im) << ',' << num(e.z_re) << ',' << num(e.z_im) << '\n';
    }
  }
  return os.str();
}

inline std::string convergence(const ConvergenceReport& rep) {
  std::ostringstream os;
  os << "N,rms_error\n";
  for (const auto& p : rep.points) os << p.trajectories << ',' << num(p.rms_error) << '\n';
  return os.str();
}

// Generic numeric table with a header row.
inline std::string table(std::span<const std::string> header, std::span<const std::vector<double>> columns) {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns[0].size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << num(columns[c][r]);
    os << '\n';
  }
  return os.str();
}

}  // namespace braket::csv

#endif  // BRAKET_CSV_HPP
