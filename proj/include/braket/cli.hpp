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

#ifndef BRAKET_CLI_HPP
#define BRAKET_CLI_HPP

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "braket/amone.hpp"
#include "braket/csv.hpp"
#include "braket/doubleslit.hpp"
#include "braket/engine.hpp"
#include "braket/epr.hpp"
#include "braket/error.hpp"
#include "braket/harness.hpp"
#include "braket/io.hpp"

namespace braket::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kValidation = 2,
  kStatistical = 3,
  kIo = 4,
};

namespace detail {

struct Common {
  std::uint64_t trajectories = 100000;
  std::uint64_t seed = 0;
  unsigned threads = default_threads();
  std::string out;
};

inline void add_stochastic(CLI::App* cmd, Common& c) {
  cmd->add_option("--trajectories,-N", c.trajectories, "Number of bra-ket trajectory pairs (>= 2)")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "64-bit master seed; output is a deterministic function of it")
      ->capture_default_str();
}

inline void check_trajectories(const Common& c) {
  if (c.trajectories < 2) throw ValidationError("--trajectories must be at least 2");
}

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_text(path, text);
  }
}

inline EstimateOptions estimate_options(const Common& c) {
  EstimateOptions o;
  o.trajectories = c.trajectories;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

inline void report_diagnostics(const AmplitudeDiagnostics& d, std::ostream& err) {
  err << "processes " << d.processes << ", jumps " << d.jumps << ", aborted pairs " << d.aborted_pairs
      << ", max |c| " << csv::num(d.max_magnitude) << '\n';
}

}  // namespace detail

/// Runs one command line. `args` excludes the program name. CSV goes to
/// `out` unless --out names a file; diagnostics and errors go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "braket: two-process stochastic jump unraveling of the von Neumann equation.\n"
      "Every stochastic command is a deterministic function of its inputs and --seed,\n"
      "independent of --threads. Exit codes: 0 ok, 1 usage, 2 validation failure,\n"
      "3 statistical check failure, 4 I/O failure.",
      "braket"};
  app.require_subcommand(1);
  app.fallthrough();
  detail::Common common;
  app.add_option("--threads", common.threads, "Worker threads (default: $BRAKET_THREADS or hardware concurrency)")
      ->check(CLI::PositiveNumber);

  // amone-table
  auto* amone = app.add_subcommand("amone-table", "Jump-process parameters of a model, or the S(p_mm) curve");
  amone->footer(
      "Model mode writes one 'column' row per basis state (m, r_m, S_m, W_m, p_mm) followed by\n"
      "'target' rows (l, p_lm, Re f_lm, Im f_lm). --sweep writes p_mm, S, W, |f_mm| on a grid.");
  std::string amone_model;
  bool sweep = false;
  std::size_t sweep_points = 101;
  bool literal = false;
  amone->add_option("--model", amone_model, "Model JSON file");
  amone->add_flag("--sweep", sweep, "Emit the S(p_mm), W(p_mm), |f_mm| curve instead");
  amone->add_option("--points", sweep_points, "Grid points for --sweep")->capture_default_str();
  amone->add_flag("--no-regularize", literal, "Leave columns with vanishing V_mm unregularized");
  amone->add_option("--out", common.out, "Output CSV (default stdout)");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "Ensemble estimate of the density matrix at time T");
  evolve->footer("Writes rows l, m, Re mean, Im mean, Re stderr, Im stderr; indices are 0-based.");
  std::string model_path, initial_path;
  double time = 0.0;
  evolve->add_option("--model", model_path, "Model JSON file")->required();
  evolve->add_option("--initial", initial_path, "Initial-state JSON file")->required();
  evolve->add_option("--time", time, "Evolution time T >= 0")->required();
  detail::add_stochastic(evolve, common);
  evolve->add_option("--out", common.out, "Output CSV (default stdout)");

  // epr
  auto* epr_cmd = app.add_subcommand("epr", "EPR coincidence probabilities and CHSH value");
  epr_cmd->footer(
      "Angles are in radians; the relative polarizer angle is theta1 + theta2. Each --theta1 is\n"
      "combined with each --theta2. Writes theta, kind, exact, mc_mean, mc_stderr.\n"
      "--chsh a a' b b' prints the exact and Monte Carlo CHSH value instead.");
  std::vector<double> theta1s, theta2s, chsh;
  double epr_time = 0.0;
  epr_cmd->add_option("--theta1", theta1s, "Left polarizer angle (repeatable)");
  epr_cmd->add_option("--theta2", theta2s, "Right polarizer angle (repeatable)");
  epr_cmd->add_option("--chsh", chsh, "CHSH angles a a' b b'")->expected(4);
  epr_cmd->add_option("--time", epr_time, "Detection time (free flight with degenerate energies)");
  detail::add_stochastic(epr_cmd, common);
  epr_cmd->add_option("--out", common.out, "Output CSV (default stdout)");

  // doubleslit
  auto* ds = app.add_subcommand("doubleslit", "Double-slit intensity profiles");
  ds->footer(
      "closed: |sum_D p_j phi_j|^2; pairs: sum_{j,l in D} p_j p_l phi_j conj(phi_l);\n"
      "mc: two-process sampling, with stderr columns. Writes x and one intensity column per\n"
      "selected slit configuration (P_I, P_II, P_both).");
  std::string geometry_path, mode = "closed", slits = "all";
  ds->add_option("--geometry", geometry_path, "Geometry JSON file")->required();
  ds->add_option("--mode", mode, "closed | pairs | mc")
      ->check(CLI::IsMember({"closed", "pairs", "mc"}))
      ->capture_default_str();
  ds->add_option("--slits", slits, "I | II | both | all")
      ->check(CLI::IsMember({"I", "II", "both", "all"}))
      ->capture_default_str();
  detail::add_stochastic(ds, common);
  ds->add_option("--out", common.out, "Output CSV (default stdout)");

  // compare-exact
  auto* cmp = app.add_subcommand("compare-exact", "Ensemble estimate against the exact von Neumann solution");
  cmp->footer(
      "Writes per-entry z-scores and exits 3 if any |z| >= 5. With --ladder N1 N2 ... it\n"
      "instead writes the RMS error per N and the fitted log-log slope.");
  std::vector<double> times;
  std::vector<std::uint64_t> ladder;
  int replicas = ConvergenceOptions{}.replicas;
  cmp->add_option("--model", model_path, "Model JSON file")->required();
  cmp->add_option("--initial", initial_path, "Initial-state JSON file")->required();
  cmp->add_option("--time", times, "Evolution time(s)")->required();
  cmp->add_option("--ladder", ladder, "Trajectory counts for a convergence report");
  cmp->add_option("--replicas", replicas, "Independent replicas per ladder rung")->capture_default_str();
  detail::add_stochastic(cmp, common);
  cmp->add_option("--out", common.out, "Output CSV (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (amone->parsed()) {
      if (sweep) {
        detail::emit(common.out, csv::amone_sweep(sweep_points), out);
      } else {
        if (amone_model.empty()) throw ValidationError("amone-table: --model or --sweep required");
        const auto model = io::load_model(amone_model);
        JumpTableOptions topt;
        topt.regularize_singular = !literal;
        detail::emit(common.out, csv::amone_table(build_jump_table(model, topt)), out);
      }
    } else if (evolve->parsed()) {
      detail::check_trajectories(common);
      const auto model = io::load_model(model_path);
      const auto sampler = io::load_sampler(initial_path);
      const auto est = estimate_density(sampler, build_jump_table(model), time, detail::estimate_options(common));
      detail::report_diagnostics(est.diagnostics, err);
      detail::emit(common.out, csv::density(est), out);
    } else if (epr_cmd->parsed()) {
      detail::check_trajectories(common);
      if (!chsh.empty()) {
        const epr::ChshAngles angles{chsh[0], chsh[1], chsh[2], chsh[3]};
        const auto mc = epr::estimate_chsh(angles, epr_time, detail::estimate_options(common));
        out << "chsh_exact," << csv::num(epr::chsh_value(chsh[0], chsh[1], chsh[2], chsh[3])) << '\n'
            << "chsh_mc," << csv::num(mc.value) << '\n'
            << "chsh_mc_stderr," << csv::num(mc.stderr) << '\n';
      } else {
        if (theta1s.empty()) theta1s.push_back(0.0);
        if (theta2s.empty()) theta2s.push_back(0.0);
        const auto model = epr::model();
        const auto table = build_jump_table(model);
        const auto sampler = epr::initial_sampler();
        std::ostringstream os;
        os << "theta,kind,exact,mc_mean,mc_stderr\n";
        std::uint64_t index = 0;
        for (double t1 : theta1s) {
          for (double t2 : theta2s) {
            for (auto kind : epr::kAllOutcomes) {
              auto o = detail::estimate_options(common);
              o.seed = splitmix64(common.seed ^ splitmix64(index++));
              const auto est = estimate_observable(sampler, table, epr_time, epr::observable(kind, t1, t2), o);
              os << csv::num(epr::relative_angle(t1, t2)) << ',' << epr::name(kind) << ','
                 << csv::num(epr::exact_probability(kind, t1, t2)) << ',' << csv::num(est.mean) << ','
                 << csv::num(est.stderr) << '\n';
            }
          }
        }
        detail::emit(common.out, os.str(), out);
      }
    } else if (ds->parsed()) {
      const auto geom = io::load_geometry(geometry_path);
      std::vector<doubleslit::Slits> configs;
      if (slits == "all") {
        configs = {doubleslit::Slits::I, doubleslit::Slits::II, doubleslit::Slits::both};
      } else {
        configs = {slits == "I" ? doubleslit::Slits::I : slits == "II" ? doubleslit::Slits::II : doubleslit::Slits::both};
      }
      std::vector<std::string> header = {"x"};
      std::vector<std::vector<double>> columns = {geom.bin_centers};
      std::vector<std::vector<double>> errors;
      if (mode == "mc") detail::check_trajectories(common);
      for (std::size_t c = 0; c < configs.size(); ++c) {
        const auto g = geom.with_open(configs[c]);
        header.push_back("P_" + std::string(doubleslit::name(configs[c])));
        if (mode == "closed") {
          columns.push_back(doubleslit::closed_form_profile(g));
        } else if (mode == "pairs") {
          columns.push_back(doubleslit::pair_sum_profile(g));
        } else {
          const auto mc = doubleslit::mc_profile(g, common.trajectories, splitmix64(common.seed ^ c), common.threads);
          std::vector<double> mean, se;
          for (const auto& b : mc) {
            mean.push_back(b.mean);
            se.push_back(b.stderr);
          }
          columns.push_back(std::move(mean));
          errors.push_back(std::move(se));
        }
      }
      for (std::size_t c = 0; c < errors.size(); ++c) {
        header.push_back("stderr_" + std::string(doubleslit::name(configs[c])));
        columns.push_back(std::move(errors[c]));
      }
      detail::emit(common.out, csv::table(header, columns), out);
    } else if (cmp->parsed()) {
      detail::check_trajectories(common);
      const auto model = io::load_model(model_path);
      const auto sampler = io::load_sampler(initial_path);
      if (!ladder.empty()) {
        ConvergenceOptions copt;
        copt.ladder = ladder;
        copt.replicas = replicas;
        copt.seed = common.seed;
        copt.threads = common.threads;
        for (double t : times) {
          const auto rep = convergence_report(model, sampler, t, copt);
          detail::emit(common.out, csv::convergence(rep), out);
          err << "t " << csv::num(t) << ": "
              << (rep.exact ? std::string("exact (errors at rounding level)") : "slope " + csv::num(rep.slope))
              << '\n';
        }
        return kOk;
      }
      std::vector<CompareReport> reports;
      for (double t : times) {
        reports.push_back(compare_exact(model, sampler, t, detail::estimate_options(common)));
      }
      detail::emit(common.out, csv::compare(reports), out);
      bool pass = true;
      for (const auto& r : reports) {
        const auto& w = r.entries[r.worst];
        err << "t " << csv::num(r.time) << ": max |z| " << csv::num(r.max_abs_z) << " at (" << w.row << ","
            << w.col << "), trace z " << csv::num(r.trace_z) << ", seed " << r.seed << ", aborted pairs "
            << r.estimate.diagnostics.aborted_pairs << (r.pass ? " PASS" : " FAIL") << '\n';
        pass = pass && r.pass;
      }
      if (!pass) return kStatistical;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace braket::cli

#endif  // BRAKET_CLI_HPP
