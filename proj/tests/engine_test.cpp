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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "braket/engine.hpp"
#include "braket/epr.hpp"
#include "support.hpp"

namespace braket {
namespace {

constexpr double kBand = 5.0;

JumpTable literal_table(const HamiltonianModel& model) {
  JumpTableOptions o;
  o.regularize_singular = false;
  return build_jump_table(model, o);
}

void expect_density_within(const DensityEstimate& est, const ComplexMatrix& exact, double band = kBand) {
  for (Eigen::Index l = 0; l < exact.rows(); ++l) {
    for (Eigen::Index m = 0; m < exact.cols(); ++m) {
      EXPECT_LE(std::abs(est.mean(l, m).real() - exact(l, m).real()), band * est.stderr_re(l, m) + 1e-14)
          << "re (" << l << "," << m << ")";
      EXPECT_LE(std::abs(est.mean(l, m).imag() - exact(l, m).imag()), band * est.stderr_im(l, m) + 1e-14)
          << "im (" << l << "," << m << ")";
    }
  }
}

TEST(Sampler, PointMass) {
  const std::vector<Complex> a = {1.0, 0.0};
  const auto s = sampler_from_amplitudes(a);
  ASSERT_EQ(s.support().size(), 1u);
  EXPECT_EQ(s.support()[0].index, 0u);
  EXPECT_EQ(s.support()[0].value, Complex(1.0, 0.0));
  RandomStream rng(0, 0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(s.draw(rng).index, 0u);
}

TEST(Sampler, SingletAmplitudes) {
  const double r = 1.0 / std::numbers::sqrt2;
  const std::vector<Complex> a = {r, -r};
  const auto s = sampler_from_amplitudes(a, std::vector<double>{0.5, 0.5});
  ASSERT_EQ(s.support().size(), 2u);
  EXPECT_NEAR(std::abs(s.support()[0].value - std::numbers::sqrt2), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.support()[1].value + std::numbers::sqrt2), 0.0, 1e-15);
  EXPECT_LT((s.mean_density().entries() - epr::singlet_density().entries()).norm(), 1e-15);
}

TEST(Sampler, ExactExpectationIsOuterProduct) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXcd a(5);
    for (Eigen::Index i = 0; i < 5; ++i) a(i) = {normal(rng), normal(rng)};
    a.normalize();
    const std::vector<Complex> amps(a.data(), a.data() + 5);
    const auto s = sampler_from_amplitudes(amps);
    // Direct sum over the finite support of independent bra/ket draws.
    ComplexMatrix expected = ComplexMatrix::Zero(5, 5);
    for (const auto& k : s.support()) {
      for (const auto& b : s.support()) {
        expected(static_cast<Eigen::Index>(k.index), static_cast<Eigen::Index>(b.index)) +=
            k.probability * b.probability * k.value * std::conj(b.value);
      }
    }
    EXPECT_LT((expected - a * a.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Sampler, ExtremeWeightsFallBackToUniform) {
  const double tiny = 1e-4;
  const std::vector<Complex> a = {std::sqrt(1.0 - tiny * tiny), tiny};
  const auto s = sampler_from_amplitudes(a);
  EXPECT_DOUBLE_EQ(s.support()[0].probability, 0.5);
  EXPECT_DOUBLE_EQ(s.support()[1].probability, 0.5);
  EXPECT_LT((s.mean_vector() - Eigen::Vector2cd(a[0], a[1])).norm(), 1e-15);
}

TEST(Sampler, Rejections) {
  const std::vector<Complex> a = {1.0, 0.0};
  EXPECT_THROW(sampler_from_amplitudes(a, std::vector<double>{0.5, 0.5}), ValidationError);
  const std::vector<Complex> b = {0.6, 0.8};
  EXPECT_THROW(sampler_from_amplitudes(b, std::vector<double>{0.5, 0.6}), ValidationError);
  EXPECT_THROW(sampler_from_amplitudes(b, std::vector<double>{1.0, 0.0}), ValidationError);
  const std::vector<Complex> c = {1.0, 1.0};
  EXPECT_THROW(sampler_from_amplitudes(c), ValidationError);
}

TEST(FreePhase, Examples) {
  ModelData d{2, 1.0, {0.0, 1.0}, ComplexMatrix::Zero(2, 2)};
  const auto table = build_jump_table(validate_model(d));
  const ProcessState s0{0, Complex(0.3, -0.4), 0.0};
  const auto a = free_phase(s0, 2.5, table);
  EXPECT_EQ(a.amplitude, s0.amplitude);
  EXPECT_EQ(a.time, 2.5);

  const ProcessState s1{1, Complex(0.3, -0.4), 1.0};
  const auto full = free_phase(s1, 2.0 * std::numbers::pi, table);
  EXPECT_NEAR(std::abs(full.amplitude - s1.amplitude), 0.0, 1e-15);
  const auto half = free_phase(s1, std::numbers::pi, table);
  EXPECT_NEAR(std::abs(half.amplitude + s1.amplitude), 0.0, 1e-15);
  EXPECT_EQ(half.index, 1u);
}

TEST(NextJumpTime, ExponentialMeanAndSurvival) {
  const double omega = 2.5;
  const auto table = literal_table(testing::rabi_model(omega));
  const double r = table.column(0).rate;
  RandomStream rng(3, 0);
  const int n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  int survived = 0;
  for (int i = 0; i < n; ++i) {
    const double tau = next_jump_time(ProcessState{}, table, rng);
    sum += tau;
    sumsq += tau * tau;
    survived += tau > 1.0 / r;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  EXPECT_NEAR(mean, 1.0 / r, kBand * se);
  const double p = std::exp(-1.0);
  EXPECT_NEAR(static_cast<double>(survived) / n, p, kBand * std::sqrt(p * (1 - p) / n));

  ModelData d{1, 1.0, {0.0}, ComplexMatrix::Zero(1, 1)};
  const auto still = build_jump_table(validate_model(d));
  EXPECT_TRUE(std::isinf(next_jump_time(ProcessState{}, still, rng)));
}

TEST(ApplyJump, SingleTargetColumn) {
  const auto table = literal_table(testing::rabi_model(1.0));
  RandomStream rng(0, 0);
  for (int i = 0; i < 100; ++i) {
    const auto s = apply_jump(ProcessState{0, Complex(2.0, 0.0), 0.5}, table, rng);
    EXPECT_EQ(s.index, 1u);
    EXPECT_EQ(s.amplitude, Complex(0.0, -2.0));
    EXPECT_EQ(s.time, 0.5);
  }
}

TEST(ApplyJump, TargetFrequenciesAndMagnitudes) {
  std::mt19937_64 gen(8);
  const auto model = testing::random_model(gen, 5);
  const auto table = build_jump_table(model);
  const auto& col = table.column(2);
  RandomStream rng(11, 0);
  const int n = 1000000;
  std::vector<int> counts(5, 0);
  const ProcessState s0{2, Complex(1.0, 0.0), 0.0};
  for (int i = 0; i < n; ++i) {
    const auto s = apply_jump(s0, table, rng);
    ++counts[s.index];
    if (s.index != 2) {
      ASSERT_NEAR(std::abs(s.amplitude), col.S, 1e-15);
    }
  }
  for (std::size_t l = 0; l < 5; ++l) {
    const double p = col.probs[l];
    EXPECT_NEAR(static_cast<double>(counts[l]) / n, p, kBand * std::sqrt(p * (1 - p) / n) + 1e-15) << l;
  }
}

TEST(EvolveProcess, NoRatesMeansPurePhase) {
  ModelData d{2, 1.0, {0.7, -0.2}, ComplexMatrix::Zero(2, 2)};
  const auto table = build_jump_table(validate_model(d));
  RandomStream rng(0, 0);
  const auto t = evolve_process({1, Complex(1.0, 0.0), 0.0}, table, 3.0, rng);
  EXPECT_EQ(t.jumps, 0u);
  EXPECT_EQ(t.state.index, 1u);
  EXPECT_EQ(t.state.time, 3.0);
  EXPECT_NEAR(std::abs(t.state.amplitude - std::polar(1.0, 0.6)), 0.0, 1e-15);
}

TEST(EvolveProcess, PoissonJumpCount) {
  // Every column of the literal Rabi table has rate omega.
  const double omega = 1.5, t_end = 2.0;
  const auto table = literal_table(testing::rabi_model(omega));
  const int runs = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < runs; ++i) {
    RandomStream rng(4, static_cast<std::uint64_t>(i));
    const auto t = evolve_process({0, Complex(1.0, 0.0), 0.0}, table, t_end, rng);
    sum += static_cast<double>(t.jumps);
    sumsq += static_cast<double>(t.jumps * t.jumps);
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sumsq / runs - mean * mean) / runs);
  EXPECT_NEAR(mean, omega * t_end, kBand * se);
}

TEST(EvolveProcess, DeterministicPerStream) {
  std::mt19937_64 gen(1);
  const auto table = build_jump_table(testing::random_model(gen, 4));
  RandomStream a(77, 5, Side::bra), b(77, 5, Side::bra);
  const auto x = evolve_process({1, Complex(1.0, 0.0), 0.0}, table, 4.0, a);
  const auto y = evolve_process({1, Complex(1.0, 0.0), 0.0}, table, 4.0, b);
  EXPECT_EQ(x.state.index, y.state.index);
  EXPECT_EQ(x.state.amplitude, y.state.amplitude);
  EXPECT_EQ(x.jumps, y.jumps);
}

TEST(EvolveProcess, RejectsBackwardTimeAndAbortsOnOverflow) {
  auto table = literal_table(testing::rabi_model(1.0));
  RandomStream rng(0, 0);
  EXPECT_THROW(evolve_process({0, Complex(1.0, 0.0), 2.0}, table, 1.0, rng), ValidationError);
  table.mutable_column(0).factors[1] = 1e60;
  table.mutable_column(1).factors[0] = 1e60;
  const auto t = evolve_process({0, Complex(1.0, 0.0), 0.0}, table, 100.0, rng);
  EXPECT_TRUE(t.aborted);
}

TEST(EstimateDensity, PointMassWithoutInteractionIsExact) {
  ModelData d{2, 1.0, {0.4, 1.1}, ComplexMatrix::Zero(2, 2)};
  const auto table = build_jump_table(validate_model(d));
  const std::vector<Complex> a = {1.0, 0.0};
  const auto est = estimate_density(sampler_from_amplitudes(a), table, 2.7, {1000, 1, 1});
  EXPECT_NEAR(std::abs(est.mean(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(est.mean(1, 1), Complex(0.0, 0.0));
  EXPECT_EQ(est.stderr_re.maxCoeff(), 0.0);
  EXPECT_EQ(est.stderr_im.maxCoeff(), 0.0);
}

TEST(EstimateDensity, RabiAgainstExactIntegrator) {
  const double omega = 1.0;
  const auto model = testing::rabi_model(omega);
  const auto table = build_jump_table(model);
  const std::vector<Complex> a = {1.0, 0.0};
  const auto sampler = sampler_from_amplitudes(a);
  for (double t : {0.3, 0.6}) {
    const auto est = estimate_density(sampler, table, t, {100000, 21});
    expect_density_within(est, exact_evolve(sampler.mean_density(), model, t).entries());
    EXPECT_NEAR(est.trace.real(), 1.0, kBand * est.trace_stderr_re);
    EXPECT_EQ(est.diagnostics.aborted_pairs, 0u);
  }
}

TEST(EstimateDensity, SingletAtTimeZero) {
  const auto table = build_jump_table(epr::model());
  const auto est = estimate_density(epr::initial_sampler(), table, 0.0, {100000, 2});
  expect_density_within(est, epr::singlet_density().entries());
}

TEST(EstimateDensity, Rejections) {
  const auto table = build_jump_table(testing::rabi_model(1.0));
  const std::vector<Complex> a = {1.0, 0.0};
  const auto s = sampler_from_amplitudes(a);
  EXPECT_THROW(estimate_density(s, table, 1.0, {1, 0}), ValidationError);
  const std::vector<Complex> b = {1.0, 0.0, 0.0};
  EXPECT_THROW(estimate_density(sampler_from_amplitudes(b), table, 1.0, {10, 0}), ValidationError);
}

TEST(EstimateDensity, IndependentOfThreadCount) {
  std::mt19937_64 gen(12);
  const auto model = testing::random_model(gen, 3);
  const auto table = build_jump_table(model);
  const std::vector<Complex> a = {0.6, Complex(0.0, 0.8), 0.0};
  const auto s = sampler_from_amplitudes(a);
  const auto one = estimate_density(s, table, 0.5, {20000, 9, 1});
  for (unsigned threads : {2u, 4u, 8u}) {
    const auto many = estimate_density(s, table, 0.5, {20000, 9, threads});
    EXPECT_TRUE(one.mean == many.mean);
    EXPECT_TRUE(one.stderr_re == many.stderr_re);
    EXPECT_TRUE(one.stderr_im == many.stderr_im);
  }
}

// Swapping which stream drives which side yields the adjoint estimate.
TEST(EstimateDensity, BraKetExchange) {
  std::mt19937_64 gen(4);
  const auto model = testing::random_model(gen, 3);
  const auto table = build_jump_table(model);
  const std::vector<Complex> a = {0.6, 0.0, Complex(0.0, -0.8)};
  const auto s = sampler_from_amplitudes(a);
  EstimateOptions o{50000, 13};
  const auto direct = estimate_density(s, table, 0.4, o);
  o.swap_sides = true;
  const auto swapped = estimate_density(s, table, 0.4, o);
  EXPECT_LT((swapped.mean - direct.mean.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(EstimateDensity, ShortTimeGenerator) {
  std::mt19937_64 gen(23);
  const auto model = testing::random_model(gen, 2, 1.0, 1.0);
  const auto table = build_jump_table(model);
  const std::vector<Complex> a = {1.0, 0.0};
  const auto s = sampler_from_amplitudes(a);
  const ComplexMatrix rho0 = s.mean_density().entries();
  const ComplexMatrix h = model.hamiltonian();
  const ComplexMatrix generator = Complex(0.0, -1.0 / model.hbar()) * (h * rho0 - rho0 * h);
  const double dt = 1e-3;
  const auto est = estimate_density(s, table, dt, {1000000, 5});
  // Second-order Taylor remainder of the exact flow bounds the bias.
  const double bias = 0.5 * dt * 4.0 * h.squaredNorm();
  for (Eigen::Index l = 0; l < 2; ++l) {
    for (Eigen::Index m = 0; m < 2; ++m) {
      const Complex slope = (est.mean(l, m) - rho0(l, m)) / dt;
      EXPECT_LE(std::abs(slope.real() - generator(l, m).real()), kBand * est.stderr_re(l, m) / dt + bias);
      EXPECT_LE(std::abs(slope.imag() - generator(l, m).imag()), kBand * est.stderr_im(l, m) / dt + bias);
    }
  }
}

// Per-pair weights are heavy tailed, so a single run's standard error is a
// rough guide. The spread of many run means is not.
TEST(EstimateDensity, PooledRunsAreUnbiased) {
  std::mt19937_64 gen(2026);
  const auto model = testing::random_model(gen, 4);
  const auto table = build_jump_table(model);
  const std::vector<Complex> a = {0.6, Complex(0.0, 0.48), 0.0, -0.64};
  const auto s = sampler_from_amplitudes(a);
  const ComplexMatrix exact = exact_evolve(s.mean_density(), model, 0.25).entries();
  const int runs = 40;
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  RealMatrix sumsq_re = RealMatrix::Zero(4, 4), sumsq_im = RealMatrix::Zero(4, 4);
  for (int r = 0; r < runs; ++r) {
    const auto est = estimate_density(s, table, 0.25, {50000, 300 + static_cast<std::uint64_t>(r)});
    sum += est.mean;
    sumsq_re += est.mean.real().cwiseAbs2();
    sumsq_im += est.mean.imag().cwiseAbs2();
  }
  for (Eigen::Index l = 0; l < 4; ++l) {
    for (Eigen::Index m = 0; m < 4; ++m) {
      const double se_re = standard_error(sum(l, m).real(), sumsq_re(l, m), runs);
      const double se_im = standard_error(sum(l, m).imag(), sumsq_im(l, m), runs);
      EXPECT_NEAR(sum(l, m).real() / runs, exact(l, m).real(), kBand * se_re + 1e-15) << l << "," << m;
      EXPECT_NEAR(sum(l, m).imag() / runs, exact(l, m).imag(), kBand * se_im + 1e-15) << l << "," << m;
    }
  }
}

TEST(EstimateDensity, DegenerateFreeFlightIsTimeIndependent) {
  const auto table = build_jump_table(epr::model(3.3));
  const auto s = epr::initial_sampler();
  const auto at0 = estimate_density(s, table, 0.0, {20000, 8});
  const auto later = estimate_density(s, table, 17.0, {20000, 8});
  EXPECT_LT((at0.mean - later.mean).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(EstimateObservable, IdentityProjectorAndImaginaryPart) {
  const double omega = 1.0;
  const auto model = testing::rabi_model(omega);
  const auto table = build_jump_table(model);
  const std::vector<Complex> a = {1.0, 0.0};
  const auto s = sampler_from_amplitudes(a);

  const auto trace = estimate_observable(s, table, 0.5, Observable::identity(2), {100000, 1});
  EXPECT_NEAR(trace.mean, 1.0, kBand * trace.stderr);

  const double t = 0.5;
  const auto p2 = estimate_observable(s, table, t, Observable::projector(2, 1), {100000, 2});
  EXPECT_NEAR(p2.mean, std::pow(std::sin(omega * t), 2), kBand * p2.stderr);

  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix g(2, 2);
    for (Eigen::Index i = 0; i < 4; ++i) g.data()[i] = {normal(gen), normal(gen)};
    const Observable obs(ComplexMatrix(g + g.adjoint()));
    const auto est = estimate_observable(s, table, 0.4, obs, {50000, 100 + static_cast<std::uint64_t>(rep)});
    EXPECT_LT(std::abs(est.imag_mean), kBand * est.imag_stderr + 1e-15);
  }
}

TEST(EstimateObservable, RejectsDimensionMismatch) {
  const auto table = build_jump_table(testing::rabi_model(1.0));
  const std::vector<Complex> a = {1.0, 0.0};
  EXPECT_THROW(estimate_observable(sampler_from_amplitudes(a), table, 0.1, Observable::identity(3), {10, 0}),
               ValidationError);
}

}  // namespace
}  // namespace braket
