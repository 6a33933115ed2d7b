// Copyright 2026 The condyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "condyn/trajectories.hpp"

#include <cmath>

#include "gtest/gtest.h"

#include "condyn/analysis.hpp"

using namespace condyn;

namespace {

constexpr Outcome P = Outcome::plus;
constexpr Outcome M = Outcome::minus;

ObserverPair z_axes() { return {MeasurementAxis::z_axis(), MeasurementAxis::z_axis()}; }
ObserverPair x_axes() { return {MeasurementAxis::x_axis(), MeasurementAxis::x_axis()}; }

TrajectoryConfig make_config(double eps, std::int64_t steps, std::uint64_t seed = 1) {
    TrajectoryConfig c;
    c.epsilon = eps;
    c.steps = steps;
    c.seed = seed;
    return c;
}

TrajectoryConfig make_config(const ObserverPair &axes, std::int64_t steps, DensityMatrix rho, std::uint64_t seed = 1) {
    TrajectoryConfig c;
    c.axes = axes;
    c.steps = steps;
    c.seed = seed;
    c.initial_rho = rho;
    return c;
}

}  // namespace

TEST(trajectories, sample_outcome_pair_examples) {
    EXPECT_EQ(sample_outcome_pair({1, 0, 0, 0}, 0.999), (OutcomePair{P, P}));
    EXPECT_EQ(sample_outcome_pair({0, 0, 0, 1}, 0.0), (OutcomePair{M, M}));
    EXPECT_EQ(sample_outcome_pair({0.5, 0, 0, 0.5}, 0.25), (OutcomePair{P, P}));
    EXPECT_EQ(sample_outcome_pair({0.5, 0, 0, 0.5}, 0.75), (OutcomePair{M, M}));
    // Zero-probability outcomes are never drawn, even at the boundaries.
    EXPECT_EQ(sample_outcome_pair({0, 0.5, 0, 0.5}, 0.0), (OutcomePair{P, M}));
    EXPECT_EQ(sample_outcome_pair({0.5, 0.5, 0, 0}, 1.0 - 1e-16), (OutcomePair{P, M}));
    EXPECT_THROW(sample_outcome_pair({0.5, 0.5, 0.5, 0}, 0.1), std::invalid_argument);
    EXPECT_THROW(sample_outcome_pair({1.1, -0.1, 0, 0}, 0.1), std::invalid_argument);
}

TEST(trajectories, sample_outcome_pair_frequencies) {
    CounterRng rng(17, 0);
    const int n = 40000;
    std::array<int, 4> counts{};
    for (int i = 0; i < n; ++i) {
        rng.seek(static_cast<std::uint64_t>(i));
        ++counts[pair_index(sample_outcome_pair({0.25, 0.25, 0.25, 0.25}, rng))];
    }
    const double sigma = std::sqrt(n * 0.25 * 0.75);
    for (int c : counts) {
        EXPECT_NEAR(c, n * 0.25, 4 * sigma);
    }
}

TEST(trajectories, z_axes_collapse_at_first_step) {
    Trajectory t = run_trajectory(make_config(z_axes(), 5, DensityMatrix::maximally_mixed()));
    ASSERT_EQ(t.points.size(), 5u);
    double a = t.points[0].a_sup;
    EXPECT_EQ(std::abs(a), 1.0);
    for (const auto &p : t.points) {
        EXPECT_EQ(p.a_sup, a);
        EXPECT_EQ(p.a_obs1, a);
        EXPECT_EQ(p.a_obs2, a);
        EXPECT_EQ(p.n1, p.n2);
        EXPECT_EQ(p.purity_sup, 1.0);
    }
}

TEST(trajectories, zero_epsilon_is_constant) {
    DensityMatrix rho(0.6, Complex(0.1, 0.2), 0.4);
    for (auto cfg : {make_config(0.0, 200), make_config(x_axes(), 200, rho)}) {
        if (!cfg.epsilon) {
            cfg.initial_rho = rho;
        }
        Trajectory t = run_trajectory(cfg);
        double a0 = polarization(cfg.initial_rho);
        for (const auto &p : t.points) {
            EXPECT_EQ(p.a_sup, a0);
            EXPECT_EQ(p.a_obs1, a0);
            EXPECT_EQ(p.a_obs2, a0);
        }
    }
}

TEST(trajectories, small_epsilon_run_settles_together) {
    Trajectory t = run_trajectory(make_config(0.01, 50000, 7));
    const auto &last = t.points.back();
    EXPECT_GT(std::abs(last.a_sup), 0.99);
    EXPECT_EQ(opinion(last.a_sup), opinion(last.a_obs1));
    EXPECT_EQ(opinion(last.a_sup), opinion(last.a_obs2));
    EXPECT_GT(std::abs(last.a_obs1), 0.9);
}

TEST(trajectories, deterministic_per_index) {
    auto cfg = make_config(0.2, 300, 42);
    Trajectory a = run_trajectory(cfg, 5);
    Trajectory b = run_trajectory(cfg, 5);
    Trajectory c = run_trajectory(cfg, 6);
    EXPECT_EQ(a.points, b.points);
    EXPECT_NE(a.points, c.points);
}

TEST(trajectories, ensemble_parallel_matches_serial) {
    auto cfg = make_config(0.3, 100, 9);
    auto par = run_ensemble(cfg, 37);
    auto ser = run_ensemble_serial(cfg, 37);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        EXPECT_EQ(par[i].index, i);
        EXPECT_EQ(par[i].points, ser[i].points);
        EXPECT_EQ(par[i].points, run_trajectory(cfg, i).points);
    }
}

TEST(trajectories, born_statistics_z_axes) {
    auto cfg = make_config(z_axes(), 3, DensityMatrix::diagonal(0.3, 0.7), 11);
    const int n = 10000;
    auto ens = run_ensemble(cfg, n);
    int plus = 0;
    for (const auto &t : ens) {
        plus += t.points.back().a_sup > 0 ? 1 : 0;
    }
    EXPECT_NEAR(plus, 0.3 * n, 4 * std::sqrt(n * 0.3 * 0.7));
}

TEST(trajectories, martingale_in_sample_mean) {
    DensityMatrix rho = DensityMatrix::diagonal(0.6, 0.4);
    TrajectoryConfig cfg = make_config(0.15, 200, 3);
    cfg.initial_rho = rho;
    const int n = 2000;
    auto ens = run_ensemble(cfg, n);
    for (std::size_t step : {0u, 9u, 49u, 199u}) {
        double sum = 0, sum2 = 0;
        for (const auto &t : ens) {
            double a = t.points[step].a_sup;
            sum += a;
            sum2 += a * a;
        }
        double mean = sum / n;
        double se = std::sqrt((sum2 / n - mean * mean) / (n - 1));
        EXPECT_NEAR(mean, 0.2, 5 * se) << "step " << step + 1;
    }
}

TEST(trajectories, pointer_states_absorb) {
    TrajectoryConfig cfg = make_config(ObserverPair{MeasurementAxis(0.6, 0, 0.8), MeasurementAxis::from_z(0.3)}, 500,
                                       DensityMatrix::diagonal(0.5, 0.5), 4);
    for (std::uint64_t i = 0; i < 50; ++i) {
        bool absorbed = false;
        double held = 0;
        for (const auto &p : run_trajectory(cfg, i).points) {
            if (absorbed) {
                // |A| == 1 in floating point can hide a residual coherence of order 1e-17.
                EXPECT_NEAR(p.a_sup, held, 1e-12);
            } else if (std::abs(p.a_sup) == 1.0) {
                absorbed = true;
                held = p.a_sup;
            }
        }
    }
}

TEST(trajectories, exact_pointer_state_is_fixed) {
    TrajectoryConfig cfg = make_config(ObserverPair{MeasurementAxis(0.6, 0, 0.8), MeasurementAxis::from_z(0.3)}, 300,
                                       DensityMatrix::diagonal(0, 1), 4);
    for (std::uint64_t i = 0; i < 20; ++i) {
        run_trajectory(cfg, i, [](const StepView &v) {
            EXPECT_EQ(*v.supervisor, DensityMatrix::diagonal(0, 1));
            EXPECT_EQ(v.point.a_obs1, -1.0);
        });
    }
}

TEST(trajectories, z_axes_records_always_agree) {
    auto ens = run_ensemble(make_config(z_axes(), 20, DensityMatrix(0.4, Complex(0.2, 0.1), 0.6), 2), 500);
    for (const auto &t : ens) {
        for (const auto &p : t.points) {
            ASSERT_EQ(p.n1, p.n2);
        }
    }
}

TEST(trajectories, small_eps_mode) {
    TrajectoryConfig cfg = make_config(0.01, 2000, 5);
    cfg.mode = TrajectoryMode::small_eps;
    Trajectory t = run_trajectory(cfg);
    for (const auto &p : t.points) {
        EXPECT_LE(std::abs(p.a_sup), 1.0);
        EXPECT_NEAR(p.purity_sup, (1 + p.a_sup * p.a_sup) / 2, 1e-15);
    }
    TrajectoryConfig big = make_config(0.9, 10, 5);
    big.mode = TrajectoryMode::small_eps;
    big.initial_rho = DensityMatrix::diagonal(1, 0);
    EXPECT_THROW(run_trajectory(big), ParameterRange);

    TrajectoryConfig no_eps = make_config(z_axes(), 10, DensityMatrix::maximally_mixed());
    no_eps.mode = TrajectoryMode::small_eps;
    EXPECT_THROW(no_eps.validate(), std::invalid_argument);
}

TEST(trajectories, config_validation) {
    TrajectoryConfig both = make_config(0.1, 10);
    both.axes = z_axes();
    EXPECT_THROW(both.validate(), std::invalid_argument);
    TrajectoryConfig neither;
    EXPECT_THROW(neither.validate(), std::invalid_argument);
    EXPECT_THROW(make_config(1.5, 10).validate(), std::invalid_argument);
    EXPECT_THROW(make_config(0.1, 0).validate(), std::invalid_argument);
    EXPECT_EQ(parse_trajectory_mode("small-eps"), TrajectoryMode::small_eps);
    EXPECT_THROW(parse_trajectory_mode("fast"), std::invalid_argument);
}
