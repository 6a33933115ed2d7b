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

#ifndef CONDYN_TRAJECTORIES_HPP
#define CONDYN_TRAJECTORIES_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "condyn/core.hpp"
#include "condyn/dynamics.hpp"
#include "condyn/rng.hpp"

namespace condyn {

enum class TrajectoryMode {
    /// Supervisor follows the exact conditional update, observers their exact single-observer update.
    exact,
    /// Polarizations follow the leading-order-in-eps difference equations.
    small_eps,
};

std::string to_string(TrajectoryMode mode);
TrajectoryMode parse_trajectory_mode(const std::string &token);

struct TrajectoryConfig {
    /// Exactly one of epsilon / axes is set. With epsilon both observers use (sqrt(1 - eps^2), 0, eps).
    std::optional<double> epsilon;
    std::optional<ObserverPair> axes;
    std::int64_t steps = 1;
    std::uint64_t seed = 0;
    DensityMatrix initial_rho = DensityMatrix::maximally_mixed();
    TrajectoryMode mode = TrajectoryMode::exact;

    /// Throws std::invalid_argument on an inconsistent config.
    void validate() const;
    ObserverPair observers() const;
};

struct TrajectoryPoint {
    std::int64_t step;
    Outcome n1;
    Outcome n2;
    double a_sup;
    double a_obs1;
    double a_obs2;
    double purity_sup;

    bool operator==(const TrajectoryPoint &) const = default;
};

struct Trajectory {
    TrajectoryConfig config;
    std::uint64_t index = 0;
    std::vector<TrajectoryPoint> points;
};

/// Per-step view handed to streaming consumers. States are empty in small-eps mode.
struct StepView {
    const TrajectoryPoint &point;
    const DensityMatrix *supervisor;
    const DensityMatrix *observer1;
    const DensityMatrix *observer2;
};
using StepSink = std::function<void(const StepView &)>;

/// Draws an outcome pair from probabilities in kOutcomePairs order using one uniform in [0, 1).
/// Small negative entries (>= -1e-9) are clamped and the table renormalized.
OutcomePair sample_outcome_pair(const std::array<double, 4> &probs, double uniform);
OutcomePair sample_outcome_pair(const std::array<double, 4> &probs, CounterRng &rng);

/// Runs trajectory `index` of the config's seed, streaming every step to `sink`.
void run_trajectory(const TrajectoryConfig &config, std::uint64_t index, const StepSink &sink);
Trajectory run_trajectory(const TrajectoryConfig &config, std::uint64_t index = 0);

/// Trajectories 0..count-1 (OpenMP across members).
std::vector<Trajectory> run_ensemble(const TrajectoryConfig &config, std::int64_t count);
/// Serial reference for run_ensemble.
std::vector<Trajectory> run_ensemble_serial(const TrajectoryConfig &config, std::int64_t count);

}  // namespace condyn

#endif  // CONDYN_TRAJECTORIES_HPP
