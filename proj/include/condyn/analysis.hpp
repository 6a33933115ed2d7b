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

#ifndef CONDYN_ANALYSIS_HPP
#define CONDYN_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condyn/core.hpp"
#include "condyn/dynamics.hpp"
#include "condyn/oracle.hpp"
#include "condyn/rng.hpp"
#include "condyn/trajectories.hpp"

namespace condyn {

// ---------------------------------------------------------------------------
// Settling and agreement over trajectories.

/// A trajectory settles at the first step with |a_sup| >= hi after which |a_sup| never drops below lo.
struct SettlingThresholds {
    double hi = 0.99;
    double lo = 0.9;
    void validate() const;
};

/// Streaming form of settling_time: feed steps in order, read result() at the end.
class PersistenceTracker {
   public:
    /// `enter` starts a candidate; `stay` false cancels it.
    void observe(std::int64_t step, bool enter, bool stay) {
        if (!stay) {
            candidate_.reset();
        } else if (!candidate_ && enter) {
            candidate_ = step;
        }
    }
    std::optional<std::int64_t> result() const { return candidate_; }

   private:
    std::optional<std::int64_t> candidate_;
};

std::optional<std::int64_t> settling_time(const Trajectory &traj, double hi, double lo);

/// Sign with 0 meaning "no opinion".
int opinion(double a);
/// Supervisor and both observers hold the same nonzero sign.
bool three_way_agree(const TrajectoryPoint &p);

struct AgreementReport {
    double fraction_all_agree_final = 0.0;
    /// Fraction of trajectories agreeing at each logged step (index 0 is step 1).
    std::vector<double> curve;
    /// Mean first step of persistent agreement among trajectories agreeing at the end; empty if none do.
    std::optional<double> mean_steps_to_agreement;
};

AgreementReport agreement_report(const std::vector<Trajectory> &ensemble);

/// Worst invariant margins seen over every state of a trajectory.
struct StateAudit {
    std::int64_t states_checked = 0;
    double min_diagonal = 1.0;
    double min_determinant = 0.25;
    double max_trace_error = 0.0;
    double max_hermiticity_error = 0.0;

    void observe(const DensityMatrix &rho);
    void merge(const StateAudit &other);
    /// True when every checked state satisfies the DensityMatrix invariants at kInvariantTol.
    bool ok() const;
};

struct TrajectorySummary {
    std::uint64_t index = 0;
    std::optional<std::int64_t> settling_step;
    std::optional<std::int64_t> agreement_step;
    bool final_agree = false;
    double final_a_sup = 0.0;
    double final_a_obs1 = 0.0;
    double final_a_obs2 = 0.0;
    /// Record pairs with n1 != n2.
    std::int64_t disagreeing_records = 0;
    /// Steps after step 1 at which the supervisor state was not pure (purity < 1 - 1e-12).
    std::int64_t impure_after_first = 0;
    /// |a_sup| reached 1 and later fell below 1 - kInvariantTol (rounding residue is not a departure).
    bool left_absorbing_state = false;
    StateAudit audit;
};

struct SettlingStats {
    std::int64_t count = 0;
    std::int64_t settled = 0;
    std::int64_t censored = 0;
    std::int64_t horizon = 0;
    /// Mean over settled trajectories only.
    std::optional<double> mean_settled;
    std::optional<double> stderr_settled;
    /// Censored trajectories counted at the horizon (a lower bound).
    double mean_with_censored = 0.0;
};

struct EnsembleSummary {
    TrajectoryConfig config;
    SettlingThresholds thresholds;
    std::vector<TrajectorySummary> trajectories;
    AgreementReport agreement;
    SettlingStats settling;
    /// Per-step ensemble mean of a_sup and its sample standard deviation.
    std::vector<double> mean_a_sup;
    std::vector<double> sd_a_sup;
    StateAudit audit;
};

/// Runs `count` trajectories without storing them (OpenMP across members).
EnsembleSummary summarize_ensemble(const TrajectoryConfig &config, std::int64_t count,
                                   SettlingThresholds thresholds = {});
/// Serial reference for summarize_ensemble.
EnsembleSummary summarize_ensemble_serial(const TrajectoryConfig &config, std::int64_t count,
                                          SettlingThresholds thresholds = {});

SettlingStats settling_stats(const std::vector<TrajectorySummary> &summaries, std::int64_t horizon);

// ---------------------------------------------------------------------------
// Power-law fit of settling time against epsilon.

struct ScalingResult {
    std::vector<double> epsilons;
    std::vector<double> mean_settling_steps;
    double fitted_exponent = 0.0;
    double fitted_log_prefactor = 0.0;
    /// Root-mean-square residual of log(mean_steps) around the fitted line.
    double fit_residual = 0.0;
};

/// Unweighted least squares of log(mean_steps) against log(epsilon).
ScalingResult scaling_fit(const std::vector<std::pair<double, double>> &points);

// ---------------------------------------------------------------------------
// Exact identities checked by enumeration. Each returns the largest deviation found.

inline constexpr int kMaxCheckSteps = 6;

/// Oracle branch probabilities and states against iterated outcome_probability / mocme_update.
double oracle_equivalence_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps,
                                const DensityMatrix *dynamics_rho0 = nullptr);
/// Probability-weighted average of the enumerated conditional states against iterated ume_step.
double ume_recovery_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps);
/// For every enumerated prefix up to steps-1, the oracle's one-step expectation of the polarization
/// against the prefix polarization.
double martingale_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps);
/// Observer 1's string distribution under two choices of observer 2's axis.
double marginal_independence_check(const DensityMatrix &rho0, const MeasurementAxis &axis1,
                                   const MeasurementAxis &axis2a, const MeasurementAxis &axis2b, int steps);
/// socme_update against the conditional average of mocme_update over n2, for ume_step(rho).
double socme_marginal_check(const DensityMatrix &rho, const ObserverPair &obs);
/// Observer 1's enumerated string distribution against the single-observer generator.
double generator_equivalence_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps);

/// String probabilities produced by iterating socme_update with single_observer_probability.
/// Indexed like observer1_marginal.
std::vector<double> socme_string_distribution(const DensityMatrix &rho0, double z_alpha, int steps);

// ---------------------------------------------------------------------------
// Random instances.

/// Uniform over the Bloch ball.
DensityMatrix random_density_matrix(CounterRng &rng);
/// Uniform over the unit sphere.
MeasurementAxis random_axis(CounterRng &rng);

struct CheckResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 1e-10;
    bool passed() const { return max_deviation <= tolerance; }
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    int instances = 100;
    int steps = 4;
    /// Mixes 1e-6 of |1><1| into the state fed to the dynamics side of the oracle comparison.
    bool inject_fault = false;
};

std::vector<CheckResult> run_verification(const VerifyOptions &options);

}  // namespace condyn

#endif  // CONDYN_ANALYSIS_HPP
