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

#include "condyn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <set>

namespace condyn {

namespace {

void check_enumeration_steps(int steps) {
    if (steps < 0) {
        throw std::invalid_argument("step count must be nonnegative");
    }
    if (steps > kMaxCheckSteps) {
        throw ResourceGuard("exact checks are limited to " + std::to_string(kMaxCheckSteps) + " steps");
    }
}

/// Accumulates everything the ensemble summary needs from one trajectory, step by step.
class SummaryBuilder {
   public:
    SummaryBuilder(std::uint64_t index, SettlingThresholds thresholds) : thresholds_(thresholds) {
        summary_.index = index;
    }

    void observe(const StepView &v) {
        const TrajectoryPoint &p = v.point;
        double mag = std::abs(p.a_sup);
        settling_.observe(p.step, mag >= thresholds_.hi, mag >= thresholds_.lo);
        bool agree = three_way_agree(p);
        agreement_.observe(p.step, agree, agree);
        summary_.final_agree = agree;
        summary_.final_a_sup = p.a_sup;
        summary_.final_a_obs1 = p.a_obs1;
        summary_.final_a_obs2 = p.a_obs2;
        if (p.n1 != p.n2) {
            ++summary_.disagreeing_records;
        }
        if (p.step > 1 && p.purity_sup < 1.0 - kInvariantTol) {
            ++summary_.impure_after_first;
        }
        if (absorbed_ && mag < 1.0 - kInvariantTol) {
            summary_.left_absorbing_state = true;
        }
        absorbed_ = absorbed_ || mag == 1.0;
        for (const DensityMatrix *rho : {v.supervisor, v.observer1, v.observer2}) {
            if (rho != nullptr) {
                summary_.audit.observe(*rho);
            }
        }
    }

    TrajectorySummary finish() {
        summary_.settling_step = settling_.result();
        summary_.agreement_step = agreement_.result();
        return summary_;
    }

   private:
    SettlingThresholds thresholds_;
    TrajectorySummary summary_;
    PersistenceTracker settling_;
    PersistenceTracker agreement_;
    bool absorbed_ = false;
};

/// Per-step sums for a contiguous block of trajectories, added in index order.
struct BlockSums {
    std::vector<double> sum_a;
    std::vector<double> sum_a2;
    std::vector<std::int64_t> agree;
    std::vector<TrajectorySummary> summaries;

    explicit BlockSums(std::size_t steps) : sum_a(steps, 0.0), sum_a2(steps, 0.0), agree(steps, 0) {}

    void run(const TrajectoryConfig &config, std::uint64_t index, SettlingThresholds thresholds) {
        SummaryBuilder builder(index, thresholds);
        run_trajectory(config, index, [&](const StepView &v) {
            auto s = static_cast<std::size_t>(v.point.step - 1);
            sum_a[s] += v.point.a_sup;
            sum_a2[s] += v.point.a_sup * v.point.a_sup;
            agree[s] += three_way_agree(v.point) ? 1 : 0;
            builder.observe(v);
        });
        summaries.push_back(builder.finish());
    }

    void merge(BlockSums &&other) {
        for (std::size_t s = 0; s < sum_a.size(); ++s) {
            sum_a[s] += other.sum_a[s];
            sum_a2[s] += other.sum_a2[s];
            agree[s] += other.agree[s];
        }
        for (auto &t : other.summaries) {
            summaries.push_back(std::move(t));
        }
    }
};

AgreementReport agreement_from(const std::vector<TrajectorySummary> &summaries, const std::vector<std::int64_t> &agree) {
    AgreementReport r;
    const auto n = static_cast<double>(summaries.size());
    r.curve.reserve(agree.size());
    for (auto c : agree) {
        r.curve.push_back(static_cast<double>(c) / n);
    }
    std::int64_t final_agree = 0;
    double step_sum = 0.0;
    for (const auto &t : summaries) {
        if (t.final_agree) {
            ++final_agree;
            step_sum += static_cast<double>(*t.agreement_step);
        }
    }
    r.fraction_all_agree_final = static_cast<double>(final_agree) / n;
    if (final_agree > 0) {
        r.mean_steps_to_agreement = step_sum / static_cast<double>(final_agree);
    }
    return r;
}

EnsembleSummary finish_summary(const TrajectoryConfig &config, SettlingThresholds thresholds, BlockSums &&sums) {
    EnsembleSummary out;
    out.config = config;
    out.thresholds = thresholds;
    const auto n = static_cast<double>(sums.summaries.size());
    out.mean_a_sup.resize(sums.sum_a.size());
    out.sd_a_sup.resize(sums.sum_a.size());
    for (std::size_t s = 0; s < sums.sum_a.size(); ++s) {
        double mean = sums.sum_a[s] / n;
        double var = n > 1 ? std::max(0.0, (sums.sum_a2[s] - n * mean * mean) / (n - 1)) : 0.0;
        out.mean_a_sup[s] = mean;
        out.sd_a_sup[s] = std::sqrt(var);
    }
    out.agreement = agreement_from(sums.summaries, sums.agree);
    out.settling = settling_stats(sums.summaries, config.steps);
    for (const auto &t : sums.summaries) {
        out.audit.merge(t.audit);
    }
    out.trajectories = std::move(sums.summaries);
    return out;
}

constexpr std::int64_t kBlockSize = 16;

}  // namespace

void SettlingThresholds::validate() const {
    if (!(lo > 0.0 && lo <= hi && hi <= 1.0)) {
        throw std::invalid_argument("settling thresholds must satisfy 0 < lo <= hi <= 1");
    }
}

std::optional<std::int64_t> settling_time(const Trajectory &traj, double hi, double lo) {
    SettlingThresholds{hi, lo}.validate();
    PersistenceTracker tracker;
    for (const auto &p : traj.points) {
        double mag = std::abs(p.a_sup);
        tracker.observe(p.step, mag >= hi, mag >= lo);
    }
    return tracker.result();
}

int opinion(double a) { return a > 0.0 ? 1 : (a < 0.0 ? -1 : 0); }

bool three_way_agree(const TrajectoryPoint &p) {
    int s = opinion(p.a_sup);
    return s != 0 && opinion(p.a_obs1) == s && opinion(p.a_obs2) == s;
}

AgreementReport agreement_report(const std::vector<Trajectory> &ensemble) {
    if (ensemble.empty()) {
        throw std::invalid_argument("agreement report needs a nonempty ensemble");
    }
    std::size_t steps = 0;
    for (const auto &t : ensemble) {
        steps = std::max(steps, t.points.size());
    }
    std::vector<std::int64_t> agree(steps, 0);
    std::vector<TrajectorySummary> summaries;
    summaries.reserve(ensemble.size());
    for (const auto &t : ensemble) {
        TrajectorySummary s;
        PersistenceTracker tracker;
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            bool a = three_way_agree(t.points[i]);
            agree[i] += a ? 1 : 0;
            tracker.observe(t.points[i].step, a, a);
            s.final_agree = a;
        }
        s.agreement_step = tracker.result();
        summaries.push_back(s);
    }
    return agreement_from(summaries, agree);
}

void StateAudit::observe(const DensityMatrix &rho) {
    ++states_checked;
    min_diagonal = std::min({min_diagonal, rho.r11(), rho.r00()});
    min_determinant = std::min(min_determinant, rho.determinant());
    max_trace_error = std::max(max_trace_error, std::abs(rho.trace() - 1.0));
    max_hermiticity_error = std::max(max_hermiticity_error, std::abs(rho.r01() - std::conj(rho.r10())));
}

void StateAudit::merge(const StateAudit &other) {
    states_checked += other.states_checked;
    min_diagonal = std::min(min_diagonal, other.min_diagonal);
    min_determinant = std::min(min_determinant, other.min_determinant);
    max_trace_error = std::max(max_trace_error, other.max_trace_error);
    max_hermiticity_error = std::max(max_hermiticity_error, other.max_hermiticity_error);
}

bool StateAudit::ok() const {
    return min_diagonal >= -kInvariantTol && min_determinant >= -kInvariantTol && max_trace_error <= kInvariantTol &&
           max_hermiticity_error <= kInvariantTol;
}

EnsembleSummary summarize_ensemble(const TrajectoryConfig &config, std::int64_t count, SettlingThresholds thresholds) {
    if (count < 1) {
        throw std::invalid_argument("ensemble count must be at least 1");
    }
    config.validate();
    thresholds.validate();
    const auto steps = static_cast<std::size_t>(config.steps);
    const std::int64_t blocks = (count + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> partial(static_cast<std::size_t>(blocks), BlockSums(0));
    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < blocks; ++b) {
        try {
            BlockSums sums(steps);
            for (std::int64_t i = b * kBlockSize; i < std::min(count, (b + 1) * kBlockSize); ++i) {
                sums.run(config, static_cast<std::uint64_t>(i), thresholds);
            }
            partial[static_cast<std::size_t>(b)] = std::move(sums);
        } catch (...) {
#pragma omp critical(condyn_summary_error)
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }

    BlockSums total(steps);
    for (auto &p : partial) {
        total.merge(std::move(p));
    }
    return finish_summary(config, thresholds, std::move(total));
}

EnsembleSummary summarize_ensemble_serial(const TrajectoryConfig &config, std::int64_t count,
                                          SettlingThresholds thresholds) {
    if (count < 1) {
        throw std::invalid_argument("ensemble count must be at least 1");
    }
    config.validate();
    thresholds.validate();
    BlockSums total(static_cast<std::size_t>(config.steps));
    for (std::int64_t i = 0; i < count; ++i) {
        total.run(config, static_cast<std::uint64_t>(i), thresholds);
    }
    return finish_summary(config, thresholds, std::move(total));
}

SettlingStats settling_stats(const std::vector<TrajectorySummary> &summaries, std::int64_t horizon) {
    SettlingStats st;
    st.count = static_cast<std::int64_t>(summaries.size());
    st.horizon = horizon;
    double sum = 0.0;
    double sum2 = 0.0;
    double sum_all = 0.0;
    for (const auto &t : summaries) {
        if (t.settling_step) {
            auto v = static_cast<double>(*t.settling_step);
            ++st.settled;
            sum += v;
            sum2 += v * v;
            sum_all += v;
        } else {
            ++st.censored;
            sum_all += static_cast<double>(horizon);
        }
    }
    if (st.settled > 0) {
        auto n = static_cast<double>(st.settled);
        double mean = sum / n;
        st.mean_settled = mean;
        double var = st.settled > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) : 0.0;
        st.stderr_settled = std::sqrt(var / n);
    }
    if (st.count > 0) {
        st.mean_with_censored = sum_all / static_cast<double>(st.count);
    }
    return st;
}

ScalingResult scaling_fit(const std::vector<std::pair<double, double>> &points) {
    if (points.size() < 3) {
        throw std::invalid_argument("scaling fit needs at least 3 points");
    }
    std::set<double> seen;
    for (const auto &[eps, steps] : points) {
        if (!(eps > 0.0) || !(steps > 0.0) || !std::isfinite(eps) || !std::isfinite(steps)) {
            throw std::invalid_argument("scaling fit needs positive finite epsilons and settling times");
        }
        if (!seen.insert(eps).second) {
            throw std::invalid_argument("scaling fit needs distinct epsilons");
        }
    }
    ScalingResult r;
    const auto n = static_cast<double>(points.size());
    double mx = 0.0;
    double my = 0.0;
    for (const auto &[eps, steps] : points) {
        r.epsilons.push_back(eps);
        r.mean_settling_steps.push_back(steps);
        mx += std::log(eps);
        my += std::log(steps);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto &[eps, steps] : points) {
        double dx = std::log(eps) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(steps) - my);
    }
    r.fitted_exponent = sxy / sxx;
    r.fitted_log_prefactor = my - r.fitted_exponent * mx;
    double ss = 0.0;
    for (const auto &[eps, steps] : points) {
        double res = std::log(steps) - (r.fitted_log_prefactor + r.fitted_exponent * std::log(eps));
        ss += res * res;
    }
    r.fit_residual = std::sqrt(ss / n);
    return r;
}

double oracle_equivalence_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps,
                                const DensityMatrix *dynamics_rho0) {
    check_enumeration_steps(steps);
    BranchDistribution dist = exact_joint_distribution(rho0, obs, steps);
    double dev = std::abs(dist.total_probability() - 1.0);
    for (const auto &b : dist.branches) {
        DensityMatrix rho = dynamics_rho0 != nullptr ? *dynamics_rho0 : rho0;
        double p = 1.0;
        for (const auto &r : b.records) {
            p *= outcome_probability(rho, obs, r.n1, r.n2);
            rho = mocme_update(rho, obs, r.n1, r.n2);
        }
        dev = std::max({dev, std::abs(p - b.probability), max_entry_diff(rho, b.state)});
    }
    return dev;
}

double ume_recovery_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps) {
    check_enumeration_steps(steps);
    BranchDistribution dist = exact_joint_distribution(rho0, obs, steps);
    double r11 = 0.0;
    double r00 = 0.0;
    Complex r10{};
    for (const auto &b : dist.branches) {
        r11 += b.probability * b.state.r11();
        r00 += b.probability * b.state.r00();
        r10 += b.probability * b.state.r10();
    }
    DensityMatrix expected = rho0;
    for (int s = 0; s < steps; ++s) {
        expected = ume_step(expected);
    }
    return std::max({std::abs(r11 - expected.r11()), std::abs(r00 - expected.r00()), std::abs(r10 - expected.r10())});
}

double martingale_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps) {
    check_enumeration_steps(steps);
    double dev = 0.0;
    for (int k = 0; k < steps; ++k) {
        for (const auto &b : exact_joint_distribution(rho0, obs, k).branches) {
            double expected_next = 0.0;
            for (const auto &next : exact_joint_distribution(b.state, obs, 1).branches) {
                expected_next += next.probability * polarization(next.state);
            }
            dev = std::max(dev, std::abs(expected_next - polarization(b.state)));
        }
    }
    return dev;
}

double marginal_independence_check(const DensityMatrix &rho0, const MeasurementAxis &axis1,
                                   const MeasurementAxis &axis2a, const MeasurementAxis &axis2b, int steps) {
    check_enumeration_steps(steps);
    auto ma = observer1_marginal(exact_joint_distribution(rho0, {axis1, axis2a}, steps));
    auto mb = observer1_marginal(exact_joint_distribution(rho0, {axis1, axis2b}, steps));
    double dev = 0.0;
    for (std::size_t i = 0; i < ma.size(); ++i) {
        dev = std::max(dev, std::abs(ma[i] - mb[i]));
    }
    return dev;
}

double socme_marginal_check(const DensityMatrix &rho, const ObserverPair &obs) {
    const DensityMatrix diag = ume_step(rho);
    double dev = 0.0;
    for (Outcome n1 : {Outcome::plus, Outcome::minus}) {
        double w = 0.0;
        double r11 = 0.0;
        double r00 = 0.0;
        Complex r10{};
        for (Outcome n2 : {Outcome::plus, Outcome::minus}) {
            double p = outcome_probability(diag, obs, n1, n2);
            if (p <= 0.0) {
                continue;
            }
            DensityMatrix post = mocme_update(diag, obs, n1, n2);
            w += p;
            r11 += p * post.r11();
            r00 += p * post.r00();
            r10 += p * post.r10();
        }
        if (w <= 0.0) {
            continue;
        }
        DensityMatrix s = socme_update(diag, obs.axis1.z(), n1);
        dev = std::max({dev, std::abs(r11 / w - s.r11()), std::abs(r00 / w - s.r00()), std::abs(r10 / w - s.r10())});
    }
    return dev;
}

std::vector<double> socme_string_distribution(const DensityMatrix &rho0, double z_alpha, int steps) {
    check_enumeration_steps(steps);
    std::vector<double> out(std::size_t{1} << steps, 0.0);
    // Depth-first over strings; index bit for step s is (steps-1-s), '-' = 1.
    struct Frame {
        DensityMatrix rho;
        double p;
        std::size_t code;
        int depth;
    };
    std::vector<Frame> stack{{rho0, 1.0, 0, 0}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.depth == steps) {
            out[f.code] += f.p;
            continue;
        }
        for (Outcome n : {Outcome::plus, Outcome::minus}) {
            double q = single_observer_probability(f.rho, z_alpha, n);
            if (q <= 0.0) {
                continue;
            }
            std::size_t code = f.code * 2 + (n == Outcome::plus ? 0 : 1);
            stack.push_back({socme_update(f.rho, z_alpha, n), f.p * q, code, f.depth + 1});
        }
    }
    return out;
}

double generator_equivalence_check(const DensityMatrix &rho0, const ObserverPair &obs, int steps) {
    check_enumeration_steps(steps);
    auto oracle = observer1_marginal(exact_joint_distribution(rho0, obs, steps));
    auto generator = socme_string_distribution(rho0, obs.axis1.z(), steps);
    double dev = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        dev = std::max(dev, std::abs(oracle[i] - generator[i]));
    }
    return dev;
}

DensityMatrix random_density_matrix(CounterRng &rng) {
    MeasurementAxis dir = random_axis(rng);
    double r = std::cbrt(rng.uniform());
    return {(1.0 + r * dir.z()) / 2.0, Complex(r * dir.x() / 2.0, -r * dir.y() / 2.0), (1.0 - r * dir.z()) / 2.0};
}

MeasurementAxis random_axis(CounterRng &rng) {
    double z = 2.0 * rng.uniform() - 1.0;
    double phi = 2.0 * std::numbers::pi * rng.uniform();
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return MeasurementAxis::normalized(s * std::cos(phi), s * std::sin(phi), z);
}

std::vector<CheckResult> run_verification(const VerifyOptions &options) {
    check_enumeration_steps(options.steps);
    if (options.instances < 1) {
        throw std::invalid_argument("verification needs at least one instance");
    }
    std::vector<CheckResult> results = {
        {"oracle-equivalence"}, {"ume-recovery"}, {"martingale"}, {"socme-as-marginal"},
        {"marginal-independence"}, {"generator-equivalence"},
    };
    auto bump = [&](std::size_t i, double d) { results[i].max_deviation = std::max(results[i].max_deviation, d); };
    for (int i = 0; i < options.instances; ++i) {
        CounterRng rng(options.seed, static_cast<std::uint64_t>(i));
        DensityMatrix rho = random_density_matrix(rng);
        ObserverPair obs{random_axis(rng), random_axis(rng)};
        MeasurementAxis other = random_axis(rng);
        if (options.inject_fault) {
            constexpr double d = 1e-6;
            DensityMatrix faulty((1.0 - d) * rho.r11() + d, (1.0 - d) * rho.r10(), (1.0 - d) * rho.r00());
            bump(0, oracle_equivalence_check(rho, obs, options.steps, &faulty));
        } else {
            bump(0, oracle_equivalence_check(rho, obs, options.steps));
        }
        bump(1, ume_recovery_check(rho, obs, options.steps));
        bump(2, martingale_check(rho, obs, options.steps));
        bump(3, socme_marginal_check(rho, obs));
        bump(4, marginal_independence_check(rho, obs.axis1, obs.axis2, other, options.steps));
        bump(5, generator_equivalence_check(rho, obs, options.steps));
    }
    return results;
}

}  // namespace condyn
