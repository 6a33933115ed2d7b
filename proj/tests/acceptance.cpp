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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "condyn/analysis.hpp"
#include "condyn/io.hpp"
#include "condyn/oracle.hpp"
#include "condyn/trajectories.hpp"

using namespace condyn;

namespace {

constexpr int kInstances = 100;
constexpr int kSteps = 4;
constexpr double kExactTol = 1e-10;

struct CriterionResult {
    bool pass;
    std::string detail;
};

/// States sampled in criteria 4-7, checked together in criterion 10.
StateAudit g_audit;

std::string fmt(double v) { return format_double(v); }

template <typename F>
double max_over_instances(std::uint64_t stream, F &&f) {
    CounterRng rng(20260101, stream);
    double worst = 0.0;
    for (int i = 0; i < kInstances; ++i) {
        DensityMatrix rho = random_density_matrix(rng);
        ObserverPair obs{random_axis(rng), random_axis(rng)};
        worst = std::max(worst, f(rho, obs, rng));
    }
    return worst;
}

CriterionResult criterion_1() {
    double worst = 0.0;
    for (int steps = 1; steps <= kSteps; ++steps) {
        worst = std::max(worst, max_over_instances(1, [&](const DensityMatrix &rho, const ObserverPair &obs,
                                                          CounterRng &) { return oracle_equivalence_check(rho, obs, steps); }));
    }
    return {worst <= kExactTol, "max deviation " + fmt(worst) + " over " + std::to_string(kInstances) +
                                    " instances x steps 1.." + std::to_string(kSteps)};
}

CriterionResult criterion_2() {
    double worst = 0.0;
    for (int steps = 1; steps <= kSteps; ++steps) {
        worst = std::max(worst, max_over_instances(2, [&](const DensityMatrix &rho, const ObserverPair &obs,
                                                          CounterRng &) { return ume_recovery_check(rho, obs, steps); }));
    }
    return {worst <= kExactTol, "max deviation " + fmt(worst)};
}

CriterionResult criterion_3() {
    double worst = max_over_instances(
        3, [](const DensityMatrix &rho, const ObserverPair &obs, CounterRng &) { return martingale_check(rho, obs, kSteps); });
    return {worst <= kExactTol, "max |E[A_next | records] - A| " + fmt(worst)};
}

CriterionResult criterion_4() {
    const std::int64_t count = 10000;
    const double rho11 = 0.3;
    TrajectoryConfig cfg;
    cfg.axes = ObserverPair{MeasurementAxis::z_axis(), MeasurementAxis::z_axis()};
    cfg.steps = 20;
    cfg.seed = 4;
    cfg.initial_rho = DensityMatrix(rho11, Complex(0.2, -0.3), 1 - rho11);
    std::int64_t mismatched = 0;
    std::int64_t impure = 0;
    std::int64_t plus = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        run_trajectory(cfg, static_cast<std::uint64_t>(i), [&](const StepView &v) {
            mismatched += v.point.n1 != v.point.n2 ? 1 : 0;
            impure += purity(*v.supervisor) < 1.0 - kInvariantTol ? 1 : 0;
            for (const DensityMatrix *rho : {v.supervisor, v.observer1, v.observer2}) {
                g_audit.observe(*rho);
            }
            if (v.point.step == cfg.steps && v.point.a_sup > 0) {
                ++plus;
            }
        });
    }
    const double n = static_cast<double>(count);
    const double sigma = std::sqrt(n * rho11 * (1 - rho11));
    const double z = (static_cast<double>(plus) - n * rho11) / sigma;
    bool pass = mismatched == 0 && impure == 0 && std::abs(z) <= 4.0;
    return {pass, "N1!=N2 steps " + std::to_string(mismatched) + ", impure supervisor steps " + std::to_string(impure) +
                      ", +1 fraction " + fmt(plus / n) + " (" + fmt(z) + " sigma from " + fmt(rho11) + ")"};
}

CriterionResult criterion_5() {
    TrajectoryConfig cfg;
    cfg.axes = ObserverPair{MeasurementAxis::x_axis(), MeasurementAxis::x_axis()};
    cfg.steps = 1000;
    cfg.seed = 5;
    cfg.initial_rho = DensityMatrix(0.65, Complex(-0.1, 0.25), 0.35);
    const double a0 = polarization(cfg.initial_rho);
    std::int64_t changed = 0;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        run_trajectory(cfg, i, [&](const StepView &v) {
            const auto &p = v.point;
            changed += (p.a_sup != a0 || p.a_obs1 != a0 || p.a_obs2 != a0) ? 1 : 0;
            for (const DensityMatrix *rho : {v.supervisor, v.observer1, v.observer2}) {
                g_audit.observe(*rho);
            }
        });
    }
    return {changed == 0, "steps with any polarization != initial " + fmt(a0) + ": " + std::to_string(changed) +
                              " of 10^6"};
}

CriterionResult criterion_6() {
    std::vector<std::pair<double, double>> points;
    std::ostringstream detail;
    bool all_settled = true;
    for (double eps : {0.05, 0.1, 0.2}) {
        TrajectoryConfig cfg;
        cfg.epsilon = eps;
        cfg.steps = 20000;
        cfg.seed = 6;
        EnsembleSummary s = summarize_ensemble(cfg, 1000);
        g_audit.merge(s.audit);
        all_settled = all_settled && s.settling.censored == 0 && s.settling.mean_settled.has_value();
        double mean = s.settling.mean_settled.value_or(static_cast<double>(cfg.steps));
        points.emplace_back(eps, mean);
        detail << "eps " << fmt(eps) << ": mean " << fmt(mean) << " (censored " << s.settling.censored << "); ";
    }
    ScalingResult r = scaling_fit(points);
    detail << "ratio(0.05/0.1) " << fmt(points[0].second / points[1].second) << "; exponent " << fmt(r.fitted_exponent);
    bool pass = all_settled && r.fitted_exponent >= -2.3 && r.fitted_exponent <= -1.7;
    return {pass, detail.str()};
}

CriterionResult criterion_7() {
    TrajectoryConfig cfg;
    cfg.epsilon = 0.01;
    cfg.steps = 50000;
    cfg.seed = 7;
    const std::int64_t count = 500;
    EnsembleSummary s = summarize_ensemble(cfg, count);
    g_audit.merge(s.audit);
    std::int64_t settled = 0;
    std::int64_t agree = 0;
    for (const auto &t : s.trajectories) {
        if (t.settling_step) {
            ++settled;
            agree += t.final_agree ? 1 : 0;
        }
    }
    double settled_frac = static_cast<double>(settled) / static_cast<double>(count);
    double agree_frac = settled > 0 ? static_cast<double>(agree) / static_cast<double>(settled) : 0.0;
    bool pass = settled_frac >= 0.95 && agree_frac >= 0.99;
    // Once the system sits in a pointer state, an observer's sign is wrong iff the sum of its T
    // records (mean eps, variance 1 each) is negative: probability Phi(-eps sqrt(T)) per observer.
    double wrong = 0.5 * std::erfc(*cfg.epsilon * std::sqrt(static_cast<double>(cfg.steps)) / std::sqrt(2.0));
    return {pass, std::to_string(count) + " trajectories: settled " + fmt(settled_frac) +
                      ", three-way sign agreement among settled " + fmt(agree_frac) +
                      " (required 0.99; per-observer sign error expected at this horizon " + fmt(wrong) + ")"};
}

CriterionResult criterion_8() {
    std::vector<std::string> problems;
    GhzTable zz = ghz_scenario(GhzBasis::z, GhzBasis::z);
    bool zz_ok = zz.joint.size() == 2;
    for (const auto &row : zz.joint) {
        bool correlated = row.outcomes[0] == row.outcomes[1];
        std::string expect = row.outcomes[0] == Outcome::plus ? "1" : "0";
        zz_ok = zz_ok && correlated && std::abs(row.probability - 0.5) <= 1e-12 &&
                classify_state(row.system_state) == expect;
    }
    if (!zz_ok) {
        problems.push_back("z/z table");
    }

    GhzTable hh = ghz_scenario(GhzBasis::hadamard, GhzBasis::hadamard);
    bool hh_ok = hh.joint.size() == 4;
    for (const auto &row : hh.joint) {
        std::string expect = row.outcomes[0] == row.outcomes[1] ? "+" : "-";
        hh_ok = hh_ok && std::abs(row.probability - 0.25) <= 1e-12 && classify_state(row.system_state) == expect;
    }
    if (!hh_ok) {
        problems.push_back("hadamard/hadamard parity table");
    }

    GhzTable h = ghz_scenario(GhzBasis::hadamard, std::nullopt);
    double worst = 0.0;
    for (const auto &row : h.joint) {
        worst = std::max(worst, max_entry_diff(row.system_state, DensityMatrix::maximally_mixed()));
    }
    if (worst > 1e-12) {
        problems.push_back("single hadamard not maximally mixed");
    }
    std::string detail = problems.empty() ? "z/z, hadamard/hadamard parity, single-hadamard mixed (dev " + fmt(worst) + ")"
                                          : "failed: " + problems.front();
    return {problems.empty(), detail};
}

CriterionResult criterion_9() {
    CounterRng rng(20260109, 0);
    double worst_axis2 = 0.0;
    double worst_generator = 0.0;
    for (int i = 0; i < kInstances; ++i) {
        DensityMatrix rho = random_density_matrix(rng);
        MeasurementAxis axis1 = random_axis(rng);
        std::vector<MeasurementAxis> axis2s = {MeasurementAxis::z_axis(), MeasurementAxis::x_axis(),
                                               MeasurementAxis(0, 1, 0), random_axis(rng), random_axis(rng),
                                               MeasurementAxis::from_z(0.01)};
        for (int steps = 1; steps <= kSteps; ++steps) {
            for (std::size_t k = 1; k < axis2s.size(); ++k) {
                worst_axis2 = std::max(worst_axis2,
                                       marginal_independence_check(rho, axis1, axis2s[0], axis2s[k], steps));
            }
            for (const auto &a2 : axis2s) {
                worst_generator =
                    std::max(worst_generator, generator_equivalence_check(rho, ObserverPair{axis1, a2}, steps));
            }
        }
    }
    bool pass = worst_axis2 <= kExactTol && worst_generator <= kExactTol;
    return {pass, "6 axis-2 choices: max marginal difference " + fmt(worst_axis2) + ", vs single-observer generator " +
                      fmt(worst_generator)};
}

CriterionResult criterion_10() {
    std::ostringstream d;
    d << g_audit.states_checked << " states: min diagonal " << fmt(g_audit.min_diagonal) << ", min det "
      << fmt(g_audit.min_determinant) << ", max trace err " << fmt(g_audit.max_trace_error) << ", max herm err "
      << fmt(g_audit.max_hermiticity_error);
    return {g_audit.states_checked > 0 && g_audit.ok(), d.str()};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<CriterionResult()> run;
    };
    const std::vector<Criterion> criteria = {
        {"oracle equivalence", criterion_1},
        {"UME recovery", criterion_2},
        {"exact martingale", criterion_3},
        {"z-basis full correlation", criterion_4},
        {"eps = 0 no information", criterion_5},
        {"settling scaling exponent", criterion_6},
        {"eps = 0.01 settling and agreement", criterion_7},
        {"GHZ tables", criterion_8},
        {"marginal independence", criterion_9},
        {"positivity and normalization", criterion_10},
    };
    int failures = 0;
    int index = 0;
    for (const auto &c : criteria) {
        ++index;
        auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = c.run();
        } catch (const std::exception &e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += r.pass ? 0 : 1;
        std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << index << " (" << c.name << "): " << r.detail
                  << "  [" << fmt(std::round(secs * 100) / 100) << " s]" << std::endl;
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
