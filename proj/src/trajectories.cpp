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
#include <exception>
#include <sstream>

namespace condyn {

namespace {

void run_exact(const TrajectoryConfig &config, CounterRng &rng, const StepSink &sink) {
    const ObserverPair obs = config.observers();
    DensityMatrix sup = config.initial_rho;
    DensityMatrix obs1 = config.initial_rho;
    DensityMatrix obs2 = config.initial_rho;
    for (std::int64_t step = 1; step <= config.steps; ++step) {
        rng.seek(static_cast<std::uint32_t>(step));
        OutcomePair pair = sample_outcome_pair(outcome_probabilities(sup, obs), rng);
        sup = mocme_update(sup, obs, pair.n1, pair.n2);
        obs1 = socme_update(obs1, obs.axis1.z(), pair.n1);
        obs2 = socme_update(obs2, obs.axis2.z(), pair.n2);
        TrajectoryPoint pt{step, pair.n1, pair.n2, polarization(sup), polarization(obs1), polarization(obs2), purity(sup)};
        sink(StepView{pt, &sup, &obs1, &obs2});
    }
}

void run_small_eps(const TrajectoryConfig &config, CounterRng &rng, const StepSink &sink) {
    const Epsilon eps(*config.epsilon);
    double a = polarization(config.initial_rho);
    double a1 = a;
    double a2 = a;
    for (std::int64_t step = 1; step <= config.steps; ++step) {
        if (eps.value() * std::abs(a) > 0.5) {
            std::ostringstream msg;
            msg << "truncated law invalid at step " << step << ": eps*|A| = " << eps.value() * std::abs(a) << " > 1/2";
            throw ParameterRange(msg.str());
        }
        rng.seek(static_cast<std::uint32_t>(step));
        std::array<double, 4> probs{};
        for (const auto &p : kOutcomePairs) {
            probs[pair_index(p)] = small_eps_outcome_prob(a, p.n1, p.n2, eps);
        }
        OutcomePair pair = sample_outcome_pair(probs, rng);
        a = small_eps_supervisor_step(a, pair.n1, pair.n2, eps);
        a1 = small_eps_observer_step(a1, pair.n1, eps);
        a2 = small_eps_observer_step(a2, pair.n2, eps);
        TrajectoryPoint pt{step, pair.n1, pair.n2, a, a1, a2, (1.0 + a * a) / 2.0};
        sink(StepView{pt, nullptr, nullptr, nullptr});
    }
}

}  // namespace

std::string to_string(TrajectoryMode mode) { return mode == TrajectoryMode::exact ? "exact" : "small-eps"; }

TrajectoryMode parse_trajectory_mode(const std::string &token) {
    if (token == "exact") {
        return TrajectoryMode::exact;
    }
    if (token == "small-eps") {
        return TrajectoryMode::small_eps;
    }
    throw std::invalid_argument("unknown mode '" + token + "' (expected exact or small-eps)");
}

void TrajectoryConfig::validate() const {
    if (epsilon.has_value() == axes.has_value()) {
        throw std::invalid_argument("exactly one of epsilon or explicit axes must be given");
    }
    if (epsilon) {
        Epsilon check(*epsilon);
        (void)check;
    }
    if (steps < 1) {
        throw std::invalid_argument("steps must be at least 1");
    }
    if (steps > std::int64_t{0xFFFFFFFF}) {
        throw ResourceGuard("steps exceed the 32-bit RNG step counter");
    }
    if (mode == TrajectoryMode::small_eps && !epsilon) {
        throw std::invalid_argument("small-eps mode requires a symmetric epsilon configuration");
    }
}

ObserverPair TrajectoryConfig::observers() const {
    return axes ? *axes : ObserverPair::symmetric(*epsilon);
}

OutcomePair sample_outcome_pair(const std::array<double, 4> &probs, double uniform) {
    std::array<double, 4> p = probs;
    double total = 0.0;
    for (auto &x : p) {
        if (x < -1e-9 || !std::isfinite(x)) {
            throw std::invalid_argument("negative or non-finite outcome probability");
        }
        x = std::max(x, 0.0);
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("outcome probabilities do not sum to 1");
    }
    double target = uniform * total;
    double cum = 0.0;
    int last = -1;
    for (int i = 0; i < 4; ++i) {
        if (p[i] <= 0.0) {
            continue;
        }
        cum += p[i];
        last = i;
        if (target < cum) {
            return kOutcomePairs[i];
        }
    }
    return kOutcomePairs[last];
}

OutcomePair sample_outcome_pair(const std::array<double, 4> &probs, CounterRng &rng) {
    return sample_outcome_pair(probs, rng.uniform());
}

void run_trajectory(const TrajectoryConfig &config, std::uint64_t index, const StepSink &sink) {
    config.validate();
    CounterRng rng(config.seed, index);
    if (config.mode == TrajectoryMode::exact) {
        run_exact(config, rng, sink);
    } else {
        run_small_eps(config, rng, sink);
    }
}

Trajectory run_trajectory(const TrajectoryConfig &config, std::uint64_t index) {
    Trajectory t{config, index, {}};
    t.points.reserve(static_cast<std::size_t>(config.steps));
    run_trajectory(config, index, [&](const StepView &v) { t.points.push_back(v.point); });
    return t;
}

std::vector<Trajectory> run_ensemble(const TrajectoryConfig &config, std::int64_t count) {
    if (count < 1) {
        throw std::invalid_argument("ensemble count must be at least 1");
    }
    config.validate();
    std::vector<Trajectory> out(static_cast<std::size_t>(count));
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = run_trajectory(config, static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical(condyn_ensemble_error)
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

std::vector<Trajectory> run_ensemble_serial(const TrajectoryConfig &config, std::int64_t count) {
    if (count < 1) {
        throw std::invalid_argument("ensemble count must be at least 1");
    }
    std::vector<Trajectory> out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        out.push_back(run_trajectory(config, static_cast<std::uint64_t>(i)));
    }
    return out;
}

}  // namespace condyn
