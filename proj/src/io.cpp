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

#include "condyn/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace condyn {

namespace {

nlohmann::json optional_json(const std::optional<double> &v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("number formatting failed");
    }
    return {buf, res.ptr};
}

void write_trajectory_csv(std::ostream &out, const Trajectory &traj) {
    out << kTrajectoryCsvHeader << '\n';
    for (const auto &p : traj.points) {
        out << std::to_string(p.step) << ',' << std::to_string(value(p.n1)) << ',' << std::to_string(value(p.n2)) << ',' << format_double(p.a_sup) << ','
            << format_double(p.a_obs1) << ',' << format_double(p.a_obs2) << ',' << format_double(p.purity_sup) << '\n';
    }
}

nlohmann::json to_json(const DensityMatrix &rho) {
    return {{"r11", rho.r11()}, {"r00", rho.r00()}, {"r10_re", rho.r10().real()}, {"r10_im", rho.r10().imag()}};
}

nlohmann::json to_json(const MeasurementAxis &axis) { return nlohmann::json::array({axis.x(), axis.y(), axis.z()}); }

nlohmann::json to_json(const TrajectoryConfig &config) {
    ObserverPair obs = config.observers();
    nlohmann::json j = {
        {"epsilon", config.epsilon ? nlohmann::json(*config.epsilon) : nlohmann::json()},
        {"axis1", to_json(obs.axis1)},
        {"axis2", to_json(obs.axis2)},
        {"axes_explicit", config.axes.has_value()},
        {"steps", config.steps},
        {"seed", config.seed},
        {"initial_rho", to_json(config.initial_rho)},
        {"mode", to_string(config.mode)},
    };
    return j;
}

nlohmann::json to_json(const SettlingStats &stats) {
    return {
        {"count", stats.count},
        {"settled", stats.settled},
        {"censored", stats.censored},
        {"horizon", stats.horizon},
        {"mean_settling_steps", optional_json(stats.mean_settled)},
        {"stderr_settling_steps", optional_json(stats.stderr_settled)},
        {"mean_settling_steps_with_censored", stats.mean_with_censored},
    };
}

nlohmann::json to_json(const AgreementReport &report, bool include_curve) {
    nlohmann::json j = {
        {"fraction_all_agree_final", report.fraction_all_agree_final},
        {"mean_steps_to_agreement", optional_json(report.mean_steps_to_agreement)},
    };
    if (include_curve) {
        j["curve"] = report.curve;
    }
    return j;
}

nlohmann::json to_json(const StateAudit &audit) {
    return {
        {"states_checked", audit.states_checked},
        {"min_diagonal", audit.min_diagonal},
        {"min_determinant", audit.min_determinant},
        {"max_trace_error", audit.max_trace_error},
        {"max_hermiticity_error", audit.max_hermiticity_error},
        {"ok", audit.ok()},
    };
}

nlohmann::json to_json(const ScalingResult &result) {
    return {
        {"epsilons", result.epsilons},
        {"mean_settling_steps", result.mean_settling_steps},
        {"fitted_exponent", result.fitted_exponent},
        {"fitted_log_prefactor", result.fitted_log_prefactor},
        {"fit_residual", result.fit_residual},
    };
}

nlohmann::json RunManifest::to_json() const {
    return {
        {"command", command}, {"config", config},   {"seed", seed},
        {"rng", rng},         {"version", version}, {"wall_seconds", wall_seconds},
    };
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    f << content;
    if (!f) {
        throw std::runtime_error("failed writing " + path);
    }
}

}  // namespace condyn
