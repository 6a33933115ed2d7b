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

#ifndef CONDYN_IO_HPP
#define CONDYN_IO_HPP

#include <ostream>
#include <string>

#include "json.hpp"

#include "condyn/analysis.hpp"
#include "condyn/trajectories.hpp"

namespace condyn {

inline constexpr const char *kToolVersion = "condyn 1.0.0";
inline constexpr const char *kTrajectoryCsvHeader = "step,n1,n2,a_sup,a_obs1,a_obs2,purity";

/// 15 significant digits with a '.' decimal point regardless of locale.
std::string format_double(double v);

void write_trajectory_csv(std::ostream &out, const Trajectory &traj);

nlohmann::json to_json(const DensityMatrix &rho);
nlohmann::json to_json(const MeasurementAxis &axis);
nlohmann::json to_json(const TrajectoryConfig &config);
nlohmann::json to_json(const SettlingStats &stats);
nlohmann::json to_json(const AgreementReport &report, bool include_curve);
nlohmann::json to_json(const StateAudit &audit);
nlohmann::json to_json(const ScalingResult &result);

/// Everything needed to rerun a command and get identical data files.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string rng = kRngAlgorithm;
    std::string version = kToolVersion;
    double wall_seconds = 0.0;

    nlohmann::json to_json() const;
};

/// Writes bytes as-is (LF line endings on every platform). Throws std::runtime_error on I/O failure.
void write_file(const std::string &path, const std::string &content);

}  // namespace condyn

#endif  // CONDYN_IO_HPP
