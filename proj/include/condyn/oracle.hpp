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

// Brute-force state-vector model of the CNOT toy environment. Nothing in
// here calls into dynamics.hpp; it is the independent side of every
// equivalence check.

#ifndef CONDYN_ORACLE_HPP
#define CONDYN_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condyn/core.hpp"
#include "condyn/dynamics.hpp"

namespace condyn {

/// Amplitudes over k qubits. Bit q of the index is the state of qubit q
/// (1 -> |1>). Qubit 0 is the system; qubits 2m-1 and 2m form environment pair m.
class PureStateVector {
   public:
    static constexpr int kMaxQubits = 24;

    /// a1|1> + a0|0> on the system qubit alone.
    static PureStateVector system(Complex a1, Complex a0);
    /// Throws ResourceGuard if num_qubits exceeds kMaxQubits.
    PureStateVector(int num_qubits, std::vector<Complex> amplitudes);

    int num_qubits() const { return num_qubits_; }
    const std::vector<Complex> &amplitudes() const { return amps_; }
    Complex amplitude(std::uint64_t index) const { return amps_[index]; }
    double norm_squared() const;

    /// Controlled NOT.
    void cnot(int control, int target);

   private:
    int num_qubits_;
    std::vector<Complex> amps_;
};

/// Appends two qubits in |0> and applies CNOT(system -> each).
PureStateVector entangle_pair(const PureStateVector &state);

/// Projects `index` onto the outcome-n eigenstate of the axis. The state is
/// returned unnormalized together with its squared norm.
std::pair<PureStateVector, double> measure_qubit(const PureStateVector &state, int index, const MeasurementAxis &axis,
                                                 Outcome n);

/// Removes a qubit known to be in the outcome-n eigenstate of `axis` (i.e. just projected).
PureStateVector factor_out(const PureStateVector &state, int index, const MeasurementAxis &axis, Outcome n);

/// Partial trace over every qubit but the system; unnormalized if the state is.
UnnormalizedState reduced_system_state(const PureStateVector &state);

/// Spectral decomposition of a qubit state: weights (1 +- |r|)/2 with pure eigenvectors.
struct EigenBranch {
    double weight;
    Complex a1;
    Complex a0;
};
std::array<EigenBranch, 2> eigen_branches(const DensityMatrix &rho);

/// One record per step; code packs the steps base-4 with the first step most significant.
using RecordString = std::vector<OutcomePair>;
std::uint64_t record_code(const RecordString &records);
RecordString record_from_code(std::uint64_t code, int steps);
std::string to_string(const RecordString &records);

struct Branch {
    RecordString records;
    double probability;
    DensityMatrix state;
};

/// Distribution over record strings with the conditional system state of each.
/// Branches with probability below kPruneProbability are dropped; entries are sorted by record code.
struct BranchDistribution {
    int steps = 0;
    std::vector<Branch> branches;

    double total_probability() const;
    const Branch *find(const RecordString &records) const;
};

inline constexpr double kPruneProbability = 1e-14;
inline constexpr int kMaxEnumerationSteps = 10;

enum class OracleMode {
    /// Measured pair qubits are factored out; the live state stays at 3 qubits.
    recycled,
    /// Full register kept, both qubits of each pair measured right after entangling.
    full_immediate,
    /// Full register; all pairs entangled first, every measurement deferred to the end.
    full_deferred,
};

/// Exhaustive enumeration of all 4^steps record strings (OpenMP over branches in recycled mode).
BranchDistribution exact_joint_distribution(const DensityMatrix &rho0, const ObserverPair &obs, int steps,
                                            OracleMode mode = OracleMode::recycled);

/// Serial depth-first reference for the recycled mode.
BranchDistribution exact_joint_distribution_serial(const DensityMatrix &rho0, const ObserverPair &obs, int steps);

/// Probability over observer 1's record strings, keyed by base-2 code (first step most significant, '-' = 1).
std::vector<double> observer1_marginal(const BranchDistribution &dist);

enum class GhzBasis { z, hadamard };
GhzBasis parse_ghz_basis(const std::string &token);
std::string to_string(GhzBasis basis);
MeasurementAxis axis_of(GhzBasis basis);

struct GhzRow {
    std::vector<Outcome> outcomes;
    double probability;
    DensityMatrix system_state;
};

struct GhzTable {
    GhzBasis basis1;
    std::optional<GhzBasis> basis2;
    /// Joint outcomes (both observers when basis2 is set).
    std::vector<GhzRow> joint;
    /// Conditioned on observer 1's outcome alone.
    std::vector<GhzRow> observer1;
    /// Conditioned on observer 2's outcome alone (empty when observer 2 does not measure).
    std::vector<GhzRow> observer2;
};

/// (|111> + |000>)/sqrt(2), built by entangling (|1> + |0>)/sqrt(2) with one pair.
PureStateVector ghz_state();

/// Measure E1 in basis1 then (optionally) E2 in basis2.
GhzTable ghz_scenario(GhzBasis basis1, std::optional<GhzBasis> basis2);

/// "1", "0", "+", "-" for the four special pure states, "mixed" for the identity/2, otherwise "other".
std::string classify_state(const DensityMatrix &rho, double tol = 1e-12);

}  // namespace condyn

#endif  // CONDYN_ORACLE_HPP
