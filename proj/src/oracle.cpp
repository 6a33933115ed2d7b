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

#include "condyn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>

namespace condyn {

namespace {

constexpr std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

/// Inserts a zero bit at position q.
constexpr std::uint64_t spread(std::uint64_t j, int q) {
    std::uint64_t low = j & (bit(q) - 1);
    return ((j >> q) << (q + 1)) | low;
}

void check_steps(int steps) {
    if (steps < 0) {
        throw std::invalid_argument("step count must be nonnegative");
    }
    if (steps > kMaxEnumerationSteps) {
        throw ResourceGuard("enumeration is limited to " + std::to_string(kMaxEnumerationSteps) + " steps (4^steps branches)");
    }
}

/// Unnormalized mixture accumulated over eigen-branches.
struct Accumulator {
    double r11 = 0.0;
    double r00 = 0.0;
    Complex r10{};

    void add(double weight, const UnnormalizedState &s) {
        r11 += weight * s.r11();
        r00 += weight * s.r00();
        r10 += weight * s.r10();
    }
    double probability() const { return r11 + r00; }
    DensityMatrix state() const {
        double p = probability();
        return {r11 / p, r10 / p, r00 / p};
    }
};

/// Evolves one pure eigen-branch along a fixed record string.
UnnormalizedState evolve_branch(const EigenBranch &eb, const ObserverPair &obs, const RecordString &records,
                                OracleMode mode) {
    PureStateVector state = PureStateVector::system(eb.a1, eb.a0);
    switch (mode) {
        case OracleMode::recycled:
            for (const auto &r : records) {
                state = entangle_pair(state);
                state = measure_qubit(state, 1, obs.axis1, r.n1).first;
                state = measure_qubit(state, 2, obs.axis2, r.n2).first;
                state = factor_out(state, 2, obs.axis2, r.n2);
                state = factor_out(state, 1, obs.axis1, r.n1);
            }
            break;
        case OracleMode::full_immediate:
            for (const auto &r : records) {
                state = entangle_pair(state);
                int q = state.num_qubits() - 2;
                state = measure_qubit(state, q, obs.axis1, r.n1).first;
                state = measure_qubit(state, q + 1, obs.axis2, r.n2).first;
            }
            break;
        case OracleMode::full_deferred:
            for (std::size_t s = 0; s < records.size(); ++s) {
                state = entangle_pair(state);
            }
            for (std::size_t s = 0; s < records.size(); ++s) {
                int q = 2 * static_cast<int>(s) + 1;
                state = measure_qubit(state, q, obs.axis1, records[s].n1).first;
                state = measure_qubit(state, q + 1, obs.axis2, records[s].n2).first;
            }
            break;
    }
    return reduced_system_state(state);
}

void dfs(const std::array<EigenBranch, 2> &branches, std::array<PureStateVector, 2> states, const ObserverPair &obs,
         int remaining, RecordString &prefix, std::vector<Branch> &out) {
    Accumulator acc;
    for (int k = 0; k < 2; ++k) {
        acc.add(branches[k].weight, reduced_system_state(states[k]));
    }
    if (acc.probability() < kPruneProbability) {
        return;
    }
    if (remaining == 0) {
        out.push_back({prefix, acc.probability(), acc.state()});
        return;
    }
    for (const auto &pair : kOutcomePairs) {
        std::array<PureStateVector, 2> next = states;
        for (auto &s : next) {
            s = entangle_pair(s);
            s = measure_qubit(s, 1, obs.axis1, pair.n1).first;
            s = measure_qubit(s, 2, obs.axis2, pair.n2).first;
            s = factor_out(s, 2, obs.axis2, pair.n2);
            s = factor_out(s, 1, obs.axis1, pair.n1);
        }
        prefix.push_back(pair);
        dfs(branches, std::move(next), obs, remaining - 1, prefix, out);
        prefix.pop_back();
    }
}

}  // namespace

PureStateVector PureStateVector::system(Complex a1, Complex a0) { return {1, {a0, a1}}; }

PureStateVector::PureStateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 1) {
        throw std::invalid_argument("state vector needs at least one qubit");
    }
    if (num_qubits > kMaxQubits) {
        throw ResourceGuard("state vector limited to " + std::to_string(kMaxQubits) + " qubits");
    }
    if (amps_.size() != bit(num_qubits)) {
        throw std::invalid_argument("amplitude count does not match 2^num_qubits");
    }
}

double PureStateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void PureStateVector::cnot(int control, int target) {
    if (control == target || control < 0 || target < 0 || control >= num_qubits_ || target >= num_qubits_) {
        throw std::invalid_argument("bad CNOT qubit indices");
    }
    for (std::uint64_t i = 0; i < amps_.size(); ++i) {
        if ((i & bit(control)) && !(i & bit(target))) {
            std::swap(amps_[i], amps_[i | bit(target)]);
        }
    }
}

PureStateVector entangle_pair(const PureStateVector &state) {
    int k = state.num_qubits();
    if (k + 2 > PureStateVector::kMaxQubits) {
        throw ResourceGuard("state vector limited to " + std::to_string(PureStateVector::kMaxQubits) + " qubits");
    }
    std::vector<Complex> amps(bit(k + 2));
    std::copy(state.amplitudes().begin(), state.amplitudes().end(), amps.begin());
    PureStateVector out(k + 2, std::move(amps));
    out.cnot(0, k);
    out.cnot(0, k + 1);
    return out;
}

std::pair<PureStateVector, double> measure_qubit(const PureStateVector &state, int index, const MeasurementAxis &axis,
                                                 Outcome n) {
    if (index < 0 || index >= state.num_qubits()) {
        throw std::invalid_argument("qubit index out of range");
    }
    auto p = projector(axis, n);
    std::vector<Complex> amps = state.amplitudes();
    double prob = 0.0;
    for (std::uint64_t j = 0; j < amps.size() / 2; ++j) {
        std::uint64_t i0 = spread(j, index);
        std::uint64_t i1 = i0 | bit(index);
        Complex v1 = amps[i1];
        Complex v0 = amps[i0];
        amps[i1] = p[0][0] * v1 + p[0][1] * v0;
        amps[i0] = p[1][0] * v1 + p[1][1] * v0;
        prob += std::norm(amps[i1]) + std::norm(amps[i0]);
    }
    return {PureStateVector(state.num_qubits(), std::move(amps)), prob};
}

PureStateVector factor_out(const PureStateVector &state, int index, const MeasurementAxis &axis, Outcome n) {
    if (index < 0 || index >= state.num_qubits() || state.num_qubits() < 2) {
        throw std::invalid_argument("qubit index out of range");
    }
    // Eigenvector |e> = P|b>/sqrt(P_bb) for the column with the larger diagonal.
    auto p = projector(axis, n);
    int col = p[0][0].real() >= p[1][1].real() ? 0 : 1;
    double norm = std::sqrt(p[col][col].real());
    Complex e1 = p[0][col] / norm;
    Complex e0 = p[1][col] / norm;
    const auto &amps = state.amplitudes();
    std::vector<Complex> out(amps.size() / 2);
    for (std::uint64_t j = 0; j < out.size(); ++j) {
        std::uint64_t i0 = spread(j, index);
        out[j] = std::conj(e1) * amps[i0 | bit(index)] + std::conj(e0) * amps[i0];
    }
    return {state.num_qubits() - 1, std::move(out)};
}

UnnormalizedState reduced_system_state(const PureStateVector &state) {
    const auto &amps = state.amplitudes();
    double r11 = 0.0;
    double r00 = 0.0;
    Complex r10{};
    for (std::uint64_t e = 0; e < amps.size(); e += 2) {
        Complex a0 = amps[e];
        Complex a1 = amps[e | 1];
        r11 += std::norm(a1);
        r00 += std::norm(a0);
        r10 += a1 * std::conj(a0);
    }
    return {r11, r10, r00};
}

std::array<EigenBranch, 2> eigen_branches(const DensityMatrix &rho) {
    double rx = 2.0 * rho.r10().real();
    double ry = -2.0 * rho.r10().imag();
    double rz = rho.r11() - rho.r00();
    double len = std::sqrt(rx * rx + ry * ry + rz * rz);
    MeasurementAxis axis = len > 1e-300 ? MeasurementAxis::normalized(rx, ry, rz) : MeasurementAxis::z_axis();
    std::array<EigenBranch, 2> out{};
    for (int k = 0; k < 2; ++k) {
        Outcome n = k == 0 ? Outcome::plus : Outcome::minus;
        auto p = projector(axis, n);
        int col = p[0][0].real() >= p[1][1].real() ? 0 : 1;
        double norm = std::sqrt(p[col][col].real());
        out[k] = {std::clamp((1.0 + sign(n) * len) / 2.0, 0.0, 1.0), p[0][col] / norm, p[1][col] / norm};
    }
    return out;
}

std::uint64_t record_code(const RecordString &records) {
    std::uint64_t code = 0;
    for (const auto &r : records) {
        code = code * 4 + static_cast<std::uint64_t>(pair_index(r));
    }
    return code;
}

RecordString record_from_code(std::uint64_t code, int steps) {
    RecordString out(static_cast<std::size_t>(steps), kOutcomePairs[0]);
    for (int s = steps - 1; s >= 0; --s) {
        out[static_cast<std::size_t>(s)] = kOutcomePairs[code % 4];
        code /= 4;
    }
    return out;
}

std::string to_string(const RecordString &records) {
    std::string out;
    for (std::size_t s = 0; s < records.size(); ++s) {
        if (s > 0) {
            out += ' ';
        }
        out += records[s].n1 == Outcome::plus ? '+' : '-';
        out += records[s].n2 == Outcome::plus ? '+' : '-';
    }
    return out;
}

double BranchDistribution::total_probability() const {
    double s = 0.0;
    for (const auto &b : branches) {
        s += b.probability;
    }
    return s;
}

const Branch *BranchDistribution::find(const RecordString &records) const {
    std::uint64_t code = record_code(records);
    auto it = std::lower_bound(branches.begin(), branches.end(), code,
                               [](const Branch &b, std::uint64_t c) { return record_code(b.records) < c; });
    if (it != branches.end() && record_code(it->records) == code) {
        return &*it;
    }
    return nullptr;
}

BranchDistribution exact_joint_distribution(const DensityMatrix &rho0, const ObserverPair &obs, int steps,
                                            OracleMode mode) {
    check_steps(steps);
    if (mode != OracleMode::recycled && 1 + 2 * steps > PureStateVector::kMaxQubits) {
        throw ResourceGuard("full-register oracle exceeds the qubit limit");
    }
    auto eb = eigen_branches(rho0);
    const auto count = static_cast<std::int64_t>(std::uint64_t{1} << (2 * steps));
    std::vector<std::optional<Branch>> slots(static_cast<std::size_t>(count));

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t code = 0; code < count; ++code) {
        try {
            RecordString records = record_from_code(static_cast<std::uint64_t>(code), steps);
            Accumulator acc;
            for (const auto &b : eb) {
                if (b.weight > 0.0) {
                    acc.add(b.weight, evolve_branch(b, obs, records, mode));
                }
            }
            if (acc.probability() >= kPruneProbability) {
                slots[static_cast<std::size_t>(code)] = Branch{std::move(records), acc.probability(), acc.state()};
            }
        } catch (...) {
#pragma omp critical(condyn_oracle_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    BranchDistribution dist;
    dist.steps = steps;
    for (auto &s : slots) {
        if (s) {
            dist.branches.push_back(std::move(*s));
        }
    }
    return dist;
}

BranchDistribution exact_joint_distribution_serial(const DensityMatrix &rho0, const ObserverPair &obs, int steps) {
    check_steps(steps);
    auto eb = eigen_branches(rho0);
    std::array<PureStateVector, 2> states = {PureStateVector::system(eb[0].a1, eb[0].a0),
                                             PureStateVector::system(eb[1].a1, eb[1].a0)};
    BranchDistribution dist;
    dist.steps = steps;
    RecordString prefix;
    dfs(eb, std::move(states), obs, steps, prefix, dist.branches);
    return dist;
}

std::vector<double> observer1_marginal(const BranchDistribution &dist) {
    std::vector<double> out(std::size_t{1} << dist.steps, 0.0);
    for (const auto &b : dist.branches) {
        std::size_t code = 0;
        for (const auto &r : b.records) {
            code = code * 2 + (r.n1 == Outcome::plus ? 0 : 1);
        }
        out[code] += b.probability;
    }
    return out;
}

GhzBasis parse_ghz_basis(const std::string &token) {
    if (token == "z") {
        return GhzBasis::z;
    }
    if (token == "hadamard" || token == "x") {
        return GhzBasis::hadamard;
    }
    throw std::invalid_argument("unknown basis '" + token + "' (expected z or hadamard)");
}

std::string to_string(GhzBasis basis) { return basis == GhzBasis::z ? "z" : "hadamard"; }

MeasurementAxis axis_of(GhzBasis basis) {
    return basis == GhzBasis::z ? MeasurementAxis::z_axis() : MeasurementAxis::x_axis();
}

PureStateVector ghz_state() {
    const double h = 1.0 / std::sqrt(2.0);
    return entangle_pair(PureStateVector::system(h, h));
}

GhzTable ghz_scenario(GhzBasis basis1, std::optional<GhzBasis> basis2) {
    GhzTable table{basis1, basis2, {}, {}, {}};
    const PureStateVector ghz = ghz_state();
    const MeasurementAxis ax1 = axis_of(basis1);
    for (Outcome n1 : {Outcome::plus, Outcome::minus}) {
        auto [s1, p1] = measure_qubit(ghz, 1, ax1, n1);
        if (p1 >= kPruneProbability) {
            table.observer1.push_back({{n1}, p1, reduced_system_state(s1).normalized()});
        }
        if (!basis2) {
            continue;
        }
        for (Outcome n2 : {Outcome::plus, Outcome::minus}) {
            auto [s2, p2] = measure_qubit(s1, 2, axis_of(*basis2), n2);
            if (p2 >= kPruneProbability) {
                table.joint.push_back({{n1, n2}, p2, reduced_system_state(s2).normalized()});
            }
        }
    }
    if (basis2) {
        for (Outcome n2 : {Outcome::plus, Outcome::minus}) {
            auto [s2, p2] = measure_qubit(ghz, 2, axis_of(*basis2), n2);
            if (p2 >= kPruneProbability) {
                table.observer2.push_back({{n2}, p2, reduced_system_state(s2).normalized()});
            }
        }
    } else {
        table.joint = table.observer1;
    }
    return table;
}

std::string classify_state(const DensityMatrix &rho, double tol) {
    struct Named {
        const char *name;
        DensityMatrix rho;
    };
    static const Named kNamed[] = {
        {"1", DensityMatrix::diagonal(1.0, 0.0)},   {"0", DensityMatrix::diagonal(0.0, 1.0)},
        {"+", DensityMatrix(0.5, 0.5, 0.5)},        {"-", DensityMatrix(0.5, -0.5, 0.5)},
        {"mixed", DensityMatrix::maximally_mixed()},
    };
    for (const auto &n : kNamed) {
        if (max_entry_diff(rho, n.rho) <= tol) {
            return n.name;
        }
    }
    return "other";
}

}  // namespace condyn
