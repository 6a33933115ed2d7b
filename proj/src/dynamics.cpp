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

#include "condyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condyn {

namespace {

double clamp_unit(double a) { return std::clamp(a, -1.0, 1.0); }

void check_polarization(double a) {
    if (!(std::abs(a) <= 1.0)) {
        throw std::invalid_argument("polarization must lie in [-1, 1]");
    }
}

void check_z(double z) {
    if (!(std::abs(z) <= 1.0)) {
        throw std::invalid_argument("axis z-component must lie in [-1, 1]");
    }
}

}  // namespace

Epsilon::Epsilon(double v) : value_(v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("epsilon must lie in [0, 1]");
    }
}

DensityMatrix ume_step(const DensityMatrix &rho) { return DensityMatrix::diagonal(rho.r11(), rho.r00()); }

UnnormalizedState conditional_unnormalized(const DensityMatrix &rho, const ObserverPair &obs, Outcome n1, Outcome n2) {
    // Tr_E (|a><b| x |a><b|_1 x |a><b|_2 P1 x P2) = rho_ab <b|P1|a> <b|P2|a>.
    auto weight = [&](Basis a, Basis b) {
        return projector_element(obs.axis1, n1, b, a) * projector_element(obs.axis2, n2, b, a);
    };
    double r11 = rho.r11() * weight(Basis::one, Basis::one).real();
    double r00 = rho.r00() * weight(Basis::zero, Basis::zero).real();
    Complex r10 = rho.r10() * weight(Basis::one, Basis::zero);
    return {r11, r10, r00};
}

double outcome_probability(const DensityMatrix &rho, const ObserverPair &obs, Outcome n1, Outcome n2) {
    double s1 = sign(n1) * obs.axis1.z();
    double s2 = sign(n2) * obs.axis2.z();
    return 0.25 * rho.r11() * (1.0 + s1) * (1.0 + s2) + 0.25 * rho.r00() * (1.0 - s1) * (1.0 - s2);
}

std::array<double, 4> outcome_probabilities(const DensityMatrix &rho, const ObserverPair &obs) {
    std::array<double, 4> p{};
    for (const auto &pair : kOutcomePairs) {
        p[pair_index(pair)] = outcome_probability(rho, obs, pair.n1, pair.n2);
    }
    return p;
}

DensityMatrix mocme_update(const DensityMatrix &rho, const ObserverPair &obs, Outcome n1, Outcome n2) {
    return conditional_unnormalized(rho, obs, n1, n2).normalized();
}

DensityMatrix socme_update(const DensityMatrix &rho_obs, double z_alpha, Outcome n) {
    check_z(z_alpha);
    double s = sign(n) * z_alpha;
    double w11 = rho_obs.r11() * (1.0 + s);
    double w00 = rho_obs.r00() * (1.0 - s);
    double denom = w11 + w00;
    if (!(denom > 0.0)) {
        throw ImpossibleRecord("single-observer record has zero probability");
    }
    return DensityMatrix::diagonal(w11 / denom, w00 / denom);
}

double single_observer_probability(const DensityMatrix &rho_obs, double z_alpha, Outcome n) {
    check_z(z_alpha);
    double s = sign(n) * z_alpha;
    return 0.5 * rho_obs.r11() * (1.0 + s) + 0.5 * rho_obs.r00() * (1.0 - s);
}

double small_eps_supervisor_step(double a, Outcome n1, Outcome n2, Epsilon eps) {
    check_polarization(a);
    return clamp_unit(a + eps.value() * (sign(n1) + sign(n2)) * (1.0 - a * a));
}

double small_eps_outcome_prob(double a, Outcome n1, Outcome n2, Epsilon eps) {
    check_polarization(a);
    double p = 0.25 * (1.0 + eps.value() * (sign(n1) + sign(n2)) * a);
    if (p < 0.0) {
        std::ostringstream msg;
        msg << "truncated outcome law is negative for eps=" << eps.value() << " a=" << a;
        throw ParameterRange(msg.str());
    }
    return p;
}

double small_eps_observer_step(double a_obs, Outcome n, Epsilon eps) {
    check_polarization(a_obs);
    return clamp_unit(a_obs + eps.value() * sign(n) * (1.0 - a_obs * a_obs));
}

}  // namespace condyn
