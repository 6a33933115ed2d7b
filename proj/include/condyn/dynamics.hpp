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

#ifndef CONDYN_DYNAMICS_HPP
#define CONDYN_DYNAMICS_HPP

#include <array>

#include "condyn/core.hpp"

namespace condyn {

/// Measurement axes of the two observers. Observer 1 reads environment qubit (1, t_n),
/// observer 2 reads (2, t_n).
struct ObserverPair {
    MeasurementAxis axis1;
    MeasurementAxis axis2;

    /// Both observers on (sqrt(1 - eps^2), 0, eps).
    static ObserverPair symmetric(double eps) { return {MeasurementAxis::from_z(eps), MeasurementAxis::from_z(eps)}; }
};

/// Overlap of the measured axis with sigma_z; 0 <= eps <= 1.
class Epsilon {
   public:
    explicit Epsilon(double v);
    double value() const { return value_; }

   private:
    double value_;
};

struct OutcomePair {
    Outcome n1;
    Outcome n2;
    bool operator==(const OutcomePair &) const = default;
};

/// Canonical ordering used for probability tables: (+,+), (+,-), (-,+), (-,-).
inline constexpr std::array<OutcomePair, 4> kOutcomePairs = {{{Outcome::plus, Outcome::plus},
                                                              {Outcome::plus, Outcome::minus},
                                                              {Outcome::minus, Outcome::plus},
                                                              {Outcome::minus, Outcome::minus}}};

constexpr int pair_index(OutcomePair p) {
    return (p.n1 == Outcome::plus ? 0 : 2) + (p.n2 == Outcome::plus ? 0 : 1);
}

/// Unconditional update: drop the coherences, keep the populations.
DensityMatrix ume_step(const DensityMatrix &rho);

/// Partial trace over the freshly entangled pair after projecting it on (n1, n2).
UnnormalizedState conditional_unnormalized(const DensityMatrix &rho, const ObserverPair &obs, Outcome n1, Outcome n2);

/// Joint record probability; only the z-components of the axes matter.
double outcome_probability(const DensityMatrix &rho, const ObserverPair &obs, Outcome n1, Outcome n2);

/// All four joint probabilities in kOutcomePairs order.
std::array<double, 4> outcome_probabilities(const DensityMatrix &rho, const ObserverPair &obs);

/// Supervisor update conditioned on both records. Throws ImpossibleRecord for zero-probability pairs.
DensityMatrix mocme_update(const DensityMatrix &rho, const ObserverPair &obs, Outcome n1, Outcome n2);

/// Single-observer update from that observer's own record; the result is always diagonal.
DensityMatrix socme_update(const DensityMatrix &rho_obs, double z_alpha, Outcome n);

double single_observer_probability(const DensityMatrix &rho_obs, double z_alpha, Outcome n);

// Leading order in eps of the exact laws above, for z1 = z2 = eps.

/// a + eps (n1 + n2)(1 - a^2), clamped to [-1, 1].
double small_eps_supervisor_step(double a, Outcome n1, Outcome n2, Epsilon eps);

/// (1 + eps (n1 + n2) a) / 4. Throws ParameterRange if the value would be negative.
double small_eps_outcome_prob(double a, Outcome n1, Outcome n2, Epsilon eps);

/// a + eps n (1 - a^2), clamped to [-1, 1].
double small_eps_observer_step(double a_obs, Outcome n, Epsilon eps);

}  // namespace condyn

#endif  // CONDYN_DYNAMICS_HPP
