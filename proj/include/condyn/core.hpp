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

#ifndef CONDYN_CORE_HPP
#define CONDYN_CORE_HPP

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace condyn {

using Complex = std::complex<double>;

/// Absolute tolerance used by every invariant check.
inline constexpr double kInvariantTol = 1e-12;
/// Deviations below this are silently repaired by constructors (renormalize, Hermitize).
inline constexpr double kRepairTol = 1e-9;

/// Conditioning on a record that has zero probability.
class ImpossibleRecord : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// A value outside the validity range of an approximate law.
class ParameterRange : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

/// Memory or enumeration guard exceeded.
class ResourceGuard : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Computational basis label. |1> is the +1 eigenstate of sigma_z, |0> the -1 eigenstate.
enum class Basis : int { zero = 0, one = 1 };

/// Measurement result of a spin operator along some axis.
enum class Outcome : int { minus = -1, plus = +1 };

constexpr int value(Outcome n) { return static_cast<int>(n); }
constexpr double sign(Outcome n) { return static_cast<double>(static_cast<int>(n)); }
Outcome outcome_from_int(int v);

/// Unit 3-vector selecting the measured operator x*sx + y*sy + z*sz.
class MeasurementAxis {
   public:
    /// Rejects vectors whose squared norm differs from 1 by more than kInvariantTol.
    MeasurementAxis(double x, double y, double z);

    /// Rescales any nonzero vector onto the unit sphere.
    static MeasurementAxis normalized(double x, double y, double z);
    /// The axis (sqrt(1 - z^2), 0, z) in the x-z half plane with x >= 0.
    static MeasurementAxis from_z(double z);

    static MeasurementAxis z_axis() { return {0.0, 0.0, 1.0}; }
    static MeasurementAxis x_axis() { return {1.0, 0.0, 0.0}; }

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    bool operator==(const MeasurementAxis &) const = default;

   private:
    double x_;
    double y_;
    double z_;
};

std::string to_string(const MeasurementAxis &axis);

/// Element <a| P_n |b> of the projector (I + n (x sx + y sy + z sz)) / 2.
///
/// The phase convention is fixed here: <1|P_n|0> = n (x - i y) / 2 and
/// <0|P_n|1> = n (x + i y) / 2. Everything else that needs a projector goes
/// through this function.
Complex projector_element(const MeasurementAxis &axis, Outcome n, Basis a, Basis b);

/// Full 2x2 projector, indexed [a][b] with index 0 -> |1>, index 1 -> |0>.
std::array<std::array<Complex, 2>, 2> projector(const MeasurementAxis &axis, Outcome n);

/// 2x2 Hermitian, unit-trace, positive matrix. Entries are addressed by basis label.
class DensityMatrix {
   public:
    /// Validates and repairs small deviations; throws std::invalid_argument otherwise.
    DensityMatrix(Complex r11, Complex r10, Complex r01, Complex r00);
    DensityMatrix(double r11, Complex r10, double r00) : DensityMatrix(r11, r10, std::conj(r10), r00) {}

    static DensityMatrix diagonal(double r11, double r00) { return {r11, Complex{}, r00}; }
    static DensityMatrix maximally_mixed() { return diagonal(0.5, 0.5); }
    /// Projector onto a normalized-or-not pure state a1|1> + a0|0>.
    static DensityMatrix pure(Complex a1, Complex a0);

    double r11() const { return r11_; }
    double r00() const { return r00_; }
    Complex r10() const { return r10_; }
    Complex r01() const { return std::conj(r10_); }
    Complex element(Basis a, Basis b) const;

    double trace() const { return r11_ + r00_; }
    double determinant() const { return r11_ * r00_ - std::norm(r10_); }

    bool operator==(const DensityMatrix &) const = default;

   private:
    double r11_;
    Complex r10_;
    double r00_;
};

/// Unnormalized conditional state; weight is its trace, the probability of the record.
class UnnormalizedState {
   public:
    UnnormalizedState(double r11, Complex r10, double r00);

    double r11() const { return r11_; }
    double r00() const { return r00_; }
    Complex r10() const { return r10_; }
    Complex r01() const { return std::conj(r10_); }
    double weight() const { return r11_ + r00_; }
    double determinant() const { return r11_ * r00_ - std::norm(r10_); }

    /// Divides by the weight. Throws ImpossibleRecord when the weight is zero.
    DensityMatrix normalized() const;

   private:
    double r11_;
    Complex r10_;
    double r00_;
};

/// r11 - r00.
double polarization(const DensityMatrix &rho);
/// Tr(rho^2) = r11^2 + r00^2 + 2 |r10|^2.
double purity(const DensityMatrix &rho);

/// Max absolute entrywise difference.
double max_entry_diff(const DensityMatrix &a, const DensityMatrix &b);

std::string to_string(const DensityMatrix &rho);

}  // namespace condyn

#endif  // CONDYN_CORE_HPP
