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

#include "condyn/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace condyn {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

void check_positive(double r11, Complex r10, double r00, const char *what) {
    if (r11 < -kInvariantTol || r00 < -kInvariantTol || r11 * r00 - std::norm(r10) < -kInvariantTol) {
        std::ostringstream msg;
        msg << what << " is not positive semidefinite: r11=" << r11 << " r00=" << r00 << " |r10|=" << std::abs(r10);
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

Outcome outcome_from_int(int v) {
    if (v == 1) {
        return Outcome::plus;
    }
    if (v == -1) {
        return Outcome::minus;
    }
    throw std::invalid_argument("outcome must be +1 or -1, got " + std::to_string(v));
}

MeasurementAxis::MeasurementAxis(double x, double y, double z) : x_(x), y_(y), z_(z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        throw std::invalid_argument("measurement axis has non-finite components");
    }
    double n2 = x * x + y * y + z * z;
    if (std::abs(n2 - 1.0) > kInvariantTol) {
        std::ostringstream msg;
        msg << "measurement axis (" << x << ", " << y << ", " << z << ") is not a unit vector";
        throw std::invalid_argument(msg.str());
    }
}

MeasurementAxis MeasurementAxis::normalized(double x, double y, double z) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("cannot normalize a zero or non-finite axis");
    }
    return {x / n, y / n, z / n};
}

MeasurementAxis MeasurementAxis::from_z(double z) {
    if (!(std::abs(z) <= 1.0)) {
        throw std::invalid_argument("axis z-component must lie in [-1, 1]");
    }
    return {std::sqrt(1.0 - z * z), 0.0, z};
}

std::string to_string(const MeasurementAxis &axis) {
    std::ostringstream out;
    out.precision(17);
    out << axis.x() << "," << axis.y() << "," << axis.z();
    return out.str();
}

Complex projector_element(const MeasurementAxis &axis, Outcome n, Basis a, Basis b) {
    double s = sign(n);
    if (a == Basis::one && b == Basis::one) {
        return {(1.0 + s * axis.z()) / 2.0, 0.0};
    }
    if (a == Basis::zero && b == Basis::zero) {
        return {(1.0 - s * axis.z()) / 2.0, 0.0};
    }
    if (a == Basis::one) {
        return {s * axis.x() / 2.0, -s * axis.y() / 2.0};
    }
    return {s * axis.x() / 2.0, s * axis.y() / 2.0};
}

std::array<std::array<Complex, 2>, 2> projector(const MeasurementAxis &axis, Outcome n) {
    return {{{projector_element(axis, n, Basis::one, Basis::one), projector_element(axis, n, Basis::one, Basis::zero)},
             {projector_element(axis, n, Basis::zero, Basis::one),
              projector_element(axis, n, Basis::zero, Basis::zero)}}};
}

DensityMatrix::DensityMatrix(Complex r11, Complex r10, Complex r01, Complex r00) {
    if (!finite(r11) || !finite(r10) || !finite(r01) || !finite(r00)) {
        throw std::invalid_argument("density matrix has non-finite entries");
    }
    double herm = std::max({std::abs(r11.imag()), std::abs(r00.imag()), std::abs(r01 - std::conj(r10))});
    if (herm > kRepairTol) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    double t = r11.real() + r00.real();
    if (std::abs(t - 1.0) > kRepairTol) {
        std::ostringstream msg;
        msg << "density matrix trace " << t << " is not 1";
        throw std::invalid_argument(msg.str());
    }
    r11_ = r11.real();
    r00_ = r00.real();
    r10_ = herm > 0.0 ? (r10 + std::conj(r01)) / 2.0 : r10;
    if (t != 1.0) {
        r11_ /= t;
        r00_ /= t;
        r10_ /= t;
    }
    check_positive(r11_, r10_, r00_, "density matrix");
}

DensityMatrix DensityMatrix::pure(Complex a1, Complex a0) {
    double n = std::norm(a1) + std::norm(a0);
    if (!(n > 0.0)) {
        throw std::invalid_argument("cannot build a pure state from a zero vector");
    }
    return {std::norm(a1) / n, a1 * std::conj(a0) / n, std::norm(a0) / n};
}

Complex DensityMatrix::element(Basis a, Basis b) const {
    if (a == b) {
        return a == Basis::one ? r11_ : r00_;
    }
    return a == Basis::one ? r10_ : std::conj(r10_);
}

UnnormalizedState::UnnormalizedState(double r11, Complex r10, double r00) : r11_(r11), r10_(r10), r00_(r00) {
    if (!std::isfinite(r11) || !std::isfinite(r00) || !finite(r10)) {
        throw std::invalid_argument("unnormalized state has non-finite entries");
    }
    double w = r11 + r00;
    if (w < -kInvariantTol || w > 1.0 + kInvariantTol) {
        throw std::invalid_argument("unnormalized state weight outside [0, 1]");
    }
    check_positive(r11, r10, r00, "unnormalized state");
}

DensityMatrix UnnormalizedState::normalized() const {
    double w = weight();
    if (!(w > 0.0)) {
        throw ImpossibleRecord("conditioning on a zero-probability record");
    }
    return {r11_ / w, r10_ / w, r00_ / w};
}

double polarization(const DensityMatrix &rho) { return rho.r11() - rho.r00(); }

double purity(const DensityMatrix &rho) {
    return rho.r11() * rho.r11() + rho.r00() * rho.r00() + 2.0 * std::norm(rho.r10());
}

double max_entry_diff(const DensityMatrix &a, const DensityMatrix &b) {
    return std::max({std::abs(a.r11() - b.r11()), std::abs(a.r00() - b.r00()), std::abs(a.r10() - b.r10())});
}

std::string to_string(const DensityMatrix &rho) {
    std::ostringstream out;
    out.precision(6);
    out << "[[" << rho.r11() << ", " << rho.r10().real() << (rho.r10().imag() < 0 ? "" : "+") << rho.r10().imag()
        << "i], [" << rho.r01().real() << (rho.r01().imag() < 0 ? "" : "+") << rho.r01().imag() << "i, " << rho.r00()
        << "]]";
    return out.str();
}

}  // namespace condyn
